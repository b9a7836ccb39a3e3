#pragma once

#include <array>
#include <vector>

#include "biewos/greens.hpp"
#include "biewos/types.hpp"

namespace biewos {

struct GaussRule1D {
    VecX nodes;   // strictly increasing in (-1,1)
    VecX weights; // positive, sum to 2
    int order = 0;
};

// Nodes/weights by Newton iteration on Legendre polynomials, 1 <= n <= 64.
GaussRule1D gauss_legendre(int n);

// Tensor rule on the hemispherical cap: theta_i = (pi/4)(xi_i+1),
// phi_j = pi(xi_j+1), weight includes the surface element (pi^2/4) a^2 sin(theta_i).
struct CapNode {
    Vec3 point;
    Real weight;
    Real theta, phi;
};
std::vector<CapNode> cap_rule(const HemisphereFrame& frame, int n);

// Tensor rule on the annulus delta <= rho <= a (local polar coordinates),
// rho-linear node placement, Jacobian rho included in the weights.
struct RingNode {
    Real rho, psi;
    Real weight;
};
struct RingRule {
    std::vector<RingNode> nodes;
    Real a = 0, delta = 0;
};
RingRule ring_rule(Real a, Real delta, int n);

// Symmetric degree-5 rule on the reference triangle; weights sum to 1.
struct TriRule {
    std::vector<std::array<Real, 3>> bary;
    std::vector<Real> weight;
};
const TriRule& tri_rule_deg5();

template <class F>
Real integrate_triangle(const Vec3& v0, const Vec3& v1, const Vec3& v2, const TriRule& rule,
                        F&& f) {
    const Real area = 0.5 * (v1 - v0).cross(v2 - v0).norm();
    Real s = 0;
    for (size_t i = 0; i < rule.weight.size(); ++i) {
        const auto& b = rule.bary[i];
        s += rule.weight[i] * f(b[0] * v0 + b[1] * v1 + b[2] * v2);
    }
    return area * s;
}

// Polar transform about the (possibly singular) vertex v0: the Jacobian
// factor t cancels a 1/|x - v0| singularity. n x n tensor Gauss.
template <class F>
Real integrate_triangle_polar(const Vec3& v0, const Vec3& v1, const Vec3& v2, int n, F&& f) {
    const GaussRule1D g = gauss_legendre(n);
    const Real area2 = (v1 - v0).cross(v2 - v0).norm();
    Real sum = 0;
    for (int i = 0; i < n; ++i) {
        const Real s = 0.5 * (g.nodes[i] + 1.0);
        const Vec3 w = v1 + s * (v2 - v1);
        Real inner = 0;
        for (int j = 0; j < n; ++j) {
            const Real t = 0.5 * (g.nodes[j] + 1.0);
            inner += 0.25 * g.weights[j] * t * f(v0 + t * (w - v0));
        }
        sum += g.weights[i] * inner;
    }
    return area2 * sum;
}

// Collocation point inside the triangle: 3-subtriangle polar split about it.
template <class F>
Real integrate_triangle_split(const Vec3& v0, const Vec3& v1, const Vec3& v2, const Vec3& x,
                              int n, F&& f) {
    return integrate_triangle_polar(x, v0, v1, n, f) + integrate_triangle_polar(x, v1, v2, n, f)
           + integrate_triangle_polar(x, v2, v0, n, f);
}

// Uniform 4-way refinement to the given depth, base rule on the leaves.
template <class F>
Real integrate_triangle_refined(const Vec3& v0, const Vec3& v1, const Vec3& v2, int depth,
                                const TriRule& rule, F&& f) {
    if (depth <= 0) return integrate_triangle(v0, v1, v2, rule, f);
    const Vec3 m01 = 0.5 * (v0 + v1), m12 = 0.5 * (v1 + v2), m20 = 0.5 * (v2 + v0);
    return integrate_triangle_refined(v0, m01, m20, depth - 1, rule, f)
           + integrate_triangle_refined(m01, v1, m12, depth - 1, rule, f)
           + integrate_triangle_refined(m20, m12, v2, depth - 1, rule, f)
           + integrate_triangle_refined(m01, m12, m20, depth - 1, rule, f);
}

} // namespace biewos
