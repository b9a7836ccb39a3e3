#include "biewos/quadrature.hpp"

#include <cmath>

namespace biewos {

GaussRule1D gauss_legendre(int n) {
    if (n < 1 || n > 64) throw GeometryError("gauss_legendre: order must be in [1,64]");
    GaussRule1D r;
    r.order = n;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 1; i <= m; ++i) {
        Real z = std::cos(kPi * (i - 0.25) / (n + 0.5));
        Real pp = 0, z1;
        do {
            Real p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const Real p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            z1 = z;
            z = z1 - p1 / pp;
        } while (std::abs(z - z1) > 1e-15);
        r.nodes[i - 1] = -z;
        r.nodes[n - i] = z;
        r.weights[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.weights[n - i] = r.weights[i - 1];
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

std::vector<CapNode> cap_rule(const HemisphereFrame& frame, int n) {
    if (n < 2) throw GeometryError("cap_rule: need n >= 2");
    const GaussRule1D g = gauss_legendre(n);
    const Real a = frame.radius;
    std::vector<CapNode> out;
    out.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const Real theta = kPi / 4.0 * (g.nodes[i] + 1.0);
        const Real elem = (kPi * kPi / 4.0) * a * a * std::sin(theta);
        for (int j = 0; j < n; ++j) {
            const Real phi = kPi * (g.nodes[j] + 1.0);
            out.push_back({frame.cap_point(theta, phi), g.weights[i] * g.weights[j] * elem,
                           theta, phi});
        }
    }
    return out;
}

RingRule ring_rule(Real a, Real delta, int n) {
    if (!(delta > 0) || delta >= a) throw GeometryError("ring_rule: need 0 < delta < a");
    const GaussRule1D g = gauss_legendre(n);
    RingRule r;
    r.a = a;
    r.delta = delta;
    r.nodes.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const Real rho = delta + (a - delta) * 0.5 * (g.nodes[i] + 1.0);
        const Real wr = g.weights[i] * 0.5 * (a - delta);
        for (int j = 0; j < n; ++j) {
            const Real psi = kPi * (g.nodes[j] + 1.0);
            r.nodes.push_back({rho, psi, wr * g.weights[j] * kPi * rho});
        }
    }
    return r;
}

const TriRule& tri_rule_deg5() {
    static const TriRule rule = [] {
        TriRule r;
        const Real w1 = 0.225;
        const Real w2 = 0.132394152788506;
        const Real w3 = 0.125939180544827;
        const Real a2 = 0.470142064105115, b2 = 0.059715871789770;
        const Real a3 = 0.101286507323456, b3 = 0.797426985353087;
        r.bary = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {b2, a2, a2}, {a2, b2, a2}, {a2, a2, b2},
                  {b3, a3, a3},                {a3, b3, a3}, {a3, a3, b3}};
        r.weight = {w1, w2, w2, w2, w3, w3, w3};
        return r;
    }();
    return rule;
}

} // namespace biewos
