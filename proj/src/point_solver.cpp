#include "biewos/point_solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "biewos/quadrature.hpp"

namespace biewos {

namespace {

void check_flat_frame(const Scene& scene, const HemisphereFrame& frame) {
    if (scene.kind == SceneKind::Sphere)
        throw ApplicabilityError("point solver requires a flat boundary scene");
    if (std::abs(std::abs(frame.axis.z()) - 1.0) > 1e-12)
        throw GeometryError("hemisphere axis must be normal to the boundary plane");
    const Real plane = scene.kind == SceneKind::HalfSpace ? scene.plane_z : 0.0;
    if (std::abs(frame.center.z() - plane) > 1e-9 * std::max(Real(1), scene.scale()))
        throw GeometryError("hemisphere center must lie on the boundary plane");
}

// [t0,t1] where the ray x + t(dx,dy) stays inside the rectangle, or nothing.
std::optional<std::pair<Real, Real>> clip_ray(const Plate& pl, Real x, Real y, Real dx, Real dy) {
    Real t0 = 0, t1 = std::numeric_limits<Real>::infinity();
    const Real ps[2] = {x, y}, ds[2] = {dx, dy};
    const Real lo[2] = {pl.x0, pl.y0}, hi[2] = {pl.x1, pl.y1};
    for (int i = 0; i < 2; ++i) {
        if (std::abs(ds[i]) < 1e-15) {
            if (ps[i] < lo[i] || ps[i] > hi[i]) return std::nullopt;
        } else {
            Real ta = (lo[i] - ps[i]) / ds[i];
            Real tb = (hi[i] - ps[i]) / ds[i];
            if (ta > tb) std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
        }
    }
    if (t1 <= t0) return std::nullopt;
    return std::make_pair(t0, t1);
}

// Exact finite-part over S_a for piecewise-constant plate data: the radial
// integral of (1/rho^3 - 1/a^3) rho drho has a closed form, the angular
// integral is split at plate-corner directions and Gauss-integrated per
// smooth segment.
Real sigma2_plates_exact(const Scene& scene, const HemisphereFrame& frame) {
    const Real a = frame.radius;
    const Vec3& c = frame.center;
    const Real phix = eval_dirichlet(scene, c);

    // angular breakpoints: plate corners, edge-parallel directions, and the
    // angles where the disk rim crosses an edge line (r1 = a transitions)
    std::vector<Real> cuts{0.0, 2.0 * kPi};
    auto add = [&cuts](Real ang) {
        ang = std::fmod(ang, 2.0 * kPi);
        if (ang < 0) ang += 2.0 * kPi;
        cuts.push_back(ang);
    };
    for (const Plate& pl : scene.plates) {
        for (const Real cx : {pl.x0, pl.x1})
            for (const Real cy : {pl.y0, pl.y1}) add(std::atan2(cy - c.y(), cx - c.x()));
        for (const Real cx : {pl.x0, pl.x1}) {
            const Real u = (cx - c.x()) / a;
            if (std::abs(u) <= 1.0) {
                add(std::acos(u));
                add(-std::acos(u));
            }
        }
        for (const Real cy : {pl.y0, pl.y1}) {
            const Real u = (cy - c.y()) / a;
            if (std::abs(u) <= 1.0) {
                add(std::asin(u));
                add(kPi - std::asin(u));
            }
        }
    }
    for (int k = 0; k < 4; ++k) cuts.push_back(k * kPi / 2.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](Real u, Real v) { return std::abs(u - v) < 1e-13; }),
               cuts.end());

    const GaussRule1D g = gauss_legendre(20);
    Real total = 0;
    Real covered_area = 0;
    for (size_t s = 0; s + 1 < cuts.size(); ++s) {
        const Real th0 = cuts[s], th1 = cuts[s + 1];
        if (th1 - th0 < 1e-14) continue;
        for (int i = 0; i < g.order; ++i) {
            const Real th = th0 + (th1 - th0) * 0.5 * (g.nodes[i] + 1.0);
            const Real w = g.weights[i] * 0.5 * (th1 - th0);
            const Real dx = std::cos(th), dy = std::sin(th);
            for (size_t k = 0; k < scene.plates.size(); ++k) {
                const auto seg = clip_ray(scene.plates[k], c.x(), c.y(), dx, dy);
                if (!seg) continue;
                const Real r0 = std::max(seg->first, Real(0));
                const Real r1 = std::min(seg->second, a);
                if (r1 <= r0) continue;
                covered_area += w * 0.5 * (r1 * r1 - r0 * r0);
                const Real dphi = scene.feature_potential[k] - phix;
                if (dphi == 0) continue;
                if (r0 < 1e-14)
                    throw SingularityError("nonzero data jump at the collocation point");
                const Real radial =
                    (1.0 / r0 - 1.0 / r1) - (r1 * r1 - r0 * r0) / (2.0 * a * a * a);
                total += w * dphi * radial;
            }
        }
    }
    if (std::abs(covered_area - kPi * a * a) > 1e-8 * kPi * a * a)
        throw DomainError("disk S_a is not covered by the plate set");
    return -total / (2.0 * kPi);
}

} // namespace

Real sigma2_prime(const Scene& scene, const HemisphereFrame& frame, Real delta, int n_g2) {
    check_flat_frame(scene, frame);
    const Real a = frame.radius;

    if (scene.kind == SceneKind::PlateSet && scene.piecewise_const)
        return sigma2_plates_exact(scene, frame);

    if (scene.kind == SceneKind::ThinDisk
        && std::hypot(frame.center.x(), frame.center.y()) + a > scene.disk_radius + 1e-12)
        throw DomainError("disk S_a extends beyond the boundary feature");

    const Real phix = eval_dirichlet(scene, frame.center);
    const Vec3 e1 = frame.rot.row(0), e2 = frame.rot.row(1);
    const RingRule ring = ring_rule(a, delta, n_g2);
    Real total = 0;
    for (const RingNode& nd : ring.nodes) {
        const Vec3 y = frame.center + nd.rho * (std::cos(nd.psi) * e1 + std::sin(nd.psi) * e2);
        const Real phiy = eval_dirichlet(scene, y, 1e-6 * std::max(Real(1), scene.scale()));
        total += nd.weight * (1.0 / (nd.rho * nd.rho * nd.rho) - 1.0 / (a * a * a))
                 * (phiy - phix);
    }
    return -total / (2.0 * kPi);
}

std::pair<Real, Real> sigma1_prime(const Scene& scene, const HemisphereFrame& frame, int n_g1,
                                   const PotentialSampler& sampler) {
    check_flat_frame(scene, frame);
    const Real phix = eval_dirichlet(scene, frame.center);
    const std::vector<CapNode> nodes = cap_rule(frame, n_g1);
    Real value = 0, var = 0;
    for (size_t i = 0; i < nodes.size(); ++i) {
        const Estimate est = sampler(nodes[i].point, static_cast<std::uint64_t>(i));
        const Real coeff = nodes[i].weight * h_kernel(frame, nodes[i].point);
        value -= coeff * (est.mean - phix);
        if (est.n > 0) var += coeff * coeff * est.variance / static_cast<Real>(est.n);
    }
    return {value, std::sqrt(var)};
}

std::pair<Real, Real> sigma1_prime(const Scene& scene, const HemisphereFrame& frame, int n_g1,
                                   const WosConfig& cfg) {
    check_flat_frame(scene, frame);
    const Real phix = eval_dirichlet(scene, frame.center);
    const std::vector<CapNode> nodes = cap_rule(frame, n_g1);
    std::vector<Vec3> pts;
    pts.reserve(nodes.size());
    for (const CapNode& nd : nodes) pts.push_back(nd.point);
    const std::vector<Estimate> est = estimate_u_batch(scene, pts, cfg);
    Real value = 0, var = 0;
    for (size_t i = 0; i < nodes.size(); ++i) {
        const Real coeff = nodes[i].weight * h_kernel(frame, nodes[i].point);
        value -= coeff * (est[i].mean - phix);
        if (est[i].n > 0) var += coeff * coeff * est[i].variance / static_cast<Real>(est[i].n);
    }
    return {value, std::sqrt(var)};
}

namespace {

PointNeumannResult assemble_result(Real s1, Real se, Real s2, const HemisphereFrame& frame,
                                   int n_g1, int n_g2, Real delta, const WosConfig& cfg) {
    PointNeumannResult r;
    r.sigma1 = s1;
    r.sigma2 = s2;
    r.total = s1 + s2;
    r.std_error = se;
    r.a = frame.radius;
    r.delta = delta;
    r.n_g1 = n_g1;
    r.n_g2 = n_g2;
    r.wos = cfg;
    return r;
}

} // namespace

PointNeumannResult solve_point(const Scene& scene, const HemisphereFrame& frame, int n_g1,
                               int n_g2, Real delta, const WosConfig& cfg) {
    const Real s2 = sigma2_prime(scene, frame, delta, n_g2);
    const auto [s1, se] = sigma1_prime(scene, frame, n_g1, cfg);
    return assemble_result(s1, se, s2, frame, n_g1, n_g2, delta, cfg);
}

PointNeumannResult solve_point(const Scene& scene, const HemisphereFrame& frame, int n_g1,
                               int n_g2, Real delta, const WosConfig& cfg,
                               const PotentialSampler& sampler) {
    const Real s2 = sigma2_prime(scene, frame, delta, n_g2);
    const auto [s1, se] = sigma1_prime(scene, frame, n_g1, sampler);
    return assemble_result(s1, se, s2, frame, n_g1, n_g2, delta, cfg);
}

} // namespace biewos
