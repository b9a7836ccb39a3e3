#include "biewos/reference_bem.hpp"

#include <Eigen/LU>
#include <cmath>
#include <unordered_map>

#include "biewos/quadrature.hpp"

namespace biewos {

namespace {

constexpr Real kInv4Pi = 1.0 / (4.0 * kPi);

// integral of 1/(4 pi r) over a w x h rectangle about an interior point
// (px, py) from its corner: four corner integrals
// int_0^A int_0^B 1/r = A asinh(B/A) + B asinh(A/B)
Real rect_corner(Real A, Real B) {
    if (A <= 0 || B <= 0) return 0.0;
    return A * std::asinh(B / A) + B * std::asinh(A / B);
}

Real rect_self(Real w, Real h, Real px, Real py) {
    return kInv4Pi
           * (rect_corner(px, py) + rect_corner(w - px, py) + rect_corner(px, h - py)
              + rect_corner(w - px, h - py));
}

// 4x4 tensor Gauss with recursive 2x2 refinement for the 1/(4 pi |x-y|)
// kernel over an axis-aligned rectangle in the z=0 plane
Real rect_gauss_adaptive(const Vec3& x, Real x0, Real x1, Real y0, Real y1, int depth,
                         const GaussRule1D& g) {
    if (depth > 0) {
        const Real xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
        return rect_gauss_adaptive(x, x0, xm, y0, ym, depth - 1, g)
               + rect_gauss_adaptive(x, xm, x1, y0, ym, depth - 1, g)
               + rect_gauss_adaptive(x, x0, xm, ym, y1, depth - 1, g)
               + rect_gauss_adaptive(x, xm, x1, ym, y1, depth - 1, g);
    }
    Real s = 0;
    for (int i = 0; i < g.order; ++i) {
        const Real yx = x0 + (x1 - x0) * 0.5 * (g.nodes[i] + 1.0);
        for (int j = 0; j < g.order; ++j) {
            const Real yy = y0 + (y1 - y0) * 0.5 * (g.nodes[j] + 1.0);
            s += g.weights[i] * g.weights[j] / (x - Vec3(yx, yy, 0.0)).norm();
        }
    }
    return kInv4Pi * s * 0.25 * (x1 - x0) * (y1 - y0);
}

Vec3 polar_point(Real rho, Real th) { return {rho * std::cos(th), rho * std::sin(th), 0.0}; }

// f over [0,1]^2 with an integrable singularity at (0,0): two Duffy maps
template <class F>
Real duffy_unit_square(int n, F&& f) {
    const GaussRule1D g = gauss_legendre(n);
    Real s = 0;
    for (int i = 0; i < n; ++i) {
        const Real u = 0.5 * (g.nodes[i] + 1.0);
        for (int j = 0; j < n; ++j) {
            const Real v = 0.5 * (g.nodes[j] + 1.0);
            const Real w = 0.25 * g.weights[i] * g.weights[j] * u;
            s += w * (f(u, u * v) + f(u * v, u));
        }
    }
    return s;
}

// 1/(4 pi r) over the annular sector [r0,r1]x[t0,t1], collocation inside:
// 4 parameter-space sub-rectangles, Duffy about the singular corner
Real sector_self(Real r0, Real r1, Real t0, Real t1, Real rc, Real tc, const Vec3& x) {
    Real total = 0;
    for (Real re : {r0, r1})
        for (Real te : {t0, t1}) {
            const Real dr = re - rc, dt = te - tc;
            if (std::abs(dr) < 1e-15 || std::abs(dt) < 1e-15) continue;
            total += duffy_unit_square(8, [&](Real su, Real tv) {
                const Real rho = rc + su * dr;
                const Real th = tc + tv * dt;
                return std::abs(dr * dt) * rho / (x - polar_point(rho, th)).norm();
            });
        }
    return kInv4Pi * total;
}

Real sector_gauss_adaptive(const Vec3& x, Real r0, Real r1, Real t0, Real t1, int depth,
                           const GaussRule1D& g) {
    if (depth > 0) {
        const Real rm = 0.5 * (r0 + r1), tm = 0.5 * (t0 + t1);
        return sector_gauss_adaptive(x, r0, rm, t0, tm, depth - 1, g)
               + sector_gauss_adaptive(x, rm, r1, t0, tm, depth - 1, g)
               + sector_gauss_adaptive(x, r0, rm, tm, t1, depth - 1, g)
               + sector_gauss_adaptive(x, rm, r1, tm, t1, depth - 1, g);
    }
    Real s = 0;
    for (int i = 0; i < g.order; ++i) {
        const Real rho = r0 + (r1 - r0) * 0.5 * (g.nodes[i] + 1.0);
        for (int j = 0; j < g.order; ++j) {
            const Real th = t0 + (t1 - t0) * 0.5 * (g.nodes[j] + 1.0);
            s += g.weights[i] * g.weights[j] * rho / (x - polar_point(rho, th)).norm();
        }
    }
    return kInv4Pi * s * 0.25 * (r1 - r0) * (t1 - t0);
}

// Panel interactions depend only on the center offset (congruent panels on a
// common lattice), so each distinct quantized offset is integrated once.
// Canonicalizing |dx|, |dy| keeps the matrix exactly symmetric under mirror
// images and index transposition.
BemSolution solve_plates(const Scene& scene, int n, bool keep_matrix) {
    BemSolution sol;
    sol.kind = SceneKind::PlateSet;
    sol.plates = scene.plates;
    sol.n_side = n;
    const Plate& p0 = scene.plates.front();
    const Real dx = (p0.x1 - p0.x0) / n, dy = (p0.y1 - p0.y0) / n;
    for (const Plate& pl : scene.plates) {
        if (std::abs((pl.x1 - pl.x0) / n - dx) > 1e-12 || std::abs((pl.y1 - pl.y0) / n - dy) > 1e-12)
            throw GeometryError("reference BEM expects congruent plates");
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                sol.panels.push_back({Vec3(pl.x0 + (ix + 0.5) * dx, pl.y0 + (iy + 0.5) * dy, 0.0),
                                      dx * dy,
                                      static_cast<int>(&pl - scene.plates.data())});
    }
    const int m = static_cast<int>(sol.panels.size());
    const GaussRule1D g4 = gauss_legendre(4);

    const Real self_val = rect_self(dx, dy, 0.5 * dx, 0.5 * dy);
    constexpr Real kQuant = 1048576.0; // 2^20 panel-unit quantization
    std::unordered_map<std::uint64_t, Real> cache;
    auto entry = [&](const Vec3& ci, const Vec3& cj) -> Real {
        // offsets in panel units, quantized; canonical by symmetry of 1/r
        const std::int64_t qx = llround(std::abs(cj.x() - ci.x()) / dx * kQuant);
        const std::int64_t qy = llround(std::abs(cj.y() - ci.y()) / dy * kQuant);
        if (qx == 0 && qy == 0) return self_val;
        const Real ux = static_cast<Real>(qx) / kQuant, uy = static_cast<Real>(qy) / kQuant;
        const Real u2 = ux * ux + uy * uy;
        const int depth = u2 < 5.0 ? 2 : (u2 < 28.0 ? 1 : 0);
        auto compute = [&] {
            return rect_gauss_adaptive(Vec3(0, 0, 0), ux * dx - 0.5 * dx, ux * dx + 0.5 * dx,
                                       uy * dy - 0.5 * dy, uy * dy + 0.5 * dy, depth, g4);
        };
        if (qx >= (1LL << 32) || qy >= (1LL << 32)) return compute();
        const std::uint64_t key =
            (static_cast<std::uint64_t>(qx) << 32) | static_cast<std::uint64_t>(qy);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
        const Real v = compute();
        cache.emplace(key, v);
        return v;
    };

    MatX A(m, m);
    VecX b(m);
    for (int i = 0; i < m; ++i) {
        const Vec3& xi = sol.panels[i].center;
        b[i] = scene.piecewise_const ? scene.feature_potential[sol.panels[i].plate]
                                     : scene.dirichlet(xi);
        for (int j = 0; j < m; ++j) A(i, j) = entry(xi, sol.panels[j].center);
    }
    Eigen::PartialPivLU<MatX> lu(A);
    sol.sigma = lu.solve(b);
    if (!sol.sigma.allFinite()) throw SolverError("singular plate BEM system");
    if (keep_matrix) sol.A = std::move(A);
    return sol;
}

// Rotational invariance: an interaction depends only on (ring_i, ring_j,
// sector offset), computed once in a sector-0 frame.
BemSolution solve_disk(const Scene& scene, int n, bool keep_matrix) {
    BemSolution sol;
    sol.kind = SceneKind::ThinDisk;
    const Real bdisk = scene.disk_radius;
    const int nr = n, nt = 4 * n;
    sol.n_theta = nt;
    sol.ring_edges.resize(nr + 1);
    // rim grading resolves the 1/sqrt(b^2 - rho^2) edge behavior
    for (int k = 0; k <= nr; ++k) sol.ring_edges[k] = bdisk * std::sin(0.5 * kPi * k / nr);

    const Real dth = 2.0 * kPi / nt;
    std::vector<Real> rc(nr);
    for (int k = 0; k < nr; ++k) {
        const Real r0 = sol.ring_edges[k], r1 = sol.ring_edges[k + 1];
        rc[k] = (2.0 / 3.0) * (r1 * r1 * r1 - r0 * r0 * r0) / (r1 * r1 - r0 * r0);
        for (int j = 0; j < nt; ++j)
            sol.panels.push_back(
                {polar_point(rc[k], (j + 0.5) * dth), 0.5 * dth * (r1 * r1 - r0 * r0), 0});
    }
    const int m = static_cast<int>(sol.panels.size());
    const GaussRule1D g4 = gauss_legendre(4);

    // interaction table: collocation on ring ri at sector 0, panel on ring rj
    // at sector offset ds in [0, nt/2]
    std::vector<Real> table(static_cast<size_t>(nr) * nr * (nt / 2 + 1),
                            std::numeric_limits<Real>::quiet_NaN());
    auto entry = [&](int ri, int rj, int ds) -> Real {
        ds = ((ds % nt) + nt) % nt;
        if (ds > nt / 2) ds = nt - ds;
        Real& slot = table[(static_cast<size_t>(ri) * nr + rj) * (nt / 2 + 1) + ds];
        if (!std::isnan(slot)) return slot;
        const Vec3 x = polar_point(rc[ri], 0.5 * dth);
        const Real r0 = sol.ring_edges[rj], r1 = sol.ring_edges[rj + 1];
        const Real t0 = ds * dth, t1 = (ds + 1) * dth;
        if (ri == rj && ds == 0) {
            slot = sector_self(r0, r1, t0, t1, rc[ri], 0.5 * dth, x);
        } else {
            const int ring_gap = std::abs(ri - rj);
            const int depth = (ring_gap <= 1 && ds <= 2) ? 2 : (ring_gap <= 3 && ds <= 6 ? 1 : 0);
            slot = sector_gauss_adaptive(x, r0, r1, t0, t1, depth, g4);
        }
        return slot;
    };

    MatX A(m, m);
    VecX b(m);
    const Real pot = scene.feature_potential[0];
    for (int i = 0; i < m; ++i) {
        const int ri = i / nt, si = i % nt;
        b[i] = pot;
        for (int j = 0; j < m; ++j) A(i, j) = entry(ri, j / nt, (j % nt) - si);
    }
    Eigen::PartialPivLU<MatX> lu(A);
    sol.sigma = lu.solve(b);
    if (!sol.sigma.allFinite()) throw SolverError("singular disk BEM system");
    if (keep_matrix) sol.A = std::move(A);
    return sol;
}

} // namespace

Real BemSolution::total_charge() const {
    Real q = 0;
    for (size_t i = 0; i < panels.size(); ++i)
        q += sigma[static_cast<Eigen::Index>(i)] * panels[i].area;
    return q;
}

Real BemSolution::sigma_side_at(const Vec3& p) const {
    if (kind == SceneKind::PlateSet) {
        // locate the owning plate, clamp to its centroid grid, bilinear
        int plate = -1;
        for (size_t k = 0; k < plates.size(); ++k)
            if (p.x() >= plates[k].x0 - 1e-12 && p.x() <= plates[k].x1 + 1e-12
                && p.y() >= plates[k].y0 - 1e-12 && p.y() <= plates[k].y1 + 1e-12) {
                plate = static_cast<int>(k);
                break;
            }
        if (plate < 0) throw GeometryError("query point is not on any plate");
        const Plate& pl = plates[static_cast<size_t>(plate)];
        const Real dx = (pl.x1 - pl.x0) / n_side, dy = (pl.y1 - pl.y0) / n_side;
        const Real gx = std::clamp((p.x() - pl.x0) / dx - 0.5, Real(0), Real(n_side - 1));
        const Real gy = std::clamp((p.y() - pl.y0) / dy - 0.5, Real(0), Real(n_side - 1));
        const int ix = std::min(static_cast<int>(gx), n_side - 2);
        const int iy = std::min(static_cast<int>(gy), n_side - 2);
        const Real fx = gx - ix, fy = gy - iy;
        auto val = [&](int jx, int jy) {
            const size_t idx = static_cast<size_t>(plate) * n_side * n_side
                               + static_cast<size_t>(jy) * n_side + jx;
            return sigma[static_cast<Eigen::Index>(idx)];
        };
        const Real v = (1 - fx) * (1 - fy) * val(ix, iy) + fx * (1 - fy) * val(ix + 1, iy)
                       + (1 - fx) * fy * val(ix, iy + 1) + fx * fy * val(ix + 1, iy + 1);
        return 0.5 * v;
    }
    // disk: bilinear in (ring centroid radius, sector angle)
    const int nr = static_cast<int>(ring_edges.size()) - 1;
    const Real rho = std::hypot(p.x(), p.y());
    Real th = std::atan2(p.y(), p.x());
    if (th < 0) th += 2.0 * kPi;
    std::vector<Real> rc(nr);
    for (int k = 0; k < nr; ++k) {
        const Real r0 = ring_edges[k], r1 = ring_edges[k + 1];
        rc[k] = (2.0 / 3.0) * (r1 * r1 * r1 - r0 * r0 * r0) / (r1 * r1 - r0 * r0);
    }
    int k = 0;
    while (k < nr - 2 && rc[k + 1] < rho) ++k;
    const Real fr = std::clamp((rho - rc[k]) / (rc[k + 1] - rc[k]), Real(0), Real(1));
    const Real gt = th / (2.0 * kPi) * n_theta - 0.5;
    const int j = static_cast<int>(std::floor(gt));
    const Real ft = gt - j;
    auto val = [&](int ring, int sec) {
        const int js = ((sec % n_theta) + n_theta) % n_theta;
        return sigma[static_cast<Eigen::Index>(ring * n_theta + js)];
    };
    const Real v = (1 - fr) * ((1 - ft) * val(k, j) + ft * val(k, j + 1))
                   + fr * ((1 - ft) * val(k + 1, j) + ft * val(k + 1, j + 1));
    return 0.5 * v;
}

BemSolution solve_charge_density(const Scene& scene, int n_panels_per_side, bool keep_matrix) {
    if (n_panels_per_side < 2) throw GeometryError("need at least 2 panels per side");
    switch (scene.kind) {
        case SceneKind::PlateSet: return solve_plates(scene, n_panels_per_side, keep_matrix);
        case SceneKind::ThinDisk: return solve_disk(scene, n_panels_per_side, keep_matrix);
        default: throw ApplicabilityError("reference BEM handles PlateSet and ThinDisk scenes");
    }
}

} // namespace biewos
