#include "biewos/patch_solver.hpp"

#include <Eigen/LU>
#include <cmath>
#include <ostream>

#include "biewos/parallel.hpp"
#include "biewos/quadrature.hpp"

namespace biewos {

namespace {

Mat3 frame_rows(const UnitVec3& axis) {
    const Vec3 ref = std::abs(axis.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 e1 = axis.cross(ref).normalized();
    const Vec3 e2 = axis.cross(e1);
    Mat3 rot;
    rot.row(0) = e1;
    rot.row(1) = e2;
    rot.row(2) = axis;
    return rot;
}

// fan + band triangulation over rings of equal azimuthal count
void build_band_mesh(PatchMesh& mesh, const Vec3& apex, const std::vector<std::vector<Vec3>>& rings,
                     const UnitVec3& orient_hint_dir, bool hint_is_radial) {
    mesh.vertices.push_back(apex);
    const int m = static_cast<int>(rings.front().size());
    for (const auto& ring : rings)
        for (const Vec3& v : ring) mesh.vertices.push_back(v);
    auto vid = [&](int ring, int j) { return 1 + ring * m + (j % m); };
    for (int j = 0; j < m; ++j) mesh.tris.push_back({0, vid(0, j), vid(0, j + 1)});
    for (int k = 0; k + 1 < static_cast<int>(rings.size()); ++k)
        for (int j = 0; j < m; ++j) {
            mesh.tris.push_back({vid(k, j), vid(k + 1, j), vid(k + 1, j + 1)});
            mesh.tris.push_back({vid(k, j), vid(k + 1, j + 1), vid(k, j + 1)});
        }
    for (const auto& t : mesh.tris) {
        const Vec3 &v0 = mesh.vertices[t[0]], &v1 = mesh.vertices[t[1]], &v2 = mesh.vertices[t[2]];
        const Vec3 c = (v0 + v1 + v2) / 3.0;
        Vec3 n = (v1 - v0).cross(v2 - v0);
        const Real a2 = n.norm();
        n /= a2;
        const Vec3 outward = hint_is_radial ? c.normalized() : Vec3(orient_hint_dir);
        if (n.dot(outward) < 0) n = -n;
        mesh.centroid.push_back(c);
        mesh.normal.push_back(n);
        mesh.area.push_back(0.5 * a2);
        mesh.diam.push_back(std::max({(v1 - v0).norm(), (v2 - v1).norm(), (v0 - v2).norm()}));
    }
}

} // namespace

Vec3 PatchSetup::gamma_point(Real theta, Real phi) const {
    const Vec3 local(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                     std::cos(theta));
    return sphere.center + sphere.radius * (rot.transpose() * local);
}

PatchSetup make_sphere_patch_setup(const Scene& scene, const Vec3& o, Real a, int n_bands,
                                   int n_azimuth, int n_theta, int n_phi) {
    if (scene.kind != SceneKind::Sphere)
        throw ApplicabilityError("sphere patch setup needs a Sphere scene");
    const Real R = scene.sphere_radius;
    if (std::abs(o.norm() - R) > 1e-9 * R)
        throw GeometryError("patch center is not on the sphere");
    if (!(a > 0) || a >= 2.0 * R) throw GeometryError("patch sphere radius out of range");

    PatchSetup s;
    s.sphere = {o, a};
    s.axis = o / o.norm();
    s.rot = frame_rows(s.axis);
    s.n_theta = n_theta;
    s.n_phi = n_phi;
    s.theta_rim = std::acos(-a / (2.0 * R));
    s.theta_grid_max = s.theta_rim * (1.0 - 1.0 / n_theta);

    const Real alpha_max = std::acos(1.0 - a * a / (2.0 * R * R));
    std::vector<std::vector<Vec3>> rings;
    const Mat3 rt = s.rot.transpose();
    for (int k = 1; k <= n_bands; ++k) {
        const Real alpha = alpha_max * k / n_bands;
        std::vector<Vec3> ring;
        for (int j = 0; j < n_azimuth; ++j) {
            const Real beta = 2.0 * kPi * j / n_azimuth;
            const Vec3 local(std::sin(alpha) * std::cos(beta), std::sin(alpha) * std::sin(beta),
                             std::cos(alpha));
            ring.push_back(R * (rt * local));
        }
        rings.push_back(std::move(ring));
    }
    build_band_mesh(s.mesh, o, rings, s.axis, /*hint_is_radial=*/true);
    return s;
}

PatchSetup make_flat_patch_setup(const Vec3& center, Real a, int n_bands, int n_azimuth,
                                 int n_theta, int n_phi) {
    PatchSetup s;
    s.sphere = {center, a};
    s.axis = Vec3::UnitZ();
    s.rot = frame_rows(s.axis);
    s.n_theta = n_theta;
    s.n_phi = n_phi;
    s.theta_rim = kPi / 2.0;
    s.theta_grid_max = s.theta_rim * (1.0 - 1.0 / n_theta);

    std::vector<std::vector<Vec3>> rings;
    for (int k = 1; k <= n_bands; ++k) {
        const Real r = a * k / n_bands;
        std::vector<Vec3> ring;
        for (int j = 0; j < n_azimuth; ++j) {
            const Real beta = 2.0 * kPi * j / n_azimuth;
            ring.push_back(center + Vec3(r * std::cos(beta), r * std::sin(beta), 0.0));
        }
        rings.push_back(std::move(ring));
    }
    build_band_mesh(s.mesh, center, rings, s.axis, /*hint_is_radial=*/false);
    return s;
}

GammaGrid sample_gamma_grid(const Scene& scene, const PatchSetup& setup, const WosConfig& cfg) {
    GammaGrid grid;
    grid.n_theta = setup.n_theta;
    grid.n_phi = setup.n_phi;
    grid.theta_max = setup.theta_grid_max;
    std::vector<Vec3> pts;
    pts.reserve(static_cast<size_t>(setup.n_theta) * setup.n_phi);
    for (int i = 0; i < setup.n_theta; ++i) {
        const Real theta = grid.theta_max * i / (setup.n_theta - 1);
        for (int j = 0; j < setup.n_phi; ++j)
            pts.push_back(setup.gamma_point(theta, 2.0 * kPi * j / setup.n_phi));
    }
    grid.values = estimate_u_batch(scene, pts, cfg);
    return grid;
}

GammaGrid sample_gamma_grid(const PatchSetup& setup, const PotentialSampler& sampler) {
    GammaGrid grid;
    grid.n_theta = setup.n_theta;
    grid.n_phi = setup.n_phi;
    grid.theta_max = setup.theta_grid_max;
    std::uint64_t id = 0;
    for (int i = 0; i < setup.n_theta; ++i) {
        const Real theta = grid.theta_max * i / (setup.n_theta - 1);
        for (int j = 0; j < setup.n_phi; ++j)
            grid.values.push_back(sampler(setup.gamma_point(theta, 2.0 * kPi * j / setup.n_phi), id++));
    }
    return grid;
}

namespace {

struct GridSample {
    Real mean;
    Real var_of_mean;
};

GridSample interp_gamma_full(const GammaGrid& grid, const PatchSetup& setup, const Vec3& y) {
    const Vec3 d = (y - setup.sphere.center) / setup.sphere.radius;
    const Real ct = std::clamp(d.dot(setup.axis), Real(-1), Real(1));
    const Real theta = std::acos(ct);
    if (theta > grid.theta_max * (1.0 + 1e-9) + 1e-12)
        throw ExtrapolationError("gamma point outside grid coverage");
    Real phi = std::atan2(d.dot(setup.rot.row(1)), d.dot(setup.rot.row(0)));
    if (phi < 0) phi += 2.0 * kPi;

    const Real gt = std::min(theta / grid.theta_max, Real(1)) * (grid.n_theta - 1);
    const int it = std::min(static_cast<int>(gt), grid.n_theta - 2);
    const Real ft = gt - it;
    const Real gp = phi / (2.0 * kPi) * grid.n_phi;
    const int ip = std::min(static_cast<int>(gp), grid.n_phi - 1);
    const Real fp = gp - ip;

    auto node = [&](int i, int j) -> const Estimate& {
        return grid.values[static_cast<size_t>(i) * grid.n_phi + (j % grid.n_phi)];
    };
    const Real w00 = (1 - ft) * (1 - fp), w01 = (1 - ft) * fp, w10 = ft * (1 - fp), w11 = ft * fp;
    GridSample out;
    out.mean = w00 * node(it, ip).mean + w01 * node(it, ip + 1).mean + w10 * node(it + 1, ip).mean
               + w11 * node(it + 1, ip + 1).mean;
    auto vm = [](const Estimate& e) {
        return e.n > 0 ? e.variance / static_cast<Real>(e.n) : Real(0);
    };
    out.var_of_mean = w00 * w00 * vm(node(it, ip)) + w01 * w01 * vm(node(it, ip + 1))
                      + w10 * w10 * vm(node(it + 1, ip)) + w11 * w11 * vm(node(it + 1, ip + 1));
    return out;
}

} // namespace

Real interp_gamma(const GammaGrid& grid, const PatchSetup& setup, const Vec3& y) {
    return interp_gamma_full(grid, setup, y).mean;
}

DenseSystem assemble(const Scene& scene, const PatchSetup& setup, BieKind kind,
                     const GammaGrid& grid) {
    const PatchMesh& mesh = setup.mesh;
    const int m = mesh.n_panels();
    const SphereFrame& sph = setup.sphere;
    const Real eval_tol = 0.1 * std::max(setup.sphere.radius, scene.scale());

    // Gamma quadrature nodes (shared across collocation points)
    struct GNode {
        Vec3 y;
        UnitVec3 ny;
        Real w;
        Real u_mean;
        Real u_var;
    };
    std::vector<GNode> gamma;
    {
        // polar range split dyadically toward the rim: collocation points on
        // the outermost panels sit close to Gamma and need the resolution
        const GaussRule1D g = gauss_legendre(setup.gauss_gamma);
        const Real a = sph.radius;
        std::vector<Real> breaks{0.0, 0.5, 0.75, 0.875, 0.9375, 1.0};
        for (Real& bp : breaks) bp *= setup.theta_grid_max;
        for (size_t seg = 0; seg + 1 < breaks.size(); ++seg) {
            const Real t0 = breaks[seg], t1 = breaks[seg + 1];
            for (int i = 0; i < g.order; ++i) {
                const Real theta = t0 + (t1 - t0) * 0.5 * (g.nodes[i] + 1.0);
                const Real wt = g.weights[i] * 0.5 * (t1 - t0);
                for (int j = 0; j < g.order; ++j) {
                    const Real phi = kPi * (g.nodes[j] + 1.0);
                    const Real w = wt * g.weights[j] * kPi * a * a * std::sin(theta);
                    const Vec3 y = setup.gamma_point(theta, phi);
                    const GridSample s = interp_gamma_full(grid, setup, y);
                    gamma.push_back({y, (y - sph.center) / a, w, s.mean, s.var_of_mean});
                }
            }
        }
    }

    std::vector<Real> u_coll(m);
    for (int i = 0; i < m; ++i) u_coll[i] = eval_dirichlet(scene, mesh.centroid[i], eval_tol);

    DenseSystem sys;
    sys.kind = kind;
    sys.A = MatX::Zero(m, m);
    sys.b = VecX::Zero(m);
    sys.b_se = VecX::Zero(m);
    const TriRule& deg5 = tri_rule_deg5();
    const int near_depth = setup.near_depth;

    for (int i = 0; i < m; ++i) {
        const Vec3& xi = mesh.centroid[i];
        const UnitVec3& ni = mesh.normal[i];
        const Real ui = u_coll[i];

        // Gamma contribution to b (and its WOS-noise variance)
        Real bg = 0, vg = 0;
        for (const GNode& gn : gamma) {
            const Real k = kind == BieKind::SecondKind
                               ? sphere_d2g(sph, xi, ni, gn.y, gn.ny)
                               : sphere_dg_dny(sph, xi, gn.y, gn.ny);
            bg += gn.w * k * (gn.u_mean - ui);
            vg += gn.w * k * gn.w * k * gn.u_var;
        }
        sys.b[i] = -bg;
        sys.b_se[i] = std::sqrt(vg);

        for (int j = 0; j < m; ++j) {
            const Vec3 &v0 = mesh.vertices[mesh.tris[j][0]], &v1 = mesh.vertices[mesh.tris[j][1]],
                       &v2 = mesh.vertices[mesh.tris[j][2]];
            const UnitVec3& nj = mesh.normal[j];
            const Real dist = (xi - mesh.centroid[j]).norm();

            if (kind == BieKind::SecondKind) {
                auto dkernel = [&](const Vec3& y) { return sphere_dg_dnx(sph, xi, ni, y); };
                auto bkernel = [&](const Vec3& y) {
                    return sphere_d2g(sph, xi, ni, y, nj)
                           * (eval_dirichlet(scene, y, eval_tol) - ui);
                };
                if (j == i) {
                    // polar nodes avoid the centroid; the free-space part of
                    // dG/dn_x vanishes identically on the flat panel
                    sys.A(i, j) =
                        0.5 + integrate_triangle_split(v0, v1, v2, xi, setup.gauss_polar, dkernel);
                    sys.b[i] += integrate_triangle_split(v0, v1, v2, xi, setup.gauss_polar, bkernel);
                } else if (dist < 2.0 * mesh.diam[j]) {
                    sys.A(i, j) = integrate_triangle_refined(v0, v1, v2, near_depth, deg5, dkernel);
                    sys.b[i] += integrate_triangle_refined(v0, v1, v2, near_depth, deg5, bkernel);
                } else {
                    sys.A(i, j) = integrate_triangle(v0, v1, v2, deg5, dkernel);
                    sys.b[i] += integrate_triangle(v0, v1, v2, deg5, bkernel);
                }
            } else {
                auto gkernel = [&](const Vec3& y) { return sphere_g(sph, xi, y); };
                auto bkernel = [&](const Vec3& y) {
                    return sphere_dg_dny(sph, xi, y, nj)
                           * (eval_dirichlet(scene, y, eval_tol) - ui);
                };
                if (j == i) {
                    sys.A(i, j) = integrate_triangle_split(v0, v1, v2, xi, setup.gauss_polar, gkernel);
                    sys.b[i] += integrate_triangle_split(v0, v1, v2, xi, setup.gauss_polar, bkernel);
                } else if (dist < 2.0 * mesh.diam[j]) {
                    sys.A(i, j) = integrate_triangle_refined(v0, v1, v2, near_depth, deg5, gkernel);
                    sys.b[i] += integrate_triangle_refined(v0, v1, v2, near_depth, deg5, bkernel);
                } else {
                    sys.A(i, j) = integrate_triangle(v0, v1, v2, deg5, gkernel);
                    sys.b[i] += integrate_triangle(v0, v1, v2, deg5, bkernel);
                }
            }
        }
    }
    return sys;
}

NeumannField solve_patch(const Scene& scene, const PatchSetup& setup, BieKind kind,
                         const GammaGrid& grid) {
    DenseSystem sys = assemble(scene, setup, kind, grid);
    Eigen::PartialPivLU<MatX> lu(sys.A);
    NeumannField f;
    f.dudn = lu.solve(sys.b);
    const Real bnorm = std::max(sys.b.norm(), 1e-300);
    const Real resid = (sys.A * f.dudn - sys.b).norm() / bnorm;
    if (!f.dudn.allFinite() || resid > 1e-10) {
        if (kind == BieKind::FirstKind)
            throw SolverError("first-kind system is ill-conditioned; use SecondKind");
        throw SolverError("patch solve residual exceeds 1e-10");
    }
    f.est_error = lu.solve(sys.b_se).cwiseAbs();
    const int m = setup.mesh.n_panels();
    f.r.resize(m);
    for (int i = 0; i < m; ++i) f.r[i] = (setup.mesh.centroid[i] - setup.sphere.center).norm();
    return f;
}

NeumannField solve_patch(const Scene& scene, const PatchSetup& setup, BieKind kind,
                         const WosConfig& cfg) {
    const GammaGrid grid = sample_gamma_grid(scene, setup, cfg);
    return solve_patch(scene, setup, kind, grid);
}

void dump_mesh(const PatchMesh& mesh, std::ostream& os) {
    for (const Vec3& v : mesh.vertices) os << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (const auto& t : mesh.tris) os << "f " << t[0] << " " << t[1] << " " << t[2] << "\n";
}

} // namespace biewos
