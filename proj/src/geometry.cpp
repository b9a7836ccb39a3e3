#include "biewos/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace biewos {

namespace {

Real plate_distance(const Plate& pl, const Vec3& p) {
    const Real dx = std::max({pl.x0 - p.x(), Real(0), p.x() - pl.x1});
    const Real dy = std::max({pl.y0 - p.y(), Real(0), p.y() - pl.y1});
    return std::sqrt(dx * dx + dy * dy + p.z() * p.z());
}

void check_plates_disjoint(const std::vector<Plate>& plates) {
    for (size_t i = 0; i < plates.size(); ++i) {
        const Plate& a = plates[i];
        if (a.x1 <= a.x0 || a.y1 <= a.y0)
            throw GeometryError("degenerate plate rectangle");
        for (size_t j = i + 1; j < plates.size(); ++j) {
            const Plate& b = plates[j];
            const Real ox = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
            const Real oy = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
            if (ox > 1e-12 && oy > 1e-12)
                throw GeometryError("overlapping plates");
        }
    }
}

} // namespace

Scene Scene::half_space(Real plane_z, DirichletFn phi) {
    Scene s;
    s.kind = SceneKind::HalfSpace;
    s.plane_z = plane_z;
    s.dirichlet = std::move(phi);
    return s;
}

Scene Scene::plate_set(std::vector<Plate> plates) {
    check_plates_disjoint(plates);
    Scene s;
    s.kind = SceneKind::PlateSet;
    s.piecewise_const = true;
    for (const Plate& p : plates) s.feature_potential.push_back(p.potential);
    s.plates = std::move(plates);
    return s;
}

Scene Scene::plate_set(std::vector<Plate> plates, DirichletFn phi) {
    check_plates_disjoint(plates);
    Scene s;
    s.kind = SceneKind::PlateSet;
    s.plates = std::move(plates);
    s.dirichlet = std::move(phi);
    return s;
}

Scene Scene::four_plates(const std::array<Real, 4>& v) {
    return plate_set({Plate{0, 1, 0, 1, v[0]}, Plate{-1, 0, 0, 1, v[1]},
                      Plate{-1, 0, -1, 0, v[2]}, Plate{0, 1, -1, 0, v[3]}});
}

Scene Scene::thin_disk(Real radius, Real potential) {
    Scene s;
    s.kind = SceneKind::ThinDisk;
    s.disk_radius = radius;
    s.piecewise_const = true;
    s.feature_potential = {potential};
    return s;
}

Scene Scene::sphere(Real radius, DomainSide side, Real potential) {
    Scene s;
    s.kind = SceneKind::Sphere;
    s.sphere_radius = radius;
    s.side = side;
    s.piecewise_const = true;
    s.feature_potential = {potential};
    return s;
}

Scene Scene::sphere(Real radius, DomainSide side, DirichletFn phi) {
    Scene s;
    s.kind = SceneKind::Sphere;
    s.sphere_radius = radius;
    s.side = side;
    s.dirichlet = std::move(phi);
    return s;
}

int Scene::feature_count() const {
    switch (kind) {
        case SceneKind::PlateSet: return static_cast<int>(plates.size());
        default: return 1;
    }
}

Real Scene::scale() const {
    switch (kind) {
        case SceneKind::HalfSpace: return 1.0;
        case SceneKind::ThinDisk: return disk_radius;
        case SceneKind::Sphere: return sphere_radius;
        case SceneKind::PlateSet: {
            Real m = 0;
            for (const Plate& p : plates)
                m = std::max({m, std::abs(p.x0), std::abs(p.x1), std::abs(p.y0), std::abs(p.y1)});
            return m;
        }
    }
    return 1.0;
}

bool Scene::in_domain(const Vec3& p) const {
    switch (kind) {
        case SceneKind::HalfSpace: return p.z() > plane_z;
        case SceneKind::Sphere: {
            const Real r = p.norm();
            return side == DomainSide::Interior ? r < sphere_radius : r > sphere_radius;
        }
        case SceneKind::PlateSet:
        case SceneKind::ThinDisk:
            // complement of a measure-zero set; only exact membership excluded
            return nearest_feature(*this, p).distance > 0;
    }
    return false;
}

DistanceQuery nearest_feature(const Scene& scene, const Vec3& p) {
    DistanceQuery q{std::numeric_limits<Real>::infinity(), -1};
    switch (scene.kind) {
        case SceneKind::HalfSpace:
            q = {std::abs(p.z() - scene.plane_z), 0};
            break;
        case SceneKind::PlateSet:
            for (int i = 0; i < static_cast<int>(scene.plates.size()); ++i) {
                const Real d = plate_distance(scene.plates[i], p);
                if (d < q.distance) q = {d, i};
            }
            break;
        case SceneKind::ThinDisk: {
            const Real rho = std::hypot(p.x(), p.y());
            const Real d = rho <= scene.disk_radius ? std::abs(p.z())
                                                    : std::hypot(rho - scene.disk_radius, p.z());
            q = {d, 0};
            break;
        }
        case SceneKind::Sphere:
            q = {std::abs(p.norm() - scene.sphere_radius), 0};
            break;
    }
    return q;
}

DistanceQuery distance_to_boundary(const Scene& scene, const Vec3& p) {
    const DistanceQuery q = nearest_feature(scene, p);
    const bool inside = [&] {
        switch (scene.kind) {
            case SceneKind::HalfSpace: return p.z() > scene.plane_z;
            case SceneKind::Sphere: {
                const Real r = p.norm();
                return scene.side == DomainSide::Interior ? r < scene.sphere_radius
                                                          : r > scene.sphere_radius;
            }
            default: return q.distance > 0;
        }
    }();
    if (!inside || !(q.distance > 0))
        throw DomainError("point on or outside the solution domain");
    return q;
}

Vec3 project_to_feature(const Scene& scene, const Vec3& p, int feature) {
    switch (scene.kind) {
        case SceneKind::HalfSpace:
            return {p.x(), p.y(), scene.plane_z};
        case SceneKind::PlateSet: {
            const Plate& pl = scene.plates.at(feature);
            return {std::clamp(p.x(), pl.x0, pl.x1), std::clamp(p.y(), pl.y0, pl.y1), 0.0};
        }
        case SceneKind::ThinDisk: {
            const Real rho = std::hypot(p.x(), p.y());
            if (rho <= scene.disk_radius) return {p.x(), p.y(), 0.0};
            const Real s = scene.disk_radius / rho;
            return {p.x() * s, p.y() * s, 0.0};
        }
        case SceneKind::Sphere: {
            const Real r = p.norm();
            if (r == 0) return {0, 0, scene.sphere_radius};
            return p * (scene.sphere_radius / r);
        }
    }
    throw GeometryError("unknown scene kind");
}

Real eval_dirichlet(const Scene& scene, const Vec3& p, Real tol) {
    int best = -1;
    Real dist = std::numeric_limits<Real>::infinity();
    Vec3 proj = p;
    for (int f = 0; f < scene.feature_count(); ++f) {
        const Vec3 pr = project_to_feature(scene, p, f);
        const Real d = (p - pr).norm();
        if (d < dist) {
            dist = d;
            best = f;
            proj = pr;
        }
    }
    if (best < 0 || dist > tol)
        throw ClassificationError("point is not on a boundary feature");
    if (scene.piecewise_const) return scene.feature_potential[best];
    if (!scene.dirichlet) throw ClassificationError("scene has no Dirichlet data");
    return scene.dirichlet(proj);
}

Real eval_dirichlet(const Scene& scene, const Vec3& p) {
    return eval_dirichlet(scene, p, 1e-6 * scene.scale());
}

ExitRecord classify_exit(const Scene& scene, const Vec3& p, Real eps, Real trunc_radius) {
    if (p.norm() > trunc_radius) return {p, kExitInfinity, 0};
    int best = -1;
    Real dist = std::numeric_limits<Real>::infinity();
    Vec3 proj = p;
    for (int f = 0; f < scene.feature_count(); ++f) {
        const Vec3 pr = project_to_feature(scene, p, f);
        const Real d = (p - pr).norm();
        if (d < dist) {
            dist = d;
            best = f;
            proj = pr;
        }
    }
    if (best < 0 || dist > eps)
        throw ClassificationError("point is neither near the boundary nor truncated");
    return {proj, best, 0};
}

} // namespace biewos
