#pragma once

#include <array>
#include <functional>
#include <vector>

#include "biewos/types.hpp"

namespace biewos {

enum class SceneKind { HalfSpace, PlateSet, ThinDisk, Sphere };
enum class DomainSide { Exterior, Interior };

// Zero-thickness rectangle on the z=0 plane.
struct Plate {
    Real x0, x1, y0, y1;
    Real potential = 0.0;
};

struct DistanceQuery {
    Real distance;
    int feature; // argmin feature index, ties broken by lowest index
};

inline constexpr int kExitInfinity = -1;
inline constexpr int kExitFailed = -2;

struct ExitRecord {
    Vec3 point;
    int feature; // >=0 feature index, kExitInfinity, or kExitFailed
    int steps;
};

using DirichletFn = std::function<Real(const Vec3&)>;

// Boundary geometry + Dirichlet data + domain side. Immutable after
// construction; all queries are read-only and thread-safe.
struct Scene {
    SceneKind kind = SceneKind::HalfSpace;
    DomainSide side = DomainSide::Exterior;

    Real plane_z = 0.0;          // HalfSpace
    std::vector<Plate> plates;   // PlateSet
    Real disk_radius = 0.0;      // ThinDisk
    Real sphere_radius = 0.0;    // Sphere (centered at origin)

    bool piecewise_const = false;
    std::vector<Real> feature_potential; // per feature, when piecewise_const
    DirichletFn dirichlet;               // boundary data at an on-feature point

    static Scene half_space(Real plane_z, DirichletFn phi);
    static Scene plate_set(std::vector<Plate> plates);
    static Scene plate_set(std::vector<Plate> plates, DirichletFn phi);
    // Unit plates tiling [-1,1]^2 by quadrant: I=(+,+), II=(-,+), III=(-,-), IV=(+,-).
    static Scene four_plates(const std::array<Real, 4>& potentials);
    static Scene thin_disk(Real radius, Real potential);
    static Scene sphere(Real radius, DomainSide side, Real potential);
    static Scene sphere(Real radius, DomainSide side, DirichletFn phi);

    int feature_count() const;
    // characteristic length, used for default tolerances
    Real scale() const;
    bool in_domain(const Vec3& p) const;
};

// Exact distance from p (strictly inside the solution domain) to the boundary
// set, with the argmin feature.
DistanceQuery distance_to_boundary(const Scene& scene, const Vec3& p);

// Unsigned distance to the nearest feature, valid for any p (walk positions
// may land exactly on or a rounding error past the boundary).
DistanceQuery nearest_feature(const Scene& scene, const Vec3& p);

// Nearest point on the given feature.
Vec3 project_to_feature(const Scene& scene, const Vec3& p, int feature);

// Dirichlet data at (the projection of) p. Throws ClassificationError when p
// is farther than tol from every feature.
Real eval_dirichlet(const Scene& scene, const Vec3& p, Real tol);
Real eval_dirichlet(const Scene& scene, const Vec3& p);

// Absorption/truncation classification for a walk position.
ExitRecord classify_exit(const Scene& scene, const Vec3& p, Real eps, Real trunc_radius);

} // namespace biewos
