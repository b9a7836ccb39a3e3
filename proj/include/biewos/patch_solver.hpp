#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "biewos/greens.hpp"
#include "biewos/wos.hpp"

namespace biewos {

struct PatchMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> tris;
    std::vector<Vec3> centroid;
    std::vector<UnitVec3> normal; // object-outward (into the solution domain)
    std::vector<Real> area;
    std::vector<Real> diam;

    int n_panels() const { return static_cast<int>(tris.size()); }
};

// Superimposed whole sphere at a boundary point o plus the triangulated
// patch S = dOmega ∩ ball and the gamma-grid layout.
struct PatchSetup {
    SphereFrame sphere; // center o on dOmega, radius a
    UnitVec3 axis;      // object-outward normal at o; gamma-grid pole
    Mat3 rot;           // rows e1, e2, axis
    PatchMesh mesh;
    Real theta_rim = 0;      // rim polar angle of Gamma on the small sphere
    Real theta_grid_max = 0; // grid/integration coverage, slightly inside the rim
    int n_theta = 64, n_phi = 128;
    int gauss_gamma = 30; // rule on Gamma integrals
    int gauss_polar = 20; // polar rule per subtriangle
    int near_depth = 2;   // refinement depth for panels within 2 diameters

    Vec3 gamma_point(Real theta, Real phi) const;
};

// Patch of a Sphere scene around the surface point o (latitude-band mesh).
PatchSetup make_sphere_patch_setup(const Scene& scene, const Vec3& o, Real a, int n_bands,
                                   int n_azimuth, int n_theta = 64, int n_phi = 128);

// Flat disk patch on the plane z = plane_z, solution side above.
PatchSetup make_flat_patch_setup(const Vec3& center, Real a, int n_bands, int n_azimuth,
                                 int n_theta = 64, int n_phi = 128);

struct GammaGrid {
    int n_theta = 0, n_phi = 0;
    Real theta_max = 0;
    std::vector<Estimate> values; // row-major [theta][phi]
};

GammaGrid sample_gamma_grid(const Scene& scene, const PatchSetup& setup, const WosConfig& cfg);
GammaGrid sample_gamma_grid(const PatchSetup& setup, const PotentialSampler& sampler);

// Bilinear in (theta, phi), periodic in phi. Throws ExtrapolationError
// outside the grid's theta coverage.
Real interp_gamma(const GammaGrid& grid, const PatchSetup& setup, const Vec3& y);

enum class BieKind { FirstKind, SecondKind };

struct DenseSystem {
    MatX A;
    VecX b;
    VecX b_se; // propagated WOS standard errors of b
    BieKind kind = BieKind::SecondKind;
};

// Collocation at panel centroids. The unknown is du/dn along the
// object-outward normal (so for the exterior sphere test the target is
// -1/(4 pi R^2)). Hyper-singular and strongly singular self terms are
// regularized by the constant-solution subtraction, then integrated with the
// polar rule.
DenseSystem assemble(const Scene& scene, const PatchSetup& setup, BieKind kind,
                     const GammaGrid& grid);

struct NeumannField {
    VecX dudn;
    VecX r; // panel centroid distance to the patch center o
    VecX est_error;
};

NeumannField solve_patch(const Scene& scene, const PatchSetup& setup, BieKind kind,
                         const WosConfig& cfg);
NeumannField solve_patch(const Scene& scene, const PatchSetup& setup, BieKind kind,
                         const GammaGrid& grid);

// plain-text vertex/triangle dump
void dump_mesh(const PatchMesh& mesh, std::ostream& os);

} // namespace biewos
