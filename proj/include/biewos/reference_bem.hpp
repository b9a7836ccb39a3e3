#pragma once

#include <vector>

#include "biewos/geometry.hpp"
#include "biewos/types.hpp"

namespace biewos {

// Dense first-kind single-layer collocation oracle for flat thin structures.
// The solved density sigma is the full (two-sided) charge per unit area; the
// per-side value comparable to a one-sided normal derivative is sigma/2.
struct BemPanel {
    Vec3 center;
    Real area;
    int plate; // owning feature (plate index, 0 for the disk)
};

class BemSolution {
public:
    std::vector<BemPanel> panels;
    VecX sigma;
    MatX A; // collocation matrix, kept only on request

    Real total_charge() const;
    // per-side density at a point on the structure, bilinear in the panel grid
    Real sigma_side_at(const Vec3& p) const;

    // grid layout (filled by the solvers)
    SceneKind kind = SceneKind::PlateSet;
    std::vector<Plate> plates; // PlateSet: per-plate n x n panels
    int n_side = 0;
    std::vector<Real> ring_edges; // ThinDisk: graded radii, n_theta sectors
    int n_theta = 0;
};

// Collocation solve of  int sigma(y)/(4 pi |x-y|) ds = phi(x)  at panel
// centroids. PlateSet: n x n rectangles per plate with an analytic self-term.
// ThinDisk: rim-graded annular sectors (n rings, 4n sectors) with Duffy
// self-integration.
BemSolution solve_charge_density(const Scene& scene, int n_panels_per_side,
                                 bool keep_matrix = false);

} // namespace biewos
