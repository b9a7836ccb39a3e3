#pragma once

#include <vector>

#include "biewos/types.hpp"

namespace biewos {

// Panelized boundary values. Normals point from the boundary into the region
// where u is harmonic and evaluated (object-outward for exterior problems);
// dudn is the derivative along that normal.
struct BoundaryPanel {
    Vec3 point;
    UnitVec3 normal;
    Real area;
    Real u;
    Real dudn;
};

struct BoundaryData {
    std::vector<BoundaryPanel> panels;
};

// Representation-formula evaluation by the midpoint rule,
//   u(x) = sum area * [dG/dn_y * u - G * dudn].
// Refuses targets closer than one panel diameter to any panel.
Real evaluate(const BoundaryData& data, const Vec3& x);

} // namespace biewos
