#include "biewos/field_eval.hpp"

#include <cmath>

namespace biewos {

Real evaluate(const BoundaryData& data, const Vec3& x) {
    Real sum = 0;
    for (const BoundaryPanel& p : data.panels) {
        const Vec3 r = x - p.point;
        const Real d = r.norm();
        if (d * d < p.area)
            throw NearFieldError("evaluation point within one panel diameter of the boundary");
        const Real g = 1.0 / (4.0 * kPi * d);
        const Real dg_dny = p.normal.dot(r) / (4.0 * kPi * d * d * d);
        sum += p.area * (dg_dny * p.u - g * p.dudn);
    }
    return sum;
}

} // namespace biewos
