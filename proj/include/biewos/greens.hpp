#pragma once

#include <vector>

#include "biewos/types.hpp"

namespace biewos {

// Local frame for a hemisphere sitting on a flat boundary piece: center on the
// boundary, axis pointing into the solution side (local +z), radius a.
struct HemisphereFrame {
    Vec3 center;
    Real radius;
    UnitVec3 axis;
    Mat3 rot; // rows e1, e2, axis

    HemisphereFrame(const Vec3& c, Real a, const UnitVec3& ax);

    Vec3 to_local(const Vec3& p) const { return rot * (p - center); }
    Vec3 to_global_dir(const Vec3& d) const { return rot.transpose() * d; }
    Vec3 dir_local(const Vec3& d) const { return rot * d; }
    // point on the spherical cap at polar angle theta (from axis), azimuth phi
    Vec3 cap_point(Real theta, Real phi) const;
};

struct SphereFrame {
    Vec3 center;
    Real radius;
};

struct ImageCharge {
    Vec3 location;
    Real charge;
};

// source, Kelvin, mirror-source, mirror-Kelvin with charges (1, -a/rho, -1, +a/rho)
std::vector<ImageCharge> hemisphere_images(const HemisphereFrame& f, const Vec3& y);
// source and Kelvin image
std::vector<ImageCharge> sphere_images(const SphereFrame& f, const Vec3& y);

// free-space fundamental solution 1/(4 pi |x-y|)
Real fundamental(const Vec3& x, const Vec3& y);

// Green's function of the hemisphere domain (zero on cap and base plane).
Real hemisphere_g(const HemisphereFrame& f, const Vec3& x, const Vec3& y);

// Mixed second normal derivative of hemisphere_g at x' near the center,
// directions n_x (at x'), n_y (at y). On the disk (n_x = n_y = -axis, x'->x)
// this limits to (1/2pi)(1/rho^3 - 1/a^3); on the cap with n_x=-axis at the
// center and n_y radial it equals h_kernel.
Real hemisphere_d2g(const HemisphereFrame& f, const Vec3& xprime, const Vec3& y,
                    const UnitVec3& n_x, const UnitVec3& n_y);

// (3 / (2 pi a^3)) cos(theta) for y on the cap.
Real h_kernel(const HemisphereFrame& f, const Vec3& y_on_cap);

// Green's function of the whole sphere (zero on the spherical surface) and
// its analytic directional derivatives.
Real sphere_g(const SphereFrame& f, const Vec3& x, const Vec3& y);
Real sphere_dg_dnx(const SphereFrame& f, const Vec3& x, const UnitVec3& n_x, const Vec3& y);
Real sphere_dg_dny(const SphereFrame& f, const Vec3& x, const Vec3& y, const UnitVec3& n_y);
Real sphere_d2g(const SphereFrame& f, const Vec3& x, const UnitVec3& n_x, const Vec3& y,
                const UnitVec3& n_y);

} // namespace biewos
