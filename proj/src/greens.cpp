#include "biewos/greens.hpp"

#include <cmath>

namespace biewos {

namespace {

constexpr Real kInv4Pi = 1.0 / (4.0 * kPi);

// One image term c(y)/(4pi |x - p(y)|) with the data needed for derivatives
// in the source argument: dp/dy Jacobian and grad_y c.
struct Term {
    Real c;
    Vec3 p;
    Vec3 gradc;
    Mat3 jac;
};

// terms in frame-local coordinates; mirror plane z=0 when mirrored=true
void build_terms(Real a, const Vec3& y, bool mirrored, Term out[4], int& n) {
    const Real rho = y.norm();
    if (rho < 1e-14 * a)
        throw SingularityError("image source at the frame origin");
    const Vec3 yhat = y / rho;
    const Real k = a * a / (rho * rho);
    const Mat3 kelvin_jac = k * (Mat3::Identity() - 2.0 * yhat * yhat.transpose());

    n = 0;
    out[n++] = {1.0, y, Vec3::Zero(), Mat3::Identity()};
    out[n++] = {-a / rho, k * y, (a / (rho * rho)) * yhat, kelvin_jac};
    if (mirrored) {
        Mat3 M = Mat3::Identity();
        M(2, 2) = -1.0;
        const Vec3 my = M * y;
        out[n++] = {-1.0, my, Vec3::Zero(), M};
        out[n++] = {a / rho, k * my, -(a / (rho * rho)) * yhat, M * kelvin_jac};
    }
}

Real eval_g(const Term* t, int n, const Vec3& x, Real a) {
    Real s = 0;
    for (int i = 0; i < n; ++i) {
        const Real d = (x - t[i].p).norm();
        if (i == 0 && d < 1e-12 * a)
            throw SingularityError("coincident kernel arguments");
        s += t[i].c / d;
    }
    return kInv4Pi * s;
}

Real eval_d2g(const Term* t, int n, const Vec3& x, const Vec3& nx, const Vec3& ny, Real a) {
    Real s = 0;
    for (int i = 0; i < n; ++i) {
        const Vec3 r = x - t[i].p;
        const Real d = r.norm();
        if (i == 0 && d < 1e-12 * a)
            throw SingularityError("coincident kernel arguments");
        const Real d3 = d * d * d;
        const Vec3 dp = t[i].jac * ny;
        const Real rnx = r.dot(nx);
        s += -(t[i].gradc.dot(ny)) * rnx / d3 + t[i].c * dp.dot(nx) / d3
             - 3.0 * t[i].c * rnx * r.dot(dp) / (d3 * d * d);
    }
    return kInv4Pi * s;
}

Real eval_dg_dny(const Term* t, int n, const Vec3& x, const Vec3& ny, Real a) {
    Real s = 0;
    for (int i = 0; i < n; ++i) {
        const Vec3 r = x - t[i].p;
        const Real d = r.norm();
        if (i == 0 && d < 1e-12 * a)
            throw SingularityError("coincident kernel arguments");
        s += t[i].gradc.dot(ny) / d + t[i].c * r.dot(t[i].jac * ny) / (d * d * d);
    }
    return kInv4Pi * s;
}

Real eval_dg_dnx(const Term* t, int n, const Vec3& x, const Vec3& nx, Real a) {
    Real s = 0;
    for (int i = 0; i < n; ++i) {
        const Vec3 r = x - t[i].p;
        const Real d = r.norm();
        if (i == 0 && d < 1e-12 * a)
            throw SingularityError("coincident kernel arguments");
        s += -t[i].c * r.dot(nx) / (d * d * d);
    }
    return kInv4Pi * s;
}

} // namespace

HemisphereFrame::HemisphereFrame(const Vec3& c, Real a, const UnitVec3& ax)
    : center(c), radius(a), axis(ax) {
    if (!(a > 0)) throw GeometryError("hemisphere radius must be positive");
    if (std::abs(axis.norm() - 1.0) > 1e-12)
        throw GeometryError("hemisphere axis must be unit length");
    // orthonormal completion, stable for any axis
    const Vec3 ref = std::abs(axis.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 e1 = axis.cross(ref).normalized();
    const Vec3 e2 = axis.cross(e1);
    rot.row(0) = e1;
    rot.row(1) = e2;
    rot.row(2) = axis;
}

Vec3 HemisphereFrame::cap_point(Real theta, Real phi) const {
    const Vec3 local(radius * std::sin(theta) * std::cos(phi),
                     radius * std::sin(theta) * std::sin(phi), radius * std::cos(theta));
    return center + rot.transpose() * local;
}

std::vector<ImageCharge> hemisphere_images(const HemisphereFrame& f, const Vec3& y) {
    Term t[4];
    int n;
    build_terms(f.radius, f.to_local(y), true, t, n);
    std::vector<ImageCharge> out;
    for (int i = 0; i < n; ++i)
        out.push_back({f.center + f.rot.transpose() * t[i].p, t[i].c});
    return out;
}

std::vector<ImageCharge> sphere_images(const SphereFrame& f, const Vec3& y) {
    Term t[4];
    int n;
    build_terms(f.radius, y - f.center, false, t, n);
    std::vector<ImageCharge> out;
    for (int i = 0; i < n; ++i) out.push_back({f.center + t[i].p, t[i].c});
    return out;
}

Real fundamental(const Vec3& x, const Vec3& y) {
    const Real d = (x - y).norm();
    if (d < 1e-14 * (1.0 + x.norm() + y.norm()))
        throw SingularityError("coincident kernel arguments");
    return kInv4Pi / d;
}

Real hemisphere_g(const HemisphereFrame& f, const Vec3& x, const Vec3& y) {
    Term t[4];
    int n;
    build_terms(f.radius, f.to_local(y), true, t, n);
    return eval_g(t, n, f.to_local(x), f.radius);
}

Real hemisphere_d2g(const HemisphereFrame& f, const Vec3& xprime, const Vec3& y,
                    const UnitVec3& n_x, const UnitVec3& n_y) {
    Term t[4];
    int n;
    build_terms(f.radius, f.to_local(y), true, t, n);
    return eval_d2g(t, n, f.to_local(xprime), f.dir_local(n_x), f.dir_local(n_y), f.radius);
}

Real h_kernel(const HemisphereFrame& f, const Vec3& y_on_cap) {
    const Vec3 rel = y_on_cap - f.center;
    const Real r = rel.norm();
    if (std::abs(r - f.radius) > 1e-9 * f.radius)
        throw GeometryError("point is not on the hemispherical cap");
    const Real cos_theta = f.axis.dot(rel) / r;
    const Real a = f.radius;
    return 3.0 / (2.0 * kPi * a * a * a) * cos_theta;
}

Real sphere_g(const SphereFrame& f, const Vec3& x, const Vec3& y) {
    Term t[4];
    int n;
    build_terms(f.radius, y - f.center, false, t, n);
    return eval_g(t, n, x - f.center, f.radius);
}

Real sphere_dg_dnx(const SphereFrame& f, const Vec3& x, const UnitVec3& n_x, const Vec3& y) {
    Term t[4];
    int n;
    build_terms(f.radius, y - f.center, false, t, n);
    return eval_dg_dnx(t, n, x - f.center, n_x, f.radius);
}

Real sphere_dg_dny(const SphereFrame& f, const Vec3& x, const Vec3& y, const UnitVec3& n_y) {
    Term t[4];
    int n;
    build_terms(f.radius, y - f.center, false, t, n);
    return eval_dg_dny(t, n, x - f.center, n_y, f.radius);
}

Real sphere_d2g(const SphereFrame& f, const Vec3& x, const UnitVec3& n_x, const Vec3& y,
                const UnitVec3& n_y) {
    Term t[4];
    int n;
    build_terms(f.radius, y - f.center, false, t, n);
    return eval_d2g(t, n, x - f.center, n_x, n_y, f.radius);
}

} // namespace biewos
