#include <doctest.h>

#include <cmath>

#include "biewos/greens.hpp"
#include "biewos/quadrature.hpp"
#include "biewos/rng.hpp"
#include "oracles.hpp"

using namespace biewos;

namespace {

Vec3 random_interior(const HemisphereFrame& f, RngStream& rng) {
    // uniform-ish inside the half-ball, away from the boundary and the axis origin
    for (;;) {
        const Vec3 q(2 * rng.next_double() - 1, 2 * rng.next_double() - 1, rng.next_double());
        if (q.norm() < 0.9 && q.z() > 0.05 && q.norm() > 0.1)
            return f.center + f.radius * (f.rot.transpose() * q);
    }
}

} // namespace

TEST_CASE("fundamental solution values and symmetry") {
    CHECK(fundamental({0, 0, 0}, {1, 0, 0}) == doctest::Approx(1.0 / (4 * kPi)).epsilon(1e-14));
    CHECK(fundamental({1, 2, 3}, {1, 2, 7}) == doctest::Approx(1.0 / (16 * kPi)).epsilon(1e-14));
    RngStream rng(1, 0, 0);
    for (int i = 0; i < 100; ++i) {
        const Vec3 x(rng.next_double(), rng.next_double(), rng.next_double());
        const Vec3 y(rng.next_double() + 2, rng.next_double(), rng.next_double());
        CHECK(fundamental(x, y) == doctest::Approx(fundamental(y, x)).epsilon(1e-15));
    }
    CHECK_THROWS_AS(fundamental({1, 1, 1}, {1, 1, 1}), SingularityError);
}

TEST_CASE("hemisphere image set layout") {
    const HemisphereFrame f({0.5, 0, 0}, 0.5, Vec3::UnitZ());
    const Vec3 y = f.center + Vec3(0.1, 0.05, 0.2);
    const auto imgs = hemisphere_images(f, y);
    REQUIRE(imgs.size() == 4);
    const Real rho = (y - f.center).norm();
    CHECK(imgs[0].charge == doctest::Approx(1.0));
    CHECK(imgs[1].charge == doctest::Approx(-f.radius / rho));
    CHECK(imgs[2].charge == doctest::Approx(-1.0));
    CHECK(imgs[3].charge == doctest::Approx(f.radius / rho));
    CHECK((imgs[0].location - y).norm() == doctest::Approx(0.0));
    // mirror-source reflects across the base plane
    CHECK(imgs[2].location.z() == doctest::Approx(-y.z()).epsilon(1e-12));
    CHECK(sphere_images({{0, 0, 0}, 1.0}, {0.3, 0, 0}).size() == 2);
}

TEST_CASE("hemisphere_g vanishes on the boundary and is symmetric") {
    const HemisphereFrame f({0.2, -0.1, 0}, 0.7, Vec3::UnitZ());
    RngStream rng(2, 0, 0);
    Real max_cap = 0, max_disk = 0, max_sym = 0;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 x = random_interior(f, rng);
        const Real th = std::acos(rng.next_double());
        const Real ph = 2 * kPi * rng.next_double();
        max_cap = std::max(max_cap, std::abs(hemisphere_g(f, f.cap_point(th, ph), x)));
        const Real rho = f.radius * std::sqrt(rng.next_double());
        const Vec3 disk_pt =
            f.center + f.rot.transpose() * Vec3(rho * std::cos(ph), rho * std::sin(ph), 0);
        if ((disk_pt - x).norm() > 1e-3)
            max_disk = std::max(max_disk, std::abs(hemisphere_g(f, disk_pt, x)));
        const Vec3 y = random_interior(f, rng);
        if ((x - y).norm() > 1e-3) {
            const Real gxy = hemisphere_g(f, x, y);
            max_sym = std::max(max_sym, std::abs(gxy - hemisphere_g(f, y, x)) / std::abs(gxy));
        }
    }
    CHECK(max_cap < 1e-10);
    CHECK(max_disk < 1e-10);
    CHECK(max_sym < 1e-10);
}

TEST_CASE("hemisphere_g is harmonic away from images") {
    const HemisphereFrame f({0, 0, 0}, 1.0, Vec3::UnitZ());
    const Vec3 x(0.1, 0.2, 0.4);
    RngStream rng(3, 0, 0);
    int checked = 0;
    for (int i = 0; i < 60 && checked < 20; ++i) {
        const Vec3 y = random_interior(f, rng);
        const Real d = (x - y).norm();
        if (d < 0.25) continue;
        ++checked;
        const Real h = 1e-4 * f.radius;
        const Real lap =
            oracles::fd_laplacian([&](const Vec3& p) { return hemisphere_g(f, x, p); }, y, h);
        // stencil residual ~ h^2 * |4th derivatives| ~ h^2 * |g| / d^4, with
        // image distances >= the direct one; factor 1e3 of slack
        const Real bound = 1e3 * h * h * std::abs(hemisphere_g(f, x, y)) / std::pow(d, 4) + 1e-9;
        CHECK(std::abs(lap) < bound);
    }
    CHECK(checked == 20);
}

TEST_CASE("h_kernel closed form and consistency with the image sum") {
    const HemisphereFrame f({0.5, 0, 0}, 0.5, Vec3::UnitZ());
    CHECK(h_kernel(f, f.cap_point(0, 0)) == doctest::Approx(3.0 / (2 * kPi * 0.125)).epsilon(1e-12));
    CHECK(h_kernel(f, f.cap_point(kPi / 2, 1.0)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(h_kernel(f, f.center + Vec3(0, 0, 0.3)), GeometryError);

    // equals d2g with n_x = -axis at the center, n_y radial, rel 1e-9
    for (Real th : {0.2, 0.7, 1.1, 1.5}) {
        const Vec3 y = f.cap_point(th, 0.9);
        const Vec3 ny = (y - f.center).normalized();
        const Real ref = h_kernel(f, y);
        const Real val = hemisphere_d2g(f, f.center, y, -f.axis, ny);
        CHECK(val == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("cap normalization: integral of h equals 3/(2a)") {
    for (Real a : {0.5, 1.0, 2.0}) {
        const HemisphereFrame f({0, 0, 0}, a, Vec3::UnitZ());
        Real s = 0;
        for (const CapNode& nd : cap_rule(f, 30)) s += nd.weight * h_kernel(f, nd.point);
        CHECK(s == doctest::Approx(3.0 / (2 * a)).epsilon(1e-8));
    }
}

TEST_CASE("hemisphere_d2g disk limit (1/2pi)(1/rho^3 - 1/a^3)") {
    const HemisphereFrame f({0.5, 0, 0}, 0.5, Vec3::UnitZ());
    const Vec3 nx = -f.axis;
    auto disk_pt = [&](Real rho, Real psi) -> Vec3 {
        return f.center + f.rot.transpose() * Vec3(rho * std::cos(psi), rho * std::sin(psi), 0);
    };
    CHECK(hemisphere_d2g(f, f.center, disk_pt(0.5, 0.3), nx, nx)
          == doctest::Approx(0.0).epsilon(1e-10));
    const Real expect = (1.0 / (2 * kPi)) * (1.0 / std::pow(0.25, 3) - 1.0 / std::pow(0.5, 3));
    CHECK(hemisphere_d2g(f, f.center, disk_pt(0.25, 1.2), nx, nx)
          == doctest::Approx(expect).epsilon(1e-10));
    CHECK(expect == doctest::Approx(8.9127).epsilon(1e-4));
}

TEST_CASE("hemisphere_d2g matches finite differences at general positions") {
    const HemisphereFrame f({0, 0, 0}, 1.0, Vec3(0, 0, 1));
    RngStream rng(4, 0, 0);
    for (int i = 0; i < 25; ++i) {
        const Vec3 x = random_interior(f, rng);
        const Vec3 y = random_interior(f, rng);
        if ((x - y).norm() < 0.3) continue;
        Vec3 nx(rng.next_double() - 0.5, rng.next_double() - 0.5, rng.next_double() - 0.5);
        Vec3 ny(rng.next_double() - 0.5, rng.next_double() - 0.5, rng.next_double() - 0.5);
        nx.normalize();
        ny.normalize();
        const Real ref = oracles::fd_mixed(
            [&](const Vec3& xx, const Vec3& yy) { return hemisphere_g(f, xx, yy); }, x, nx, y, ny,
            1e-5);
        CHECK(hemisphere_d2g(f, x, y, nx, ny) == doctest::Approx(ref).epsilon(2e-5));
    }
}

TEST_CASE("sphere Green's function: boundary zero, symmetry, derivatives vs FD") {
    const SphereFrame f{{1, 2, 3}, 1.5};
    RngStream rng(6, 0, 0);
    auto interior = [&] {
        for (;;) {
            const Vec3 q(2 * rng.next_double() - 1, 2 * rng.next_double() - 1,
                         2 * rng.next_double() - 1);
            if (q.norm() < 0.9 && q.norm() > 0.15) return Vec3(f.center + f.radius * q);
        }
    };
    Real max_b = 0, max_sym = 0;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 y = interior();
        const Real th = std::acos(2 * rng.next_double() - 1), ph = 2 * kPi * rng.next_double();
        const Vec3 xs =
            f.center
            + f.radius * Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
        max_b = std::max(max_b, std::abs(sphere_g(f, xs, y)));
        const Vec3 x = interior();
        if ((x - y).norm() > 1e-2) {
            const Real g = sphere_g(f, x, y);
            max_sym = std::max(max_sym, std::abs(g - sphere_g(f, y, x)) / std::abs(g));
        }
    }
    CHECK(max_b < 1e-10);
    CHECK(max_sym < 1e-10);

    for (int i = 0; i < 20; ++i) {
        const Vec3 x = interior(), y = interior();
        if ((x - y).norm() < 0.3) continue;
        Vec3 nx(rng.next_double() - 0.5, rng.next_double() - 0.5, rng.next_double() - 0.5);
        Vec3 ny(rng.next_double() - 0.5, rng.next_double() - 0.5, rng.next_double() - 0.5);
        nx.normalize();
        ny.normalize();
        const Real h = 1e-6 * f.radius;
        const Real fd_ny = oracles::fd_directional(
            [&](const Vec3& yy) { return sphere_g(f, x, yy); }, y, ny, h);
        CHECK(sphere_dg_dny(f, x, y, ny) == doctest::Approx(fd_ny).epsilon(1e-6));
        const Real fd_nx = oracles::fd_directional(
            [&](const Vec3& xx) { return sphere_g(f, xx, y); }, x, nx, h);
        CHECK(sphere_dg_dnx(f, x, nx, y) == doctest::Approx(fd_nx).epsilon(1e-6));
        const Real fd2 = oracles::fd_mixed(
            [&](const Vec3& xx, const Vec3& yy) { return sphere_g(f, xx, yy); }, x, nx, y, ny,
            1e-5);
        CHECK(sphere_d2g(f, x, nx, y, ny) == doctest::Approx(fd2).epsilon(1e-5));
    }
}

TEST_CASE("near-coincidence raises SingularityError") {
    const HemisphereFrame f({0, 0, 0}, 1.0, Vec3::UnitZ());
    const Vec3 y(0.2, 0.1, 0.4);
    CHECK_THROWS_AS(hemisphere_g(f, y + Vec3(1e-14, 0, 0), y), SingularityError);
}
