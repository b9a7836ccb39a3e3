#include <doctest.h>

#include <cmath>

#include "biewos/point_solver.hpp"
#include "oracles.hpp"

using namespace biewos;

namespace {

Scene test1_halfspace() {
    const Vec3 src(0, 0, -1);
    return Scene::half_space(0.0, [src](const Vec3& y) { return 1.0 / (y - src).norm(); });
}

// exact potential of the Test-1 scene, fed through the sampler interface
PotentialSampler exact_test1_sampler() {
    return [](const Vec3& y, std::uint64_t) {
        Estimate e;
        e.mean = 1.0 / (y - Vec3(0, 0, -1)).norm();
        e.variance = 0.0;
        e.n = 1;
        return e;
    };
}

PotentialSampler constant_sampler(Real c) {
    return [c](const Vec3&, std::uint64_t) {
        Estimate e;
        e.mean = c;
        e.n = 1;
        return e;
    };
}

const Real kAnalytic = 1.0 / std::pow(1.25, 1.5); // 0.71554...

} // namespace

TEST_CASE("sigma2_prime reproduces the frozen ring-rule values (Test 1)") {
    const Scene s = test1_halfspace();
    // 20x20 rule, delta/a = 1e-4; values cross-checked against an independent
    // quadrature implementation
    const struct {
        Real a, expect;
    } rows[] = {{0.1, 0.018774176765485},
                {0.2, 0.037509938413963},
                {0.5, 0.093041749382575},
                {0.7, 0.128953220225998},
                {1.0, 0.179947714623269}};
    for (const auto& r : rows) {
        const HemisphereFrame f({0.5, 0, 0}, r.a, Vec3::UnitZ());
        const Real v = sigma2_prime(s, f, 1e-4 * r.a, 20);
        CHECK(v == doctest::Approx(r.expect).epsilon(1e-9));
    }
    // paper Table 1 column at 0.1% relative
    const Real paper[] = {0.018777, 0.037515, 0.093054, 0.128971, 0.179973};
    int i = 0;
    for (const auto& r : rows) {
        const HemisphereFrame f({0.5, 0, 0}, r.a, Vec3::UnitZ());
        CHECK(std::abs(sigma2_prime(s, f, 1e-4 * r.a, 20) / paper[i++] - 1.0) < 1e-3);
    }
}

TEST_CASE("sigma2_prime is zero for constant data") {
    const Scene disk = Scene::thin_disk(1.0, 1.0);
    const HemisphereFrame f({-0.5, 0, 0}, 0.4, Vec3::UnitZ());
    CHECK(sigma2_prime(disk, f, 1e-4 * 0.4, 20) == 0.0);
}

TEST_CASE("sigma2_prime four plates: exact decomposition vs frozen values") {
    const Scene s = Scene::four_plates({0, 1, 0, 0}); // plate II at 1V
    const Vec3 A(-0.2273, 0.2273, 0);
    for (Real a : {0.1, 0.2, 0.2273}) {
        const HemisphereFrame f(A, a, Vec3::UnitZ());
        CHECK(sigma2_prime(s, f, 1e-4 * a, 20) == 0.0);
    }
    const struct {
        Real a, expect;
    } rows[] = {{0.3, 0.08918475915450}, {0.5, 0.63287790821628}, {0.7, 1.02697283920885}};
    for (const auto& r : rows) {
        const HemisphereFrame f(A, r.a, Vec3::UnitZ());
        CHECK(sigma2_prime(s, f, 1e-4 * r.a, 20) == doctest::Approx(r.expect).epsilon(1e-10));
    }
    // paper Table prints 0.0892 / 0.6330 / 1.0271
    const HemisphereFrame f(A, 0.5, Vec3::UnitZ());
    CHECK(std::abs(sigma2_prime(s, f, 1e-4, 20) - 0.6330) < 2e-4);
    // disk poking past the plate union is refused
    const HemisphereFrame fbad(A, 1.0, Vec3::UnitZ());
    CHECK_THROWS_AS(sigma2_prime(s, fbad, 1e-4, 20), DomainError);
}

TEST_CASE("sigma2_prime delta-convergence is first order at 20x20") {
    const Scene s = test1_halfspace();
    const HemisphereFrame f({0.5, 0, 0}, 0.5, Vec3::UnitZ());
    const Real ref = sigma2_prime(s, f, 1e-6 * 0.5, 20);
    const Real e2 = sigma2_prime(s, f, 1e-2 * 0.5, 20) - ref;
    const Real e3 = sigma2_prime(s, f, 1e-3 * 0.5, 20) - ref;
    CHECK(e3 / e2 > 0.05);
    CHECK(e3 / e2 < 0.2);
}

TEST_CASE("sigma1_prime with the exact sampler matches the frozen quadrature value") {
    const Scene s = test1_halfspace();
    const HemisphereFrame f({0.5, 0, 0}, 0.5, Vec3::UnitZ());
    const auto [v, se] = sigma1_prime(s, f, 20, exact_test1_sampler());
    CHECK(v == doctest::Approx(0.622487481448513).epsilon(1e-9));
    CHECK(se == 0.0);
}

TEST_CASE("sigma1_prime vanishes when the sampler returns phi(x)") {
    const Scene s = test1_halfspace();
    const HemisphereFrame f({0.5, 0, 0}, 0.5, Vec3::UnitZ());
    const Real phix = eval_dirichlet(s, f.center);
    const auto [v, se] = sigma1_prime(s, f, 20, constant_sampler(phix));
    CHECK(std::abs(v) < 1e-14);
    CHECK(se == 0.0);
}

TEST_CASE("solve_point, exact sampler: radius robustness at quadrature level") {
    const Scene s = test1_halfspace();
    const Real totals[] = {0.715539248403333, 0.715536744007608, 0.715529230831088,
                           0.715524222120063, 0.715516709286366};
    const Real as[] = {0.1, 0.2, 0.5, 0.7, 1.0};
    for (int i = 0; i < 5; ++i) {
        const HemisphereFrame f({0.5, 0, 0}, as[i], Vec3::UnitZ());
        const PointNeumannResult r =
            solve_point(s, f, 20, 20, 1e-4 * as[i], WosConfig{}, exact_test1_sampler());
        CHECK(r.total == doctest::Approx(totals[i]).epsilon(1e-9));
        CHECK(r.total == r.sigma1 + r.sigma2);
        CHECK(std::abs(r.total / kAnalytic - 1.0) < 1e-4);
    }
}

TEST_CASE("constant-data annihilation with an exact mock sampler") {
    const Scene disk = Scene::thin_disk(1.0, 3.5);
    for (Real a : {0.1, 0.4}) {
        const HemisphereFrame f({-0.5, 0, 0}, a, Vec3::UnitZ());
        const PointNeumannResult r =
            solve_point(disk, f, 20, 20, 1e-4 * a, WosConfig{}, constant_sampler(3.5));
        CHECK(std::abs(r.total) < 1e-8);
    }
}

TEST_CASE("solve_point Monte Carlo run lands near the analytic density") {
    const Scene s = test1_halfspace();
    const HemisphereFrame f({0.5, 0, 0}, 0.5, Vec3::UnitZ());
    WosConfig cfg;
    cfg.n_paths = 1000;
    cfg.seed = 2024;
    const PointNeumannResult r = solve_point(s, f, 20, 20, 1e-4 * 0.5, cfg);
    // 4 sigma plus the deterministic quadrature offset margin
    CHECK(std::abs(r.total - kAnalytic) < 4.0 * r.std_error + 2e-4);
    CHECK(r.std_error > 0);
    CHECK(r.std_error < 0.01);
}

TEST_CASE("sigma2_prime ignores the Monte Carlo config entirely") {
    const Scene s = test1_halfspace();
    const HemisphereFrame f({0.5, 0, 0}, 0.3, Vec3::UnitZ());
    const Real v1 = sigma2_prime(s, f, 1e-4 * 0.3, 20);
    const Real v2 = sigma2_prime(s, f, 1e-4 * 0.3, 20);
    CHECK(std::memcmp(&v1, &v2, sizeof v1) == 0);
}

TEST_CASE("preconditions: flat scenes only, center on the plane") {
    const Scene sph = Scene::sphere(3.0, DomainSide::Exterior, 1.0);
    const HemisphereFrame f({0, 0, 3}, 1.0, Vec3::UnitZ());
    CHECK_THROWS_AS(sigma2_prime(sph, f, 1e-4, 20), ApplicabilityError);

    const Scene s = test1_halfspace();
    const HemisphereFrame off({0.5, 0, 0.2}, 0.5, Vec3::UnitZ());
    CHECK_THROWS_AS(sigma2_prime(s, off, 1e-4, 20), GeometryError);
    const HemisphereFrame tilted({0.5, 0, 0}, 0.5, Vec3(1, 0, 0));
    CHECK_THROWS_AS(sigma2_prime(s, tilted, 1e-4, 20), GeometryError);

    const Scene disk = Scene::thin_disk(1.0, 1.0);
    const HemisphereFrame poke({-0.5, 0, 0}, 0.6, Vec3::UnitZ());
    CHECK_THROWS_AS(sigma2_prime(disk, poke, 1e-4 * 0.6, 20), DomainError);
}
