#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "biewos/geometry.hpp"
#include "biewos/rng.hpp"
#include "biewos/types.hpp"

namespace biewos {

struct WosConfig {
    Real eps_shell = 1e-5;
    Real trunc_radius = 1e5;
    std::int64_t n_paths = 1000;
    int max_steps = 10000;
    std::uint64_t seed = 0;
    int workers = 1; // affects speed only, never results
};

struct Estimate {
    Real mean = 0;
    Real variance = 0; // sample variance of per-path values
    std::int64_t n = 0;        // paths contributing to the mean
    std::int64_t n_infinity = 0;
    std::int64_t n_failed = 0;
    Real std_error() const;
};

// One walk-on-spheres trajectory. The stream determines it completely.
ExitRecord walk(const Scene& scene, const Vec3& start, const WosConfig& cfg, RngStream& rng);
ExitRecord walk(const Scene& scene, const Vec3& start, const WosConfig& cfg,
                std::uint64_t point_id, std::uint64_t path_id);

// Boundary value recorded by a finished path (0 for truncated-at-infinity).
Real exit_value(const Scene& scene, const ExitRecord& rec);

// Feynman-Kac estimate of u(p); streams keyed (seed, point_id, path_id).
Estimate estimate_u(const Scene& scene, const Vec3& p, const WosConfig& cfg,
                    std::uint64_t point_id = 0);

// Per-point estimates with point ids point_id_base + index; bit-identical for
// any worker count.
std::vector<Estimate> estimate_u_batch(const Scene& scene, const std::vector<Vec3>& points,
                                       const WosConfig& cfg, std::uint64_t point_id_base = 0);

// Injection point for exact/mock potential values in solvers and tests.
using PotentialSampler = std::function<Estimate(const Vec3& y, std::uint64_t point_id)>;
PotentialSampler wos_sampler(const Scene& scene, const WosConfig& cfg);

} // namespace biewos
