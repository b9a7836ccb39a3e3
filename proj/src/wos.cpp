#include "biewos/wos.hpp"

#include <cmath>

#include "biewos/parallel.hpp"

namespace biewos {

namespace {

constexpr std::int64_t kChunk = 4096;

// Welford accumulator; chunks merge in fixed order regardless of scheduling.
struct ChunkStat {
    std::int64_t n = 0, n_inf = 0, n_failed = 0;
    Real mean = 0, m2 = 0;

    void push(Real v) {
        ++n;
        const Real d = v - mean;
        mean += d / static_cast<Real>(n);
        m2 += d * (v - mean);
    }
    void merge(const ChunkStat& o) {
        n_inf += o.n_inf;
        n_failed += o.n_failed;
        if (o.n == 0) return;
        if (n == 0) {
            n = o.n;
            mean = o.mean;
            m2 = o.m2;
            return;
        }
        const Real d = o.mean - mean;
        const std::int64_t nt = n + o.n;
        mean += d * static_cast<Real>(o.n) / static_cast<Real>(nt);
        m2 += o.m2 + d * d * static_cast<Real>(n) * static_cast<Real>(o.n) / static_cast<Real>(nt);
        n = nt;
    }
};

Estimate finalize(const ChunkStat& s, const WosConfig& cfg, std::int64_t n_paths) {
    if (static_cast<Real>(s.n_failed) > 0.001 * static_cast<Real>(n_paths))
        throw ReliabilityError("more than 0.1% of walks exceeded max_steps");
    Estimate e;
    e.mean = s.mean;
    e.variance = s.n > 1 ? s.m2 / static_cast<Real>(s.n - 1) : 0.0;
    e.n = s.n;
    e.n_infinity = s.n_inf;
    e.n_failed = s.n_failed;
    (void)cfg;
    return e;
}

} // namespace

Real Estimate::std_error() const {
    return n > 0 ? std::sqrt(variance / static_cast<Real>(n)) : 0.0;
}

ExitRecord walk(const Scene& scene, const Vec3& start, const WosConfig& cfg, RngStream& rng) {
    Vec3 p = start;
    int steps = 0;
    for (;;) {
        if (p.norm() > cfg.trunc_radius) return {p, kExitInfinity, steps};
        const DistanceQuery d = nearest_feature(scene, p);
        if (d.distance <= cfg.eps_shell) {
            ExitRecord r = classify_exit(scene, p, cfg.eps_shell, cfg.trunc_radius);
            r.steps = steps;
            return r;
        }
        if (steps >= cfg.max_steps) return {p, kExitFailed, steps};
        const Real z = 2.0 * rng.next_double() - 1.0;
        const Real az = 2.0 * kPi * rng.next_double();
        const Real r = std::sqrt(std::max(Real(0), 1.0 - z * z));
        p += d.distance * Vec3(r * std::cos(az), r * std::sin(az), z);
        ++steps;
    }
}

ExitRecord walk(const Scene& scene, const Vec3& start, const WosConfig& cfg,
                std::uint64_t point_id, std::uint64_t path_id) {
    RngStream rng(cfg.seed, point_id, path_id);
    return walk(scene, start, cfg, rng);
}

Real exit_value(const Scene& scene, const ExitRecord& rec) {
    if (rec.feature == kExitInfinity) return 0.0;
    if (rec.feature == kExitFailed)
        throw ReliabilityError("no boundary value for a failed path");
    if (scene.piecewise_const) return scene.feature_potential[rec.feature];
    return scene.dirichlet(rec.point);
}

std::vector<Estimate> estimate_u_batch(const Scene& scene, const std::vector<Vec3>& points,
                                       const WosConfig& cfg, std::uint64_t point_id_base) {
    const std::int64_t npts = static_cast<std::int64_t>(points.size());
    if (npts == 0) return {};
    const std::int64_t chunks_per_point = (cfg.n_paths + kChunk - 1) / kChunk;
    const std::int64_t n_tasks = npts * chunks_per_point;
    std::vector<ChunkStat> stats(static_cast<size_t>(n_tasks));

    parallel_for(n_tasks, cfg.workers, [&](std::int64_t task) {
        const std::int64_t pt = task / chunks_per_point;
        const std::int64_t chunk = task % chunks_per_point;
        const std::int64_t lo = chunk * kChunk;
        const std::int64_t hi = std::min(cfg.n_paths, lo + kChunk);
        ChunkStat s;
        for (std::int64_t k = lo; k < hi; ++k) {
            const ExitRecord rec =
                walk(scene, points[static_cast<size_t>(pt)], cfg,
                     point_id_base + static_cast<std::uint64_t>(pt), static_cast<std::uint64_t>(k));
            if (rec.feature == kExitFailed) {
                ++s.n_failed;
                continue;
            }
            if (rec.feature == kExitInfinity) ++s.n_inf;
            s.push(exit_value(scene, rec));
        }
        stats[static_cast<size_t>(task)] = s;
    });

    std::vector<Estimate> out;
    out.reserve(static_cast<size_t>(npts));
    for (std::int64_t pt = 0; pt < npts; ++pt) {
        ChunkStat total;
        for (std::int64_t c = 0; c < chunks_per_point; ++c)
            total.merge(stats[static_cast<size_t>(pt * chunks_per_point + c)]);
        out.push_back(finalize(total, cfg, cfg.n_paths));
    }
    return out;
}

Estimate estimate_u(const Scene& scene, const Vec3& p, const WosConfig& cfg,
                    std::uint64_t point_id) {
    return estimate_u_batch(scene, {p}, cfg, point_id).front();
}

PotentialSampler wos_sampler(const Scene& scene, const WosConfig& cfg) {
    return [&scene, cfg](const Vec3& y, std::uint64_t point_id) {
        return estimate_u(scene, y, cfg, point_id);
    };
}

} // namespace biewos
