#include "biewos/last_passage.hpp"

#include <cmath>

#include "biewos/parallel.hpp"

namespace biewos {

namespace {

constexpr std::int64_t kChunk = 4096;
constexpr std::uint64_t kLpDomain = 1; // stream domain tag, keeps LP draws
                                       // disjoint from estimate_u streams

struct LpChunk {
    std::int64_t n = 0, n_inf = 0, n_failed = 0;
    Real mean = 0, m2 = 0;
    std::vector<std::int64_t> counts;

    void push(Real v) {
        ++n;
        const Real d = v - mean;
        mean += d / static_cast<Real>(n);
        m2 += d * (v - mean);
    }
    void merge(const LpChunk& o) {
        n_inf += o.n_inf;
        n_failed += o.n_failed;
        for (size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
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

} // namespace

Vec3 sample_start_point(const HemisphereFrame& frame, RngStream& rng) {
    const Real theta = std::asin(std::sqrt(rng.next_double()));
    const Real phi = 2.0 * kPi * rng.next_double();
    return frame.cap_point(theta, phi);
}

LastPassageResult estimate_lp(const Scene& scene, const HemisphereFrame& frame,
                              std::int64_t n_paths, const WosConfig& cfg, const WalkFn& walker,
                              bool allow_general_data) {
    if (!allow_general_data) {
        if (!scene.piecewise_const)
            throw ApplicabilityError("last-passage requires piecewise-constant Dirichlet data");
        for (Real v : scene.feature_potential)
            if (std::abs(v) > 1e-12 && std::abs(v - 1.0) > 1e-12)
                throw ApplicabilityError("last-passage requires a {0,1} potential level set");
        if (std::abs(eval_dirichlet(scene, frame.center) - 1.0) > 1e-12)
            throw ApplicabilityError("hemisphere base must sit on the unit-potential feature");
    }
    const Real phix = eval_dirichlet(scene, frame.center);
    const int nfeat = scene.feature_count();

    const std::int64_t n_chunks = (n_paths + kChunk - 1) / kChunk;
    std::vector<LpChunk> stats(static_cast<size_t>(n_chunks));

    parallel_for(n_chunks, cfg.workers, [&](std::int64_t chunk) {
        LpChunk s;
        s.counts.assign(static_cast<size_t>(nfeat), 0);
        const std::int64_t lo = chunk * kChunk;
        const std::int64_t hi = std::min(n_paths, lo + kChunk);
        for (std::int64_t k = lo; k < hi; ++k) {
            RngStream rng(cfg.seed, 0, static_cast<std::uint64_t>(k), kLpDomain);
            const Vec3 start = sample_start_point(frame, rng);
            const ExitRecord rec = walker(start, rng);
            if (rec.feature == kExitFailed) {
                ++s.n_failed;
                continue;
            }
            if (rec.feature == kExitInfinity) {
                ++s.n_inf;
                s.push(phix);
                continue;
            }
            ++s.counts[static_cast<size_t>(rec.feature)];
            s.push(phix - exit_value(scene, rec));
        }
        stats[static_cast<size_t>(chunk)] = s;
    });

    LpChunk total;
    total.counts.assign(static_cast<size_t>(nfeat), 0);
    for (const LpChunk& s : stats) total.merge(s);

    if (static_cast<Real>(total.n_failed) > 0.001 * static_cast<Real>(n_paths))
        throw ReliabilityError("more than 0.1% of last-passage walks exceeded max_steps");

    const Real pref = 3.0 / (2.0 * frame.radius);
    LastPassageResult r;
    r.sigma_lp = pref * total.mean;
    const Real var = total.n > 1 ? total.m2 / static_cast<Real>(total.n - 1) : 0.0;
    r.std_error = pref * std::sqrt(var / static_cast<Real>(std::max<std::int64_t>(total.n, 1)));
    r.n_paths = total.n;
    r.n_infinity = total.n_inf;
    r.n_failed = total.n_failed;
    r.feature_counts = total.counts;
    return r;
}

LastPassageResult estimate_lp(const Scene& scene, const HemisphereFrame& frame,
                              std::int64_t n_paths, const WosConfig& cfg,
                              bool allow_general_data) {
    return estimate_lp(
        scene, frame, n_paths, cfg,
        [&](const Vec3& start, RngStream& rng) { return walk(scene, start, cfg, rng); },
        allow_general_data);
}

} // namespace biewos
