#pragma once

#include <vector>

#include "biewos/greens.hpp"
#include "biewos/wos.hpp"

namespace biewos {

struct LastPassageResult {
    Real sigma_lp = 0;
    Real std_error = 0;
    std::int64_t n_paths = 0;
    std::int64_t n_infinity = 0;
    std::int64_t n_failed = 0;
    std::vector<std::int64_t> feature_counts; // per scene feature
};

// Launch point on the cap with surface density proportional to cos(theta):
// theta = arcsin(sqrt(U)), azimuth uniform.
Vec3 sample_start_point(const HemisphereFrame& frame, RngStream& rng);

// Last-passage estimate of the charge density at frame.center. Strict mode
// accepts only piecewise-constant {0,1} data with the base feature at 1
// (3/2a weighting of paths not returning to the unit-potential feature);
// allow_general_data enables the phi(x) - phi(exit) weighting, which reduces
// to the counting formula on that class.
LastPassageResult estimate_lp(const Scene& scene, const HemisphereFrame& frame,
                              std::int64_t n_paths, const WosConfig& cfg,
                              bool allow_general_data = false);

// Walker injection for tests.
using WalkFn = std::function<ExitRecord(const Vec3& start, RngStream& rng)>;
LastPassageResult estimate_lp(const Scene& scene, const HemisphereFrame& frame,
                              std::int64_t n_paths, const WosConfig& cfg, const WalkFn& walker,
                              bool allow_general_data = false);

} // namespace biewos
