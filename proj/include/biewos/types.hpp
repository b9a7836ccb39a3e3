#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <stdexcept>
#include <string>

namespace biewos {

using Real = double;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// Normals are plain Vec3 carrying a unit-length contract; constructors of the
// frame/scene types validate |n| = 1 within 1e-12.
using UnitVec3 = Vec3;

inline constexpr Real kPi = 3.14159265358979323846;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// point on or outside the solution domain
struct DomainError : Error { using Error::Error; };
// exit point could not be matched to a boundary feature
struct ClassificationError : Error { using Error::Error; };
// coincident kernel arguments
struct SingularityError : Error { using Error::Error; };
// argument off the surface it must lie on
struct GeometryError : Error { using Error::Error; };
// too many failed paths / unusable statistics
struct ReliabilityError : Error { using Error::Error; };
// estimator used outside its validity class
struct ApplicabilityError : Error { using Error::Error; };
// interpolation target outside grid coverage
struct ExtrapolationError : Error { using Error::Error; };
// evaluation point too close to a panel
struct NearFieldError : Error { using Error::Error; };
// config file problems (with line/field diagnostics in the message)
struct ConfigError : Error { using Error::Error; };
// linear solve failed or residual out of contract
struct SolverError : Error { using Error::Error; };

} // namespace biewos
