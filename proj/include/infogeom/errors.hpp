#pragma once
// Error taxonomy shared across the library. Every condition a caller can act
// on gets its own type; all derive from Error so coarse handling stays easy.

#include <stdexcept>
#include <string>

namespace infogeom {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// linear algebra / maps
struct DimensionMismatch : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };
struct FDStepInvalid : Error { using Error::Error; };

// entropy / Fisher
struct NonPositiveMicrostates : Error { using Error::Error; };
struct QuadratureNotConverged : Error { using Error::Error; };
struct SingularFisher : Error { using Error::Error; };

// fields / grids
struct NonPositiveField : Error { using Error::Error; };
struct NotNormalized : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };

// trajectories
struct StepInvalid : Error { using Error::Error; };
struct EmptyEnsemble : Error { using Error::Error; };

// geometrodynamics
struct OverflowError : Error { using Error::Error; };
struct DegenerateMetric : Error { using Error::Error; };

// cli / io
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct CheckFailed : Error { using Error::Error; };

}  // namespace infogeom
