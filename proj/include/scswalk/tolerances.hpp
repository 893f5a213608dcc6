#pragma once

// Numerical tolerances shared by every module. Changing a value here changes
// it for validation, tests and the acceptance suite alike.

namespace scswalk::tol {

inline constexpr double kUnitary = 1e-10;       // max-entry |U^dagger U - 1|
inline constexpr double kHermitian = 1e-12;     // max-entry |H - H^dagger|
inline constexpr double kBlochNorm = 1e-10;
inline constexpr double kStateNorm = 1e-10;     // |sum |a|^2 - 1|
inline constexpr double kEigen = 1e-9;          // residual of H v = lambda v
inline constexpr double kDistributionSum = 1e-10;
inline constexpr double kNegativeClip = 1e-14;  // probabilities above -kNegativeClip are clipped to 0
inline constexpr double kDensityHermitian = 1e-10;
inline constexpr double kDensityTrace = 1e-10;
inline constexpr double kDensityMinEigen = -1e-8;
inline constexpr double kSingularBloch = 1e-9;  // sin(eps) below this is a degenerate point
inline constexpr double kWindingStep = 0.1;     // wrapped steps above pi - kWindingStep are ambiguous
inline constexpr double kCoherentRetained = 0.5;

}  // namespace scswalk::tol
