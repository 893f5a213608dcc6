#pragma once

// Quasi-energy bands, Bloch vectors and winding numbers for the single-step
// DTQW unitary and the SCS unitary. Both are block diagonal in k~ = 2 pi k / d
// with 2x2 blocks exp(-i eps(k~) d(k~).sigma).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "scswalk/errors.hpp"
#include "scswalk/operators.hpp"
#include "scswalk/qmath.hpp"
#include "scswalk/tolerances.hpp"

namespace scswalk {

enum class WalkKind { Dtqw, Scs };

inline const char* to_string(WalkKind k) { return k == WalkKind::Dtqw ? "dtqw" : "scs"; }

/// eps = arccos(cos theta cos k~), in [0, pi].
inline double dtqw_dispersion(double theta, double ktilde) {
  const double c = std::clamp(std::cos(theta) * std::cos(ktilde), -1.0, 1.0);
  return std::acos(c);
}

inline BlochVector dtqw_bloch(double theta, double ktilde) {
  const double s = std::sin(dtqw_dispersion(theta, ktilde));
  if (s < tol::kSingularBloch)
    throw SingularPointError("dtqw_bloch: degenerate band point at k~ = " + std::to_string(ktilde));
  return {std::sin(theta) * std::cos(ktilde) / s, -std::sin(theta) * std::sin(ktilde) / s,
          -std::cos(theta) * std::sin(ktilde) / s};
}

/// eps = sqrt(k~^2 + theta^2) (positive branch).
inline double scs_dispersion(double theta, double ktilde) { return std::hypot(ktilde, theta); }

inline BlochVector scs_bloch(double theta, double ktilde) {
  const double e = scs_dispersion(theta, ktilde);
  if (e < tol::kSingularBloch)
    throw SingularPointError("scs_bloch: undefined axis at theta = k~ = 0");
  return {theta / e, 0.0, -ktilde / e};
}

/// exp(i k~ sigma_z) exp(-i theta sigma_x), formed by direct matrix product.
inline ComplexMatrix dtqw_block(double theta, double ktilde) {
  const ComplexMatrix shift{{std::polar(1.0, ktilde), 0.0}, {0.0, std::polar(1.0, -ktilde)}};
  return shift * build_coin(theta);
}

struct SpectralData {
  std::size_t d = 0;
  WalkKind kind = WalkKind::Dtqw;
  double theta = 0.0;   // coin angle (DTQW) or u2 (SCS)
  double k_scale = 0.0; // k~ = k_scale * k; 2 pi / d for the DTQW, u1 for the SCS
  std::vector<double> ktilde;
  std::vector<double> epsilon;           // positive branch; the second band is -epsilon
  std::vector<BlochVector> bloch;        // positive-branch axis; (0,0,0) at singular points
  std::vector<std::size_t> singular_k;   // grid points where the axis is undefined
};

/// Band data on k = 0..d-1. For the DTQW, k~ = 2 pi k / d and theta is the
/// coin angle. For the SCS, k~ = u1 k and theta = u2.
inline SpectralData compute_spectrum(WalkKind kind, std::size_t d, double theta, double k_scale) {
  require_sites(d, "compute_spectrum");
  SpectralData out;
  out.d = d;
  out.kind = kind;
  out.theta = theta;
  out.k_scale = k_scale;
  for (std::size_t k = 0; k < d; ++k) {
    const double kt = k_scale * static_cast<double>(k);
    out.ktilde.push_back(kt);
    out.epsilon.push_back(kind == WalkKind::Dtqw ? dtqw_dispersion(theta, kt)
                                                 : scs_dispersion(theta, kt));
    try {
      out.bloch.push_back(kind == WalkKind::Dtqw ? dtqw_bloch(theta, kt) : scs_bloch(theta, kt));
    } catch (const SingularPointError&) {
      out.bloch.push_back({0.0, 0.0, 0.0});
      out.singular_k.push_back(k);
    }
  }
  return out;
}

inline SpectralData dtqw_spectrum(std::size_t d, double theta) {
  return compute_spectrum(WalkKind::Dtqw, d, theta, 2.0 * kPi / static_cast<double>(d));
}

inline SpectralData scs_spectrum(std::size_t d, const ScsParams& p) {
  return compute_spectrum(WalkKind::Scs, d, p.u2, p.u1);
}

namespace detail {

inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a;
}

}  // namespace detail

/// Number of times the Bloch vector circles the origin in its great-circle
/// plane as k runs once around the grid (closing back onto k = 0).
///
/// The in-plane frame is e1 = x^, e2 = n^ x e1 with plane normal
/// n^ = (0, cos theta, -sin theta) for the DTQW and n^ = y^ for the SCS.
/// Signs follow the positive branch, fixed at the first point by dx >= 0 and
/// carried along by choosing, at each point, the sign nearest the previous
/// angle.
inline int winding_number(const SpectralData& data) {
  if (!data.singular_k.empty())
    throw SingularPointError("winding_number: spectrum has " +
                             std::to_string(data.singular_k.size()) + " singular grid point(s)");
  if (data.bloch.empty()) return 0;

  BlochVector normal = data.kind == WalkKind::Dtqw
                           ? BlochVector{0.0, std::cos(data.theta), -std::sin(data.theta)}
                           : BlochVector{0.0, 1.0, 0.0};
  // e2 = normal x e1 with e1 = (1, 0, 0)
  const BlochVector e2{0.0, normal.dz, -normal.dy};
  auto angle_of = [&](const BlochVector& v) { return std::atan2(v.dot(e2), v.dx); };

  const double limit = kPi - tol::kWindingStep;
  BlochVector first = data.bloch.front();
  if (first.dx < 0.0) first = -first;
  double prev = angle_of(first);
  double total = 0.0;
  for (std::size_t k = 1; k <= data.bloch.size(); ++k) {
    double step = 0.0;
    if (k == data.bloch.size()) {
      step = detail::wrap_angle(angle_of(first) - prev);
    } else {
      const double a = angle_of(data.bloch[k]);
      const double plus = detail::wrap_angle(a - prev);
      const double minus = detail::wrap_angle(a + kPi - prev);
      step = std::abs(plus) <= std::abs(minus) ? plus : minus;
    }
    if (std::abs(step) > limit)
      throw AmbiguousWindingError("winding_number: grid too coarse, step of " +
                                  std::to_string(step) + " rad at k = " + std::to_string(k));
    total += step;
    prev += step;
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

}  // namespace scswalk
