#pragma once

// Coin, shift, DTQW and SCS operators on the cycle of d sites, plus initial
// states of the phase-space realization.
//
// Conventions:
//   * Composite index is walker-major: flat = 2 n + s.
//   * States and operators live in the walker *position* basis |n>, which in
//     the phase-space realization is the phase basis |phi_n>, phi_n = 2 pi n / d.
//   * The number (Fock) basis |m> coincides with the Fourier basis
//     |k~ = 2 pi m / d>; <n|m> = e^{-2 pi i n m / d} / sqrt(d).

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "scswalk/errors.hpp"
#include "scswalk/qmath.hpp"
#include "scswalk/tolerances.hpp"

namespace scswalk {

struct WalkConfig {
  std::size_t d = 31;
  double theta = kPi / 4;

  /// Range check used by experiment front ends: d >= 1, theta in [0, pi/2].
  void validate() const {
    if (d < 1) throw ValidationError("WalkConfig: d must be >= 1");
    if (!(theta >= 0.0 && theta <= kPi / 2))
      throw ValidationError("WalkConfig: theta must lie in [0, pi/2], got " + std::to_string(theta));
  }
};

/// SCS angles: u1 = g tau multiplies the photon number, u2 = omega tau is the
/// coin rotation.
struct ScsParams {
  double u1 = 0.0;
  double u2 = 0.0;

  friend bool operator==(const ScsParams&, const ScsParams&) = default;
};

/// Unit-norm amplitudes on walker (x) coin, position basis, walker-major.
class StateVector {
 public:
  StateVector(std::size_t d, ComplexVector amplitudes) : d_(d), amps_(std::move(amplitudes)) {
    if (d_ < 1) throw ValidationError("StateVector: d must be >= 1");
    if (amps_.size() != 2 * d_)
      throw ValidationError("StateVector: expected " + std::to_string(2 * d_) +
                            " amplitudes, got " + std::to_string(amps_.size()));
    const double n = norm2(amps_);
    if (std::abs(n * n - 1.0) > tol::kStateNorm)
      throw ToleranceError("StateVector: amplitudes are not unit norm", std::abs(n * n - 1.0),
                           tol::kStateNorm);
  }

  std::size_t d() const noexcept { return d_; }
  std::size_t size() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  const Complex& operator()(std::size_t n, std::size_t s) const { return amps_[2 * n + s]; }

  StateVector with_global_phase(double phase) const {
    ComplexVector a = amps_;
    const Complex f = std::polar(1.0, phase);
    for (auto& x : a) x *= f;
    return {d_, std::move(a)};
  }

  /// |psi><psi|
  ComplexMatrix projector() const {
    ComplexMatrix rho(size(), size());
    for (std::size_t r = 0; r < size(); ++r)
      for (std::size_t c = 0; c < size(); ++c) rho(r, c) = amps_[r] * std::conj(amps_[c]);
    return rho;
  }

 private:
  std::size_t d_;
  ComplexVector amps_;
};

inline void require_sites(std::size_t d, const char* who) {
  if (d < 1) throw ValidationError(std::string(who) + ": d must be >= 1");
}

/// C(theta) = exp(-i theta sigma_x)
inline ComplexMatrix build_coin(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {{c, Complex(0.0, -s)}, {Complex(0.0, -s), c}};
}

/// |n> (x) |0> -> |n+1> (x) |0>,  |n> (x) |1> -> |n-1> (x) |1>, periodic.
inline ComplexMatrix build_shift(std::size_t d) {
  require_sites(d, "build_shift");
  ComplexMatrix s(2 * d, 2 * d);
  for (std::size_t n = 0; n < d; ++n) {
    s(2 * ((n + 1) % d), 2 * n) = 1.0;
    s(2 * ((n + d - 1) % d) + 1, 2 * n + 1) = 1.0;
  }
  return s;
}

/// U = S (1 (x) C(theta))
inline ComplexMatrix build_dtqw(const WalkConfig& cfg) {
  return build_shift(cfg.d) * kron(ComplexMatrix::identity(cfg.d), build_coin(cfg.theta));
}

/// Phase basis |phi_n> = sum_m e^{i phi_n m} |m> / sqrt(d) as a d x d matrix
/// with entries e^{2 pi i n m / d} / sqrt(d). Column n holds |phi_n> in the
/// number basis.
inline ComplexMatrix phase_distribution_basis(std::size_t d) {
  require_sites(d, "phase_distribution_basis");
  ComplexMatrix f(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t n = 0; n < d; ++n)
    for (std::size_t m = 0; m < d; ++m)
      f(n, m) = std::polar(norm, 2.0 * kPi * static_cast<double>((n * m) % d) / d);
  return f;
}

/// Maps a walker-major vector of number-basis amplitudes to the position basis.
inline ComplexVector number_to_position(std::size_t d, std::span<const Complex> number_amps) {
  if (number_amps.size() != 2 * d)
    throw ValidationError("number_to_position: expected " + std::to_string(2 * d) + " amplitudes");
  // <n|m> is the complex conjugate of phase_distribution_basis(d)(n, m).
  const ComplexMatrix f = phase_distribution_basis(d);
  ComplexVector out(2 * d);
  for (std::size_t n = 0; n < d; ++n)
    for (std::size_t m = 0; m < d; ++m) {
      const Complex w = std::conj(f(n, m));
      out[2 * n] += w * number_amps[2 * m];
      out[2 * n + 1] += w * number_amps[2 * m + 1];
    }
  return out;
}

/// Expresses sum_m |m><m| (x) B_m in the position basis. The result is
/// block-circulant: the (n', n) block depends only on n' - n mod d.
inline ComplexMatrix number_blocks_to_position(std::span<const ComplexMatrix> blocks) {
  const std::size_t d = blocks.size();
  require_sites(d, "number_blocks_to_position");
  std::vector<ComplexMatrix> band(d, ComplexMatrix(2, 2));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t m = 0; m < d; ++m) {
      const Complex w = std::polar(1.0 / d, -2.0 * kPi * static_cast<double>((j * m) % d) / d);
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) band[j](a, b) += w * blocks[m](a, b);
    }
  }
  ComplexMatrix u(2 * d, 2 * d);
  for (std::size_t np = 0; np < d; ++np)
    for (std::size_t n = 0; n < d; ++n) {
      const ComplexMatrix& b = band[(np + d - n) % d];
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t c = 0; c < 2; ++c) u(2 * np + a, 2 * n + c) = b(a, c);
    }
  return u;
}

/// exp(i u1 m sigma_z - i u2 sigma_x), evaluated as a single Pauli rotation.
inline ComplexMatrix scs_block(const ScsParams& p, std::size_t m) {
  const double kz = p.u1 * static_cast<double>(m);
  const double eps = std::hypot(kz, p.u2);
  if (eps == 0.0) return ComplexMatrix::identity(2);
  return pauli_rotation(eps, BlochVector{p.u2 / eps, 0.0, -kz / eps});
}

inline std::vector<ComplexMatrix> scs_blocks(std::size_t d, const ScsParams& p) {
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(d);
  for (std::size_t m = 0; m < d; ++m) blocks.push_back(scs_block(p, m));
  return blocks;
}

/// U_SCS = exp(i u1 a^dagger a sigma_z - i u2 sigma_x) on the truncated space,
/// in the position basis.
inline ComplexMatrix build_scs(std::size_t d, const ScsParams& p) {
  require_sites(d, "build_scs");
  const auto blocks = scs_blocks(d, p);
  return number_blocks_to_position(blocks);
}

inline void require_coin_index(std::size_t s) {
  if (s > 1) throw ValidationError("coin index must be 0 or 1");
}

/// Walker number state |m> (x) |s>.
inline StateVector number_state(std::size_t m, std::size_t d, std::size_t coin_s = 0) {
  require_sites(d, "number_state");
  require_coin_index(coin_s);
  if (m >= d) throw ValidationError("number_state: m must be < d");
  ComplexVector amps(2 * d);
  amps[2 * m + coin_s] = 1.0;
  return {d, number_to_position(d, amps)};
}

/// Phase eigenstate |phi_n> (x) |s>, i.e. a walker localized on site n.
inline StateVector phase_state(std::size_t n, std::size_t d, std::size_t coin_s = 0) {
  require_sites(d, "phase_state");
  require_coin_index(coin_s);
  if (n >= d) throw ValidationError("phase_state: n must be < d");
  ComplexVector amps(2 * d);
  amps[2 * n + coin_s] = 1.0;
  return {d, std::move(amps)};
}

struct CoherentState {
  StateVector state;
  /// Weight of the untruncated coherent state kept in the first d levels.
  double retained_weight = 1.0;
  /// Set when retained_weight < tol::kCoherentRetained.
  bool heavily_truncated = false;
};

/// Truncated, renormalized coherent state |alpha> (x) |coin_s>.
inline CoherentState coherent_state(Complex alpha, std::size_t d, std::size_t coin_s = 0) {
  require_sites(d, "coherent_state");
  require_coin_index(coin_s);
  const double mag = std::abs(alpha);
  const double phase = std::arg(alpha);
  ComplexVector amps(2 * d);
  double retained = 0.0;
  if (mag == 0.0) {
    amps[coin_s] = 1.0;
    retained = 1.0;
  } else {
    // log |c_m| with c_m = e^{-|alpha|^2/2} alpha^m / sqrt(m!)
    for (std::size_t m = 0; m < d; ++m) {
      const double md = static_cast<double>(m);
      const double log_mag = -0.5 * mag * mag + md * std::log(mag) - 0.5 * std::lgamma(md + 1.0);
      const Complex c = std::polar(std::exp(log_mag), md * phase);
      amps[2 * m + coin_s] = c;
      retained += std::norm(c);
    }
    const double scale = 1.0 / norm2(amps);
    for (auto& a : amps) a *= scale;
  }
  auto pos = number_to_position(d, amps);
  const double n = norm2(pos);
  for (auto& a : pos) a /= n;
  return {StateVector(d, std::move(pos)), retained, retained < tol::kCoherentRetained};
}

/// Max-entry distance between the n-slice Trotter product
/// [exp(-i H_S / n) exp(-i 1 (x) H_C / n)]^n and exp(-i H_S - i 1 (x) H_C),
/// with H_S = -sum_k |k~><k~| (x) k~ sigma_z and H_C = theta sigma_x.
inline double trotter_defect(const WalkConfig& cfg, std::size_t n) {
  require_sites(cfg.d, "trotter_defect");
  if (n < 1) throw ValidationError("trotter_defect: n must be >= 1");
  const std::size_t d = cfg.d;
  std::vector<ComplexMatrix> gen(d);
  for (std::size_t m = 0; m < d; ++m)
    gen[m] = pauli::z() * Complex(-2.0 * kPi * static_cast<double>(m) / d);
  const ComplexMatrix h_shift = number_blocks_to_position(gen);
  const ComplexMatrix h_coin = kron(ComplexMatrix::identity(d), pauli::x() * Complex(cfg.theta));

  const double slice = 1.0 / static_cast<double>(n);
  const ComplexMatrix step = unitary_exp(h_shift, slice) * unitary_exp(h_coin, slice);
  ComplexMatrix product = ComplexMatrix::identity(2 * d);
  for (std::size_t i = 0; i < n; ++i) product = product * step;
  return max_abs_diff(product, unitary_exp(h_shift + h_coin));
}

}  // namespace scswalk
