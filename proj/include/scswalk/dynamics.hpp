#pragma once

// Pure-state and dephasing-channel evolution, phase-space distributions,
// spreading and coin-walker negativity.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scswalk/errors.hpp"
#include "scswalk/operators.hpp"
#include "scswalk/qmath.hpp"
#include "scswalk/tolerances.hpp"

namespace scswalk {

/// Probability over phase-basis sites phi_n = 2 pi n / d.
class PhaseDistribution {
 public:
  explicit PhaseDistribution(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw ValidationError("PhaseDistribution: empty");
    double sum = 0.0;
    for (auto& x : p_) {
      if (x < -tol::kNegativeClip)
        throw ValidationError("PhaseDistribution: negative probability " + std::to_string(x));
      if (x < 0.0) x = 0.0;
      sum += x;
    }
    if (std::abs(sum - 1.0) > tol::kDistributionSum)
      throw ToleranceError("PhaseDistribution: probabilities do not sum to 1",
                           std::abs(sum - 1.0), tol::kDistributionSum);
  }

  std::size_t d() const noexcept { return p_.size(); }
  double operator[](std::size_t n) const { return p_[n]; }
  std::span<const double> values() const noexcept { return p_; }

  static double site_angle(std::size_t n, std::size_t d) {
    return 2.0 * kPi * static_cast<double>(n) / static_cast<double>(d);
  }

  static PhaseDistribution uniform(std::size_t d) {
    return PhaseDistribution(std::vector<double>(d, 1.0 / static_cast<double>(d)));
  }

 private:
  std::vector<double> p_;
};

/// Hermitian, unit-trace 2d x 2d matrix in the walker-major layout. Cheap
/// invariants are checked on construction; positivity on request.
class DensityOperator {
 public:
  DensityOperator(std::size_t d, ComplexMatrix m) : d_(d), m_(std::move(m)) {
    if (d_ < 1) throw ValidationError("DensityOperator: d must be >= 1");
    if (m_.rows() != 2 * d_ || m_.cols() != 2 * d_)
      throw ValidationError("DensityOperator: expected a " + std::to_string(2 * d_) + "x" +
                            std::to_string(2 * d_) + " matrix");
    const double herm = hermiticity_defect(m_);
    if (herm > tol::kDensityHermitian)
      throw ToleranceError("DensityOperator: not Hermitian", herm, tol::kDensityHermitian);
    const double tr = std::abs(m_.trace() - 1.0);
    if (tr > tol::kDensityTrace)
      throw ToleranceError("DensityOperator: trace is not 1", tr, tol::kDensityTrace);
  }

  static DensityOperator pure(const StateVector& psi) { return {psi.d(), psi.projector()}; }

  std::size_t d() const noexcept { return d_; }
  const ComplexMatrix& matrix() const noexcept { return m_; }

  double min_eigenvalue() const { return hermitian_eig(m_, tol::kDensityHermitian).eigenvalues.front(); }

  void validate_positive() const {
    const double lo = min_eigenvalue();
    if (lo < tol::kDensityMinEigen)
      throw ToleranceError("DensityOperator: negative eigenvalue", -lo, -tol::kDensityMinEigen);
  }

 private:
  std::size_t d_;
  ComplexMatrix m_;
};

enum class LambdaSchedule {
  PerStep,     // constant lambda = 1 - exp(-tau / T_d) applied every step
  Cumulative,  // lambda_l = 1 - exp(-l tau / T_d) at step l
};

inline const char* to_string(LambdaSchedule s) {
  return s == LambdaSchedule::PerStep ? "per-step" : "cumulative";
}

/// Coin dephasing with time T_d measured in step times tau.
struct DephasingSpec {
  double t_dephase = std::numeric_limits<double>::infinity();
  LambdaSchedule schedule = LambdaSchedule::PerStep;

  void validate() const {
    if (!(t_dephase > 0.0))
      throw ValidationError("DephasingSpec: dephasing time must be > 0 (or inf)");
  }

  double per_step_lambda() const {
    if (std::isinf(t_dephase)) return 0.0;
    return -std::expm1(-1.0 / t_dephase);
  }

  /// Strength used at step l (1-based).
  double lambda_at(std::size_t step) const {
    if (std::isinf(t_dephase)) return 0.0;
    if (schedule == LambdaSchedule::PerStep) return per_step_lambda();
    return -std::expm1(-static_cast<double>(step) / t_dephase);
  }
};

/// psi_l = U^l psi_0 for l = 0..steps.
inline std::vector<StateVector> evolve_pure(const ComplexMatrix& u, const StateVector& psi0,
                                            std::size_t steps) {
  if (u.rows() != psi0.size() || u.cols() != psi0.size())
    throw ValidationError("evolve_pure: operator is " + std::to_string(u.rows()) + "x" +
                          std::to_string(u.cols()) + " but the state has " +
                          std::to_string(psi0.size()) + " amplitudes");
  std::vector<StateVector> out;
  out.reserve(steps + 1);
  out.push_back(psi0);
  for (std::size_t l = 0; l < steps; ++l) out.emplace_back(psi0.d(), u * out.back().amplitudes());
  return out;
}

/// P(phi_n) = sum_s |(<phi_n| <s|) psi|^2. States are stored in the phase-site
/// basis, so this is the coin-marginal of |psi|^2.
inline PhaseDistribution phase_distribution(const StateVector& psi) {
  std::vector<double> p(psi.d());
  for (std::size_t n = 0; n < psi.d(); ++n) p[n] = std::norm(psi(n, 0)) + std::norm(psi(n, 1));
  return PhaseDistribution(std::move(p));
}

inline PhaseDistribution phase_distribution(const DensityOperator& rho) {
  const auto& m = rho.matrix();
  std::vector<double> p(rho.d());
  for (std::size_t n = 0; n < rho.d(); ++n)
    p[n] = m(2 * n, 2 * n).real() + m(2 * n + 1, 2 * n + 1).real();
  return PhaseDistribution(std::move(p));
}

/// Linear (non-circular) standard deviation of phi_n in [0, 2 pi).
inline double distribution_std(const PhaseDistribution& p) {
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t n = 0; n < p.d(); ++n) {
    const double phi = PhaseDistribution::site_angle(n, p.d());
    mean += p[n] * phi;
    second += p[n] * phi * phi;
  }
  return std::sqrt(std::max(0.0, second - mean * mean));
}

/// (|| rho^{T_W} ||_1 - 1) / 2
inline double negativity(const DensityOperator& rho) {
  const double tn = trace_norm(partial_transpose_walker(rho.matrix(), rho.d()));
  return std::max(0.0, 0.5 * (tn - 1.0));
}

inline double negativity(const StateVector& psi) { return negativity(DensityOperator::pure(psi)); }

struct KrausPair {
  ComplexMatrix e0;
  ComplexMatrix e1;
};

/// Phase-damping Kraus operators on the coin.
inline KrausPair dephasing_kraus(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw ValidationError("dephasing_kraus: lambda must lie in [0, 1], got " + std::to_string(lambda));
  return {ComplexMatrix{{1.0, 0.0}, {0.0, std::sqrt(1.0 - lambda)}},
          ComplexMatrix{{0.0, 0.0}, {0.0, std::sqrt(lambda)}}};
}

/// sum_j (1 (x) E_j) rho (1 (x) E_j)^dagger, applied block by block.
inline ComplexMatrix apply_coin_kraus(const ComplexMatrix& rho, std::size_t d, const KrausPair& k) {
  ComplexMatrix out(2 * d, 2 * d);
  const ComplexMatrix* ops[2] = {&k.e0, &k.e1};
  for (std::size_t n = 0; n < d; ++n)
    for (std::size_t np = 0; np < d; ++np) {
      const ComplexMatrix block{{rho(2 * n, 2 * np), rho(2 * n, 2 * np + 1)},
                                {rho(2 * n + 1, 2 * np), rho(2 * n + 1, 2 * np + 1)}};
      ComplexMatrix acc(2, 2);
      for (const ComplexMatrix* e : ops) acc += (*e) * block * e->adjoint();
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) out(2 * n + a, 2 * np + b) = acc(a, b);
    }
  return out;
}

/// One channel step: conjugate by U, then dephase the coin with strength lambda.
inline ComplexMatrix channel_step(const ComplexMatrix& u, const ComplexMatrix& u_dag,
                                  const ComplexMatrix& rho, std::size_t d, double lambda) {
  ComplexMatrix next = apply_coin_kraus(u * rho * u_dag, d, dephasing_kraus(lambda));
  // Remove round-off asymmetry so Hermiticity does not drift over long runs.
  for (std::size_t r = 0; r < next.rows(); ++r) {
    next(r, r) = next(r, r).real();
    for (std::size_t c = r + 1; c < next.cols(); ++c) {
      const Complex avg = 0.5 * (next(r, c) + std::conj(next(c, r)));
      next(r, c) = avg;
      next(c, r) = std::conj(avg);
    }
  }
  return next;
}

/// Streams rho_0..rho_steps to `observe` without storing the trajectory.
inline void evolve_channel(const ComplexMatrix& u, const DensityOperator& rho0,
                           const DephasingSpec& spec, std::size_t steps,
                           const std::function<void(std::size_t, const DensityOperator&)>& observe) {
  spec.validate();
  const std::size_t d = rho0.d();
  if (u.rows() != 2 * d || u.cols() != 2 * d)
    throw ValidationError("evolve_channel: operator dimension does not match the density operator");
  const ComplexMatrix u_dag = u.adjoint();
  DensityOperator rho = rho0;
  observe(0, rho);
  for (std::size_t l = 1; l <= steps; ++l) {
    rho = DensityOperator(d, channel_step(u, u_dag, rho.matrix(), d, spec.lambda_at(l)));
    observe(l, rho);
  }
}

inline std::vector<DensityOperator> evolve_channel(const ComplexMatrix& u,
                                                   const DensityOperator& rho0,
                                                   const DephasingSpec& spec, std::size_t steps) {
  std::vector<DensityOperator> out;
  out.reserve(steps + 1);
  evolve_channel(u, rho0, spec, steps,
                 [&](std::size_t, const DensityOperator& rho) { out.push_back(rho); });
  return out;
}

}  // namespace scswalk
