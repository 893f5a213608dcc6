#pragma once

// Fitting the SCS angles (u1, u2) so that the SCS walk reproduces the phase
// distributions of a DTQW with coin angle theta. The objective is the mean
// Hellinger distance over steps 1..l0; the search is a multistart
// Nelder-Mead simplex inside a box.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "scswalk/dynamics.hpp"
#include "scswalk/errors.hpp"
#include "scswalk/operators.hpp"

namespace scswalk {

/// (1/sqrt 2) || sqrt p - sqrt q ||_2
inline double hellinger(const PhaseDistribution& p, const PhaseDistribution& q) {
  if (p.d() != q.d())
    throw ValidationError("hellinger: distributions have different lengths (" +
                          std::to_string(p.d()) + " vs " + std::to_string(q.d()) + ")");
  double s = 0.0;
  for (std::size_t n = 0; n < p.d(); ++n) {
    const double diff = std::sqrt(p[n]) - std::sqrt(q[n]);
    s += diff * diff;
  }
  return std::min(1.0, std::sqrt(0.5 * s));
}

/// Phase distributions P_0..P_steps of U^l psi0.
inline std::vector<PhaseDistribution> distribution_trajectory(const ComplexMatrix& u,
                                                              const StateVector& psi0,
                                                              std::size_t steps) {
  std::vector<PhaseDistribution> out;
  out.reserve(steps + 1);
  for (const auto& psi : evolve_pure(u, psi0, steps)) out.push_back(phase_distribution(psi));
  return out;
}

/// Hellinger distance between the DTQW(theta) and SCS(u) distributions at
/// every step l = 0..steps, both started from psi0.
inline std::vector<double> hellinger_series(double target_theta, const ScsParams& u,
                                            const StateVector& psi0, std::size_t steps) {
  const std::size_t d = psi0.d();
  const auto walk = distribution_trajectory(build_dtqw({d, target_theta}), psi0, steps);
  const auto scs = distribution_trajectory(build_scs(d, u), psi0, steps);
  std::vector<double> out(steps + 1);
  for (std::size_t l = 0; l <= steps; ++l) out[l] = hellinger(walk[l], scs[l]);
  return out;
}

/// Mean Hellinger distance over steps 1..l0 with the DTQW side computed once.
class HellingerObjective {
 public:
  HellingerObjective(double target_theta, std::size_t l0, StateVector psi0)
      : theta_(target_theta), l0_(l0), psi0_(std::move(psi0)) {
    if (l0_ < 1) throw ValidationError("objective: l0 must be >= 1");
    target_ = distribution_trajectory(build_dtqw({psi0_.d(), theta_}), psi0_, l0_);
  }

  double operator()(const ScsParams& u) const {
    const ComplexMatrix scs = build_scs(psi0_.d(), u);
    ComplexVector psi(psi0_.amplitudes().begin(), psi0_.amplitudes().end());
    std::vector<double> p(psi0_.d());
    double total = 0.0;
    for (std::size_t l = 1; l <= l0_; ++l) {
      psi = scs * psi;
      for (std::size_t n = 0; n < p.size(); ++n)
        p[n] = std::norm(psi[2 * n]) + std::norm(psi[2 * n + 1]);
      total += hellinger(target_[l], PhaseDistribution(p));
    }
    return total / static_cast<double>(l0_);
  }

  double target_theta() const noexcept { return theta_; }
  std::size_t l0() const noexcept { return l0_; }
  const StateVector& initial_state() const noexcept { return psi0_; }

 private:
  double theta_;
  std::size_t l0_;
  StateVector psi0_;
  std::vector<PhaseDistribution> target_;
};

inline double objective(const ScsParams& u, double target_theta, std::size_t l0,
                        const StateVector& psi0) {
  return HellingerObjective(target_theta, l0, psi0)(u);
}

struct SearchBox {
  double u1_lo = 0.0;
  double u1_hi = 1.0;
  double u2_lo = 0.0;
  double u2_hi = 1.0;

  ScsParams clamp(ScsParams p) const {
    p.u1 = std::clamp(p.u1, u1_lo, u1_hi);
    p.u2 = std::clamp(p.u2, u2_lo, u2_hi);
    return p;
  }
};

struct OptimizerConfig {
  SearchBox box;
  std::size_t multistarts = 16;
  double simplex_tolerance = 1e-6;       // stop once the simplex diameter (rad) is below this
  std::size_t max_evaluations = 2000;    // per start
  std::uint64_t seed = 20240601;
  bool parallel = true;

  /// u1 in [0, 4 pi / d], u2 in [0, 6 pi].
  static OptimizerConfig defaults(std::size_t d) {
    OptimizerConfig c;
    c.box = {0.0, 4.0 * kPi / static_cast<double>(d), 0.0, 6.0 * kPi};
    return c;
  }

  void validate() const {
    if (!(box.u1_lo <= box.u1_hi) || !(box.u2_lo <= box.u2_hi))
      throw ValidationError("OptimizerConfig: empty search box");
    if (!std::isfinite(box.u1_lo) || !std::isfinite(box.u1_hi) || !std::isfinite(box.u2_lo) ||
        !std::isfinite(box.u2_hi))
      throw ValidationError("OptimizerConfig: search box must be finite");
    if (!(simplex_tolerance > 0.0)) throw ValidationError("OptimizerConfig: tolerance must be > 0");
    if (multistarts < 1) throw ValidationError("OptimizerConfig: need at least one start");
    if (max_evaluations < 3) throw ValidationError("OptimizerConfig: max_evaluations must be >= 3");
  }
};

struct TracePoint {
  double u1;
  double u2;
  double objective;
};

struct NelderMeadResult {
  ScsParams best;
  double value = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;  // best vertex after each iteration
};

/// Bounded Nelder-Mead in (u1, u2). Trial points are clamped into the box.
/// Coefficients: reflection 1, expansion 2, contraction 1/2, shrink 1/2.
inline NelderMeadResult nelder_mead(const std::function<double(const ScsParams&)>& f,
                                    ScsParams start, const SearchBox& box, double tolerance,
                                    std::size_t max_evaluations) {
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  struct Vertex {
    ScsParams x;
    double f;
  };
  NelderMeadResult res;
  auto eval = [&](ScsParams x) {
    x = box.clamp(x);
    ++res.evaluations;
    return Vertex{x, f(x)};
  };
  auto lerp = [](const ScsParams& a, const ScsParams& b, double t) {
    return ScsParams{a.u1 + t * (b.u1 - a.u1), a.u2 + t * (b.u2 - a.u2)};
  };
  // Initial edge: 10% of the box width, pointed into the box.
  auto edge = [](double x, double lo, double hi) {
    const double h = 0.1 * (hi - lo);
    const double step = h > 0.0 ? h : 1e-3;
    return x + step <= hi || hi == lo ? step : -step;
  };

  start = box.clamp(start);
  std::array<Vertex, 3> s{eval(start),
                          eval({start.u1 + edge(start.u1, box.u1_lo, box.u1_hi), start.u2}),
                          eval({start.u1, start.u2 + edge(start.u2, box.u2_lo, box.u2_hi)})};

  auto order = [&] {
    std::stable_sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  auto diameter = [&] {
    double m = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j)
        m = std::max(m, std::hypot(s[i].x.u1 - s[j].x.u1, s[i].x.u2 - s[j].x.u2));
    return m;
  };

  order();
  res.trace.push_back({s[0].x.u1, s[0].x.u2, s[0].f});
  while (true) {
    if (diameter() < tolerance) {
      res.converged = true;
      break;
    }
    if (res.evaluations + 2 > max_evaluations) break;

    const ScsParams centroid{0.5 * (s[0].x.u1 + s[1].x.u1), 0.5 * (s[0].x.u2 + s[1].x.u2)};
    const Vertex r = eval(lerp(centroid, s[2].x, -kReflect));
    if (r.f < s[0].f) {
      const Vertex e = eval(lerp(centroid, r.x, kExpand));
      s[2] = e.f < r.f ? e : r;
    } else if (r.f < s[1].f) {
      s[2] = r;
    } else {
      bool shrink = false;
      if (r.f < s[2].f) {
        const Vertex c = eval(lerp(centroid, r.x, kContract));
        if (c.f <= r.f) s[2] = c; else shrink = true;
      } else {
        const Vertex c = eval(lerp(centroid, s[2].x, kContract));
        if (c.f < s[2].f) s[2] = c; else shrink = true;
      }
      if (shrink) {
        for (std::size_t i = 1; i < 3; ++i) s[i] = eval(lerp(s[0].x, s[i].x, kShrink));
      }
    }
    order();
    res.trace.push_back({s[0].x.u1, s[0].x.u2, s[0].f});
  }
  res.best = s[0].x;
  res.value = s[0].f;
  return res;
}

/// Scrambled Latin-hypercube start points in the box. Uses raw 64-bit draws so
/// the sequence is identical on every standard library.
inline std::vector<ScsParams> scrambled_starts(const SearchBox& box, std::size_t count,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto permutation = [&] {
    std::vector<std::size_t> p(count);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = count; i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng() % i);
      std::swap(p[i - 1], p[j]);
    }
    return p;
  };
  const auto p1 = permutation();
  const auto p2 = permutation();
  std::vector<ScsParams> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double a = (static_cast<double>(p1[i]) + uniform()) / static_cast<double>(count);
    const double b = (static_cast<double>(p2[i]) + uniform()) / static_cast<double>(count);
    out[i] = {box.u1_lo + a * (box.u1_hi - box.u1_lo), box.u2_lo + b * (box.u2_hi - box.u2_lo)};
  }
  return out;
}

struct OptimizationResult {
  double u1_opt = 0.0;
  double u2_opt = 0.0;
  double objective = 0.0;
  std::size_t evaluations = 0;
  std::size_t exhausted_starts = 0;  // starts that hit max_evaluations before converging
  std::vector<TracePoint> trace;     // per-start iterates, in start order

  bool exhausted() const noexcept { return exhausted_starts > 0; }
  ScsParams params() const noexcept { return {u1_opt, u2_opt}; }
};

inline OptimizationResult optimize(const HellingerObjective& f, const OptimizerConfig& cfg) {
  cfg.validate();
  const auto starts = scrambled_starts(cfg.box, cfg.multistarts, cfg.seed);
  auto run = [&](std::size_t i) {
    return nelder_mead([&](const ScsParams& u) { return f(u); }, starts[i], cfg.box,
                       cfg.simplex_tolerance, cfg.max_evaluations);
  };

  std::vector<NelderMeadResult> runs(starts.size());
  if (cfg.parallel) {
    std::vector<std::future<NelderMeadResult>> jobs;
    jobs.reserve(starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i) jobs.push_back(std::async(std::launch::async, run, i));
    for (std::size_t i = 0; i < jobs.size(); ++i) runs[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < starts.size(); ++i) runs[i] = run(i);
  }

  // Ordered fold; near-ties go to the smallest (u2, u1).
  constexpr double kTie = 1e-9;
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& r : runs) lowest = std::min(lowest, r.value);
  const NelderMeadResult* best = nullptr;
  for (const auto& r : runs) {
    if (r.value > lowest + kTie) continue;
    if (!best || r.best.u2 < best->best.u2 ||
        (r.best.u2 == best->best.u2 && r.best.u1 < best->best.u1))
      best = &r;
  }

  OptimizationResult out;
  out.u1_opt = best->best.u1;
  out.u2_opt = best->best.u2;
  out.objective = best->value;
  for (const auto& r : runs) {
    out.evaluations += r.evaluations;
    if (!r.converged) ++out.exhausted_starts;
    out.trace.insert(out.trace.end(), r.trace.begin(), r.trace.end());
  }
  return out;
}

inline OptimizationResult optimize(double target_theta, std::size_t l0, const StateVector& psi0,
                                   const OptimizerConfig& cfg) {
  return optimize(HellingerObjective(target_theta, l0, psi0), cfg);
}

/// pi/64, 2 pi/64, ..., 31 pi/64
inline std::vector<double> default_theta_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 31; ++i) g.push_back(i * kPi / 64.0);
  return g;
}

struct SweepPoint {
  double theta;
  OptimizationResult result;
};

inline std::vector<SweepPoint> theta_sweep(const std::vector<double>& grid, std::size_t l0,
                                           const StateVector& psi0, const OptimizerConfig& cfg) {
  if (grid.empty()) throw ValidationError("theta_sweep: empty grid");
  cfg.validate();
  // Grid points run concurrently; each point's starts run in order.
  OptimizerConfig inner = cfg;
  inner.parallel = false;
  std::vector<std::future<OptimizationResult>> jobs;
  jobs.reserve(grid.size());
  for (double theta : grid)
    jobs.push_back(std::async(cfg.parallel ? std::launch::async : std::launch::deferred,
                              [&, theta] { return optimize(theta, l0, psi0, inner); }));
  std::vector<SweepPoint> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out.push_back({grid[i], jobs[i].get()});
  return out;
}

}  // namespace scswalk
