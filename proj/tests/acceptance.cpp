// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "scswalk/dynamics.hpp"
#include "scswalk/hellinger_opt.hpp"
#include "scswalk/operators.hpp"
#include "scswalk/spectral.hpp"

using namespace scswalk;

namespace {

constexpr std::size_t kD = 31;
constexpr double kQuarter = kPi / 4;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body, double limit_s = 0.0) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0.0 && s >= limit_s) {
    o.pass = false;
    o.detail += "; runtime over limit";
  }
  char timing[64];
  std::snprintf(timing, sizeof timing, " [%.2fs%s]", s, limit_s > 0.0 ? (" < " + std::to_string(int(limit_s)) + "s").c_str() : "");
  std::printf("%s %2d %s: %s%s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), timing);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char b[128];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

StateVector initial() { return coherent_state(std::polar(5.0, kPi), kD).state; }

ScsParams reference_angles() { return {1.3650 * 2 * kPi / kD, 15.9462 * kQuarter}; }

double r_squared(const std::vector<double>& y) {
  const std::size_t n = y.size();
  std::vector<double> x(n);
  std::iota(x.begin(), x.end(), 1.0);
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy * sxy / (sxx * syy);
}

// Filled by criterion 3, used by 4-7.
OptimizationResult optimum;
bool have_optimum = false;

}  // namespace

int main() {
  std::printf("scswalk acceptance suite\n");

  criterion(1, "winding numbers", [] {
    const int w_dtqw = winding_number(dtqw_spectrum(kD, kQuarter));
    const int w_scs = winding_number(scs_spectrum(kD, {2 * kPi / kD, kQuarter}));
    return Outcome{w_dtqw == 1 && w_scs == 0,
                   "dtqw=" + std::to_string(w_dtqw) + " (want 1), scs=" + std::to_string(w_scs) + " (want 0)"};
  }, 1.0);

  criterion(2, "operator structure", [] {
    const ComplexMatrix w = build_dtqw({kD, kQuarter});
    bool columns_ok = true;
    for (std::size_t c = 0; c < w.cols(); ++c) {
      std::vector<double> mags;
      for (std::size_t r = 0; r < w.rows(); ++r)
        if (std::abs(w(r, c)) > 1e-12) mags.push_back(std::abs(w(r, c)));
      std::sort(mags.begin(), mags.end());
      const double lo = std::min(std::cos(kQuarter), std::sin(kQuarter));
      const double hi = std::max(std::cos(kQuarter), std::sin(kQuarter));
      columns_ok = columns_ok && mags.size() == 2 && std::abs(mags[0] - lo) < 1e-12 && std::abs(mags[1] - hi) < 1e-12;
    }
    const ComplexMatrix s = build_scs(kD, {2 * kPi / kD, kQuarter});
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& z : s.entries()) smallest = std::min(smallest, std::abs(z));
    return Outcome{columns_ok && smallest > 1e-12,
                   std::string("dtqw columns ") + (columns_ok ? "2 nonzeros {cos,sin}" : "malformed") +
                       ", scs smallest |entry| = " + fmt("%.3e", smallest) + " (want > 1e-12)"};
  }, 1.0);

  criterion(3, "optimization", [] {
    const HellingerObjective f(kQuarter, 50, initial());
    const double reference = f(reference_angles());
    optimum = optimize(f, OptimizerConfig::defaults(kD));
    have_optimum = true;
    return Outcome{optimum.objective <= reference + 0.005,
                   "objective " + fmt("%.6f", optimum.objective) + " at (u1,u2)=(" + fmt("%.5f", optimum.u1_opt) +
                       ", " + fmt("%.5f", optimum.u2_opt) + "), reference angles " + fmt("%.6f", reference) +
                       " (want <= reference + 0.005)"};
  }, 300.0);

  criterion(4, "distance levels", [] {
    if (!have_optimum) return Outcome{false, "no optimum"};
    const auto h = hellinger_series(kQuarter, optimum.params(), initial(), 100);
    const double max100 = *std::max_element(h.begin() + 1, h.end());
    const double max50 = *std::max_element(h.begin() + 1, h.begin() + 51);
    const bool ok = std::abs(h[12] - 0.23) <= 0.03 && std::abs(max100 - 0.26) <= 0.03 && max100 - max50 <= 0.03;
    return Outcome{ok, "step-12 " + fmt("%.4f", h[12]) + " (0.23+-0.03), max over 100 " + fmt("%.4f", max100) +
                           " (0.26+-0.03), excess over first 50 " + fmt("%.4f", max100 - max50) + " (<= 0.03)"};
  });

  criterion(5, "ballistic spread", [] {
    if (!have_optimum) return Outcome{false, "no optimum"};
    auto fit = [](const ComplexMatrix& u) {
      const auto traj = evolve_pure(u, initial(), 10);
      std::vector<double> s;
      for (std::size_t l = 1; l <= 10; ++l) s.push_back(distribution_std(phase_distribution(traj[l])));
      return r_squared(s);
    };
    const double a = fit(build_dtqw({kD, kQuarter})), b = fit(build_scs(kD, optimum.params()));
    return Outcome{a > 0.98 && b > 0.98, "R^2 dtqw " + fmt("%.4f", a) + ", scs " + fmt("%.4f", b) + " (want > 0.98)"};
  });

  criterion(6, "negativity", [] {
    if (!have_optimum) return Outcome{false, "no optimum"};
    auto series = [](const ComplexMatrix& u) {
      std::vector<double> n;
      for (const auto& s : evolve_pure(u, initial(), 100)) n.push_back(negativity(s));
      return n;
    };
    const auto nd = series(build_dtqw({kD, kQuarter}));
    const auto ns = series(build_scs(kD, optimum.params()));
    bool bounded = true;
    for (const auto* v : {&nd, &ns})
      for (double x : *v) bounded = bounded && x >= 0.0 && x <= 0.5 + 1e-9;
    double product = 0.0;
    for (const auto& s : {initial(), coherent_state(std::polar(5.0, kPi), kD, 1).state, phase_state(4, kD, 0),
                          number_state(3, kD, 1)})
      product = std::max(product, negativity(s));
    auto variation = [](const std::vector<double>& v) {
      double t = 0.0;
      for (std::size_t i = 1; i < v.size(); ++i) t += std::abs(v[i] - v[i - 1]);
      return t;
    };
    const double tv_d = variation(nd), tv_s = variation(ns);
    return Outcome{bounded && product <= 1e-9 && tv_s < tv_d,
                   std::string(bounded ? "within [0, 0.5]" : "out of range") + ", product inputs max " +
                       fmt("%.1e", product) + ", total variation scs " + fmt("%.4f", tv_s) + " < dtqw " +
                       fmt("%.4f", tv_d)};
  });

  criterion(7, "classical limit", [] {
    if (!have_optimum) return Outcome{false, "no optimum"};
    const DephasingSpec spec{1.0};
    auto last = [&](const ComplexMatrix& u) {
      std::optional<PhaseDistribution> p;
      evolve_channel(u, DensityOperator::pure(initial()), spec, 600,
                     [&](std::size_t l, const DensityOperator& rho) {
                       if (l == 600) p = phase_distribution(rho);
                     });
      return *p;
    };
    const auto pd = last(build_dtqw({kD, kQuarter}));
    const auto ps = last(build_scs(kD, optimum.params()));
    double dev = 0.0;
    for (std::size_t n = 0; n < kD; ++n)
      dev = std::max({dev, std::abs(pd[n] - 1.0 / kD), std::abs(ps[n] - 1.0 / kD)});
    const double h = hellinger(pd, ps);
    return Outcome{dev < 0.01 && h < 0.02,
                   "max |P - 1/31| " + fmt("%.2e", dev) + " (< 0.01), mutual Hellinger " + fmt("%.2e", h) + " (< 0.02)"};
  }, 600.0);

  criterion(8, "channel algebra", [] {
    double completeness = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const auto k = dephasing_kraus(i / 100.0);
      const ComplexMatrix sum = k.e0.adjoint() * k.e0 + k.e1.adjoint() * k.e1;
      completeness = std::max(completeness, max_abs_diff(sum, ComplexMatrix::identity(2)));
    }
    const ComplexMatrix u = build_scs(kD, reference_angles());
    double drift = 0.0;
    evolve_channel(u, DensityOperator::pure(initial()), DephasingSpec{10.0}, 600,
                   [&](std::size_t, const DensityOperator& rho) {
                     drift = std::max(drift, std::abs(rho.matrix().trace() - 1.0));
                   });
    const auto pure = evolve_pure(u, initial(), 100);
    double unitary_gap = 0.0;
    evolve_channel(u, DensityOperator::pure(initial()), DephasingSpec{}, 100,
                   [&](std::size_t l, const DensityOperator& rho) {
                     unitary_gap = std::max(unitary_gap, max_abs_diff(rho.matrix(), pure[l].projector()));
                   });
    return Outcome{completeness <= 1e-15 && drift <= 1e-7 && unitary_gap <= 1e-9,
                   "completeness " + fmt("%.1e", completeness) + " (<= 1e-15), trace drift " + fmt("%.1e", drift) +
                       " (<= 1e-7), lambda=0 gap " + fmt("%.1e", unitary_gap) + " (<= 1e-9)"};
  });

  criterion(9, "trotter property", [] {
    std::vector<double> defects;
    for (std::size_t n = 1; n <= 128; n *= 2) defects.push_back(trotter_defect({5, kQuarter}, n));
    bool monotone = true;
    for (std::size_t i = 1; i < defects.size(); ++i) monotone = monotone && defects[i] <= defects[i - 1];
    return Outcome{monotone && defects.back() < 0.02,
                   std::string(monotone ? "non-increasing" : "NOT monotone") + ", n=1 " + fmt("%.4f", defects.front()) +
                       ", n=128 " + fmt("%.5f", defects.back()) + " (< 0.02)"};
  });

  criterion(10, "theta sweep shape", [] {
    const auto grid = default_theta_grid();
    const auto sweep = theta_sweep(grid, 50, initial(), OptimizerConfig::defaults(kD));
    bool bounded = true;
    double lowest_mid = 1.0;
    for (const auto& pt : sweep) {
      bounded = bounded && pt.result.objective >= 0.0 && pt.result.objective <= 1.0;
      if (pt.theta > kPi / 64 + 1e-12) lowest_mid = std::min(lowest_mid, pt.result.objective);
    }
    const double first = sweep.front().result.objective, at15 = sweep[14].result.objective;
    return Outcome{bounded && first < at15,
                   "value(pi/64) " + fmt("%.4f", first) + " < value(15pi/64) " + fmt("%.4f", at15) +
                       (bounded ? ", all in [0,1]" : ", OUT OF [0,1]") + "; lowest elsewhere " + fmt("%.4f", lowest_mid)};
  });

  criterion(11, "spectral identities", [] {
    double worst = 0.0, plane = 0.0, dy = 0.0;
    const auto walk = dtqw_spectrum(kD, kQuarter);
    const BlochVector normal{0.0, std::cos(kQuarter), -std::sin(kQuarter)};
    const ScsParams p{2 * kPi / kD, kQuarter};
    const auto scs = scs_spectrum(kD, p);
    for (std::size_t k = 0; k < kD; ++k) {
      worst = std::max(worst, max_abs_diff(pauli_rotation(walk.epsilon[k], walk.bloch[k]),
                                           dtqw_block(kQuarter, walk.ktilde[k])));
      worst = std::max(worst, max_abs_diff(pauli_rotation(scs.epsilon[k], scs.bloch[k]), scs_block(p, k)));
      plane = std::max(plane, std::abs(walk.bloch[k].dot(normal)));
      dy = std::max(dy, std::abs(scs.bloch[k].dy));
    }
    return Outcome{worst <= 1e-10 && plane <= 1e-10 && dy == 0.0,
                   "block residual " + fmt("%.1e", worst) + " (<= 1e-10), dtqw off-plane " + fmt("%.1e", plane) +
                       ", scs |dy| " + fmt("%.1e", dy)};
  });

  std::printf("%s: %d of 11 criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
