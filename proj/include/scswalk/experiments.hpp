#pragma once

// Experiment runners behind the command-line tool. Each runner takes a fully
// resolved parameter set and returns the output files as in-memory strings,
// so the numeric content can be checked without touching the filesystem.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scswalk/dynamics.hpp"
#include "scswalk/errors.hpp"
#include "scswalk/hellinger_opt.hpp"
#include "scswalk/operators.hpp"
#include "scswalk/spectral.hpp"

namespace scswalk {

using Json = nlohmann::ordered_json;

enum class Subcommand { Spectrum, Evolve, Optimize, Decohere, SweepTheta };

inline const char* to_string(Subcommand s) {
  switch (s) {
    case Subcommand::Spectrum: return "spectrum";
    case Subcommand::Evolve: return "evolve";
    case Subcommand::Optimize: return "optimize";
    case Subcommand::Decohere: return "decohere";
    case Subcommand::SweepTheta: return "sweep-theta";
  }
  return "?";
}

inline Subcommand subcommand_from_string(const std::string& s) {
  for (auto c : {Subcommand::Spectrum, Subcommand::Evolve, Subcommand::Optimize,
                 Subcommand::Decohere, Subcommand::SweepTheta})
    if (s == to_string(c)) return c;
  throw ValidationError("unknown subcommand '" + s + "'");
}

inline WalkKind walk_kind_from_string(const std::string& s) {
  if (s == "dtqw") return WalkKind::Dtqw;
  if (s == "scs") return WalkKind::Scs;
  throw ValidationError("kind must be dtqw or scs, got '" + s + "'");
}

inline LambdaSchedule schedule_from_string(const std::string& s) {
  if (s == "per-step") return LambdaSchedule::PerStep;
  if (s == "cumulative") return LambdaSchedule::Cumulative;
  throw ValidationError("lambda schedule must be per-step or cumulative, got '" + s + "'");
}

/// Angles reported as optimal for d = 31, theta = pi/4, alpha = 5 e^{i pi}.
inline ScsParams reference_scs_angles(std::size_t d) {
  return {1.3650 * 2.0 * kPi / static_cast<double>(d), 15.9462 * kPi / 4.0};
}

struct RunParams {
  WalkKind kind = WalkKind::Scs;
  std::size_t d = 31;
  double theta = kPi / 4;
  std::optional<double> u1;
  std::optional<double> u2;
  double alpha_mag = 5.0;
  double alpha_phase = kPi;
  std::size_t coin = 0;
  std::optional<std::size_t> steps;
  std::size_t l0 = 50;
  std::vector<double> t_dephase;
  LambdaSchedule schedule = LambdaSchedule::PerStep;
  std::vector<double> theta_grid;
  std::uint64_t seed = 20240601;
  std::size_t multistarts = 16;
  std::size_t max_evaluations = 2000;

  Complex alpha() const { return std::polar(alpha_mag, alpha_phase); }
  ScsParams scs() const { return {u1.value_or(0.0), u2.value_or(0.0)}; }
  std::size_t step_count() const { return steps.value_or(0); }

  OptimizerConfig optimizer() const {
    auto c = OptimizerConfig::defaults(d);
    c.seed = seed;
    c.multistarts = multistarts;
    c.max_evaluations = max_evaluations;
    return c;
  }

  void validate() const {
    WalkConfig{d, theta}.validate();
    require_coin_index(coin);
    if (!std::isfinite(alpha_mag) || alpha_mag < 0.0 || !std::isfinite(alpha_phase))
      throw ValidationError("alpha magnitude must be finite and >= 0, phase finite");
    if ((u1 && !std::isfinite(*u1)) || (u2 && !std::isfinite(*u2)))
      throw ValidationError("u1 and u2 must be finite");
    if (l0 < 1) throw ValidationError("l0 must be >= 1");
    for (double t : t_dephase) DephasingSpec{t, schedule}.validate();
    for (double t : theta_grid) WalkConfig{d, t}.validate();
    optimizer().validate();
  }
};

/// Fills every unset field with the default for `cmd`.
inline RunParams resolve(Subcommand cmd, RunParams p) {
  switch (cmd) {
    case Subcommand::Spectrum: {
      const ScsParams def{2.0 * kPi / static_cast<double>(p.d), p.theta};
      if (!p.u1) p.u1 = def.u1;
      if (!p.u2) p.u2 = def.u2;
      if (!p.steps) p.steps = 0;
      break;
    }
    case Subcommand::Evolve:
    case Subcommand::Decohere: {
      const ScsParams def = reference_scs_angles(p.d);
      if (!p.u1) p.u1 = def.u1;
      if (!p.u2) p.u2 = def.u2;
      if (!p.steps) p.steps = cmd == Subcommand::Evolve ? 100 : 600;
      if (cmd == Subcommand::Decohere && p.t_dephase.empty())
        p.t_dephase = {1.0, 10.0, 100.0, std::numeric_limits<double>::infinity()};
      break;
    }
    case Subcommand::Optimize:
    case Subcommand::SweepTheta:
      if (!p.u1) p.u1 = 0.0;
      if (!p.u2) p.u2 = 0.0;
      if (!p.steps) p.steps = cmd == Subcommand::Optimize ? 100 : 0;
      if (cmd == Subcommand::SweepTheta && p.theta_grid.empty()) p.theta_grid = default_theta_grid();
      break;
  }
  p.validate();
  return p;
}

// ---- formatting ----------------------------------------------------------

inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Short label for file names: 1, 10, 2.5, inf.
inline std::string format_label(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline Json number_json(double v) { return std::isinf(v) ? Json("inf") : Json(v); }

inline double number_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw ValidationError("expected a number or \"inf\", got " + j.dump());
  }
  return j.get<double>();
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) { row_strings(header); }

  void row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    row_strings(cells);
  }

  std::string str() const { return out_; }

 private:
  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ += ',';
      out_ += cells[i];
    }
    out_ += '\n';
  }
  std::string out_;
};

inline Json params_to_json(const RunParams& p) {
  Json j;
  j["kind"] = to_string(p.kind);
  j["d"] = p.d;
  j["theta"] = p.theta;
  j["u1"] = p.u1 ? Json(*p.u1) : Json(nullptr);
  j["u2"] = p.u2 ? Json(*p.u2) : Json(nullptr);
  j["alpha_mag"] = p.alpha_mag;
  j["alpha_phase"] = p.alpha_phase;
  j["coin"] = p.coin;
  j["steps"] = p.steps ? Json(*p.steps) : Json(nullptr);
  j["l0"] = p.l0;
  j["t_dephase"] = Json::array();
  for (double t : p.t_dephase) j["t_dephase"].push_back(number_json(t));
  j["lambda_schedule"] = to_string(p.schedule);
  j["theta_grid"] = p.theta_grid;
  j["seed"] = p.seed;
  j["multistarts"] = p.multistarts;
  j["max_evaluations"] = p.max_evaluations;
  return j;
}

inline RunParams run_params_from_json(const Json& j) {
  try {
    RunParams p;
    p.kind = walk_kind_from_string(j.at("kind").get<std::string>());
    p.d = j.at("d").get<std::size_t>();
    p.theta = j.at("theta").get<double>();
    if (!j.at("u1").is_null()) p.u1 = j.at("u1").get<double>();
    if (!j.at("u2").is_null()) p.u2 = j.at("u2").get<double>();
    p.alpha_mag = j.at("alpha_mag").get<double>();
    p.alpha_phase = j.at("alpha_phase").get<double>();
    p.coin = j.at("coin").get<std::size_t>();
    if (!j.at("steps").is_null()) p.steps = j.at("steps").get<std::size_t>();
    p.l0 = j.at("l0").get<std::size_t>();
    for (const auto& t : j.at("t_dephase")) p.t_dephase.push_back(number_from_json(t));
    p.schedule = schedule_from_string(j.at("lambda_schedule").get<std::string>());
    p.theta_grid = j.at("theta_grid").get<std::vector<double>>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.multistarts = j.at("multistarts").get<std::size_t>();
    p.max_evaluations = j.at("max_evaluations").get<std::size_t>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed parameter block: ") + e.what());
  }
}

// ---- optimization result schema -------------------------------------------

inline constexpr const char* kOptimizationSchema = "scswalk.optimization_result";
inline constexpr int kOptimizationSchemaVersion = 1;

inline Json result_to_json(const OptimizationResult& r, const Json& config) {
  Json j;
  j["schema"] = kOptimizationSchema;
  j["schema_version"] = kOptimizationSchemaVersion;
  j["u1_opt"] = r.u1_opt;
  j["u2_opt"] = r.u2_opt;
  j["objective"] = r.objective;
  j["evaluations"] = r.evaluations;
  j["exhausted"] = r.exhausted();
  j["exhausted_starts"] = r.exhausted_starts;
  j["trace"] = Json::array();
  for (const auto& t : r.trace) j["trace"].push_back({t.u1, t.u2, t.objective});
  j["config"] = config;
  return j;
}

inline OptimizationResult optimization_result_from_json(const Json& j) {
  if (j.value("schema", "") != kOptimizationSchema)
    throw ValidationError("not an optimization result document");
  if (j.value("schema_version", 0) != kOptimizationSchemaVersion)
    throw ValidationError("unsupported optimization result schema_version " +
                          j.value("schema_version", Json(nullptr)).dump());
  OptimizationResult r;
  r.u1_opt = j.at("u1_opt").get<double>();
  r.u2_opt = j.at("u2_opt").get<double>();
  r.objective = j.at("objective").get<double>();
  r.evaluations = j.at("evaluations").get<std::size_t>();
  r.exhausted_starts = j.at("exhausted_starts").get<std::size_t>();
  for (const auto& t : j.at("trace"))
    r.trace.push_back({t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>()});
  return r;
}

// ---- runners ---------------------------------------------------------------

struct RunFile {
  std::string name;
  std::string content;
};

struct RunOutput {
  std::vector<RunFile> files;
  bool exhausted = false;  // some optimizer start hit its evaluation cap

  const RunFile& file(const std::string& name) const {
    for (const auto& f : files)
      if (f.name == name) return f;
    throw ValidationError("no output file named " + name);
  }
};

inline StateVector initial_state(const RunParams& p) {
  return coherent_state(p.alpha(), p.d, p.coin).state;
}

inline std::vector<std::string> distribution_header(std::size_t d) {
  std::vector<std::string> h{"step"};
  for (std::size_t n = 0; n < d; ++n) h.push_back("p" + std::to_string(n));
  return h;
}

inline void distribution_row(CsvWriter& csv, std::size_t step, const PhaseDistribution& p) {
  std::vector<double> row{static_cast<double>(step)};
  row.insert(row.end(), p.values().begin(), p.values().end());
  csv.row(row);
}

inline RunOutput run_spectrum(const RunParams& p) {
  const SpectralData data = p.kind == WalkKind::Dtqw ? dtqw_spectrum(p.d, p.theta)
                                                     : scs_spectrum(p.d, p.scs());
  CsvWriter csv({"k", "epsilon_plus", "epsilon_minus", "dx", "dy", "dz"});
  for (std::size_t k = 0; k < p.d; ++k) {
    const auto& b = data.bloch[k];
    csv.row({static_cast<double>(k), data.epsilon[k], -data.epsilon[k], b.dx, b.dy, b.dz});
  }
  Json summary;
  summary["kind"] = to_string(p.kind);
  summary["d"] = p.d;
  summary["theta"] = p.kind == WalkKind::Dtqw ? p.theta : p.scs().u2;
  if (p.kind == WalkKind::Scs) {
    summary["u1"] = p.scs().u1;
    summary["u2"] = p.scs().u2;
  }
  summary["singular_k"] = data.singular_k;
  try {
    summary["winding_number"] = winding_number(data);
  } catch (const std::domain_error& e) {
    summary["winding_number"] = nullptr;
    summary["winding_error"] = e.what();
  }
  return {{{"spectrum.csv", csv.str()}, {"summary.json", summary.dump(2) + "\n"}}};
}

inline RunOutput run_evolve(const RunParams& p) {
  const auto psi0 = initial_state(p);
  const std::size_t steps = p.step_count();
  const bool scs = p.kind == WalkKind::Scs;
  const ComplexMatrix u = scs ? build_scs(p.d, p.scs()) : build_dtqw({p.d, p.theta});
  const auto traj = evolve_pure(u, psi0, steps);
  std::vector<PhaseDistribution> reference;
  if (scs) reference = distribution_trajectory(build_dtqw({p.d, p.theta}), psi0, steps);

  CsvWriter dist(distribution_header(p.d));
  std::vector<std::string> cols{"step", "std", "negativity"};
  if (scs) cols.push_back("hellinger_to_dtqw");
  CsvWriter obs(cols);
  for (std::size_t l = 0; l <= steps; ++l) {
    const auto pl = phase_distribution(traj[l]);
    distribution_row(dist, l, pl);
    std::vector<double> row{static_cast<double>(l), distribution_std(pl), negativity(traj[l])};
    if (scs) row.push_back(hellinger(reference[l], pl));
    obs.row(row);
  }
  return {{{"distribution.csv", dist.str()}, {"observables.csv", obs.str()}}};
}

inline RunOutput run_optimize(const RunParams& p) {
  const auto psi0 = initial_state(p);
  const auto cfg = p.optimizer();
  const auto result = optimize(HellingerObjective(p.theta, p.l0, psi0), cfg);

  Json config;
  config["theta"] = p.theta;
  config["d"] = p.d;
  config["l0"] = p.l0;
  config["alpha_mag"] = p.alpha_mag;
  config["alpha_phase"] = p.alpha_phase;
  config["coin"] = p.coin;
  config["box"] = {{"u1", {cfg.box.u1_lo, cfg.box.u1_hi}}, {"u2", {cfg.box.u2_lo, cfg.box.u2_hi}}};
  config["multistarts"] = cfg.multistarts;
  config["simplex_tolerance"] = cfg.simplex_tolerance;
  config["max_evaluations"] = cfg.max_evaluations;
  config["seed"] = cfg.seed;

  CsvWriter series({"step", "hellinger"});
  const auto h = hellinger_series(p.theta, result.params(), psi0, p.step_count());
  for (std::size_t l = 0; l < h.size(); ++l) series.row({static_cast<double>(l), h[l]});

  RunOutput out{{{"result.json", result_to_json(result, config).dump(2) + "\n"},
                 {"hellinger_series.csv", series.str()}}};
  out.exhausted = result.exhausted();
  return out;
}

struct DephasedRun {
  std::vector<PhaseDistribution> distributions;
  std::vector<double> spread;
};

inline DephasedRun dephased_run(const ComplexMatrix& u, const StateVector& psi0,
                                const DephasingSpec& spec, std::size_t steps) {
  DephasedRun r;
  r.distributions.reserve(steps + 1);
  evolve_channel(u, DensityOperator::pure(psi0), spec, steps,
                 [&](std::size_t, const DensityOperator& rho) {
                   r.distributions.push_back(phase_distribution(rho));
                   r.spread.push_back(distribution_std(r.distributions.back()));
                 });
  return r;
}

/// Both walks under each dephasing time; the (T_d, walk) fan runs concurrently.
inline RunOutput run_decohere(const RunParams& p) {
  const auto psi0 = initial_state(p);
  const std::size_t steps = p.step_count();
  const ComplexMatrix dtqw = build_dtqw({p.d, p.theta});
  const ComplexMatrix scs = build_scs(p.d, p.scs());

  std::vector<std::future<DephasedRun>> jobs;
  for (double td : p.t_dephase) {
    const DephasingSpec spec{td, p.schedule};
    jobs.push_back(std::async(std::launch::async, dephased_run, std::cref(dtqw), std::cref(psi0), spec, steps));
    jobs.push_back(std::async(std::launch::async, dephased_run, std::cref(scs), std::cref(psi0), spec, steps));
  }
  std::vector<DephasedRun> runs;
  for (auto& j : jobs) runs.push_back(j.get());

  RunOutput out;
  std::vector<std::string> h_cols{"step"}, s_cols{"step"};
  for (double td : p.t_dephase) {
    const std::string label = format_label(td);
    h_cols.push_back("td_" + label);
    s_cols.push_back("dtqw_td_" + label);
    s_cols.push_back("scs_td_" + label);
  }
  CsvWriter hel(h_cols), spread(s_cols);
  for (std::size_t l = 0; l <= steps; ++l) {
    std::vector<double> h{static_cast<double>(l)}, s{static_cast<double>(l)};
    for (std::size_t i = 0; i < p.t_dephase.size(); ++i) {
      const auto& a = runs[2 * i];
      const auto& b = runs[2 * i + 1];
      h.push_back(hellinger(a.distributions[l], b.distributions[l]));
      s.push_back(a.spread[l]);
      s.push_back(b.spread[l]);
    }
    hel.row(h);
    spread.row(s);
  }
  for (std::size_t i = 0; i < p.t_dephase.size(); ++i) {
    const std::string label = format_label(p.t_dephase[i]);
    for (std::size_t w = 0; w < 2; ++w) {
      CsvWriter dist(distribution_header(p.d));
      for (std::size_t l = 0; l <= steps; ++l) distribution_row(dist, l, runs[2 * i + w].distributions[l]);
      out.files.push_back({std::string("distribution_") + (w ? "scs" : "dtqw") + "_td_" + label + ".csv",
                           dist.str()});
    }
  }
  out.files.push_back({"hellinger.csv", hel.str()});
  out.files.push_back({"spread.csv", spread.str()});
  return out;
}

inline RunOutput run_sweep_theta(const RunParams& p) {
  const auto points = theta_sweep(p.theta_grid, p.l0, initial_state(p), p.optimizer());
  CsvWriter csv({"theta", "objective", "u1_opt", "u2_opt", "evaluations", "exhausted_starts"});
  RunOutput out;
  for (const auto& pt : points) {
    const auto& r = pt.result;
    csv.row({pt.theta, r.objective, r.u1_opt, r.u2_opt, static_cast<double>(r.evaluations),
             static_cast<double>(r.exhausted_starts)});
    out.exhausted = out.exhausted || r.exhausted();
  }
  out.files.push_back({"sweep.csv", csv.str()});
  return out;
}

/// Resolves defaults and dispatches. Returns the resolved parameters via `resolved`.
inline RunOutput run(Subcommand cmd, const RunParams& params, RunParams* resolved = nullptr) {
  const RunParams p = resolve(cmd, params);
  if (resolved) *resolved = p;
  switch (cmd) {
    case Subcommand::Spectrum: return run_spectrum(p);
    case Subcommand::Evolve: return run_evolve(p);
    case Subcommand::Optimize: return run_optimize(p);
    case Subcommand::Decohere: return run_decohere(p);
    case Subcommand::SweepTheta: return run_sweep_theta(p);
  }
  throw ValidationError("unknown subcommand");
}

}  // namespace scswalk
