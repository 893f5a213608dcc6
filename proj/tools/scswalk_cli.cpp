// scswalk: command-line front end for the experiment runners.
//
//   scswalk spectrum|evolve|optimize|decohere|sweep-theta [flags]
//   scswalk replay <manifest.json>
//
// Exit codes: 0 ok, 1 unexpected failure or replay mismatch, 2 validation
// error, 3 optimizer exhausted its evaluation budget.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "scswalk/experiments.hpp"

#ifndef SCSWALK_VERSION
#define SCSWALK_VERSION "dev"
#endif

namespace fs = std::filesystem;
using namespace scswalk;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitExhausted = 3;

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

double parse_real(const std::string& s, const char* flag) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw ValidationError(std::string(flag) + ": not a number: '" + s + "'");
  return v;
}

std::string utc_stamp(std::chrono::system_clock::time_point t, const char* fmt) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[64];
  std::strftime(buf, sizeof buf, fmt, &tm);
  return buf;
}

fs::path output_root(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SCSWALK_OUT"); env && *env) return env;
  return "runs";
}

fs::path fresh_run_dir(const fs::path& root, Subcommand cmd, std::chrono::system_clock::time_point t) {
  const std::string base = std::string(to_string(cmd)) + "-" + utc_stamp(t, "%Y%m%dT%H%M%SZ");
  fs::path dir = root / base;
  for (int i = 1; fs::exists(dir); ++i) dir = root / (base + "-" + std::to_string(i));
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

// Raw flag values; strings where "inf" or repeats need custom handling.
struct Flags {
  std::string kind;
  std::size_t d = 31;
  std::string theta, u1, u2, alpha_mag, alpha_phase;
  std::size_t coin = 0;
  std::optional<std::size_t> steps;
  std::size_t l0 = 50;
  std::vector<std::string> t_dephase, grid;
  std::string schedule = "per-step";
  std::uint64_t seed = 20240601;
  std::size_t multistarts = 16;
  std::size_t max_evaluations = 2000;
  std::string out;
};

void add_common(CLI::App* app, Flags& f, Subcommand cmd) {
  app->add_option("--kind", f.kind, "Walk kind: dtqw or scs")->check(CLI::IsMember({"dtqw", "scs"}));
  app->add_option("--d", f.d, "Number of walker sites");
  app->add_option("--theta", f.theta, "DTQW coin angle (rad), default pi/4");
  app->add_option("--u1", f.u1, "SCS shift angle (rad)");
  app->add_option("--u2", f.u2, "SCS coin angle (rad)");
  app->add_option("--alpha-mag", f.alpha_mag, "Coherent-state amplitude |alpha|, default 5");
  app->add_option("--alpha-phase", f.alpha_phase, "Coherent-state phase arg(alpha), default pi");
  app->add_option("--coin", f.coin, "Initial coin state, 0 or 1");
  app->add_option("--steps", f.steps, "Number of walk steps");
  app->add_option("--l0", f.l0, "Steps averaged by the fitting objective");
  app->add_option("--seed", f.seed, "Optimizer seed");
  app->add_option("--multistarts", f.multistarts, "Optimizer start points");
  app->add_option("--max-evaluations", f.max_evaluations, "Objective evaluations per start");
  app->add_option("--out", f.out, "Output root (default $SCSWALK_OUT or ./runs)");
  if (cmd == Subcommand::Decohere) {
    app->add_option("--t-dephase", f.t_dephase, "Dephasing time in steps; repeatable; 'inf' allowed");
    app->add_option("--lambda-schedule", f.schedule, "per-step or cumulative")
        ->check(CLI::IsMember({"per-step", "cumulative"}));
  }
  if (cmd == Subcommand::SweepTheta) app->add_option("--grid", f.grid, "Target coin angles; repeatable");
}

RunParams to_params(const Flags& f) {
  RunParams p;
  if (!f.kind.empty()) p.kind = walk_kind_from_string(f.kind);
  p.d = f.d;
  if (!f.theta.empty()) p.theta = parse_real(f.theta, "--theta");
  if (!f.u1.empty()) p.u1 = parse_real(f.u1, "--u1");
  if (!f.u2.empty()) p.u2 = parse_real(f.u2, "--u2");
  if (!f.alpha_mag.empty()) p.alpha_mag = parse_real(f.alpha_mag, "--alpha-mag");
  if (!f.alpha_phase.empty()) p.alpha_phase = parse_real(f.alpha_phase, "--alpha-phase");
  p.coin = f.coin;
  p.steps = f.steps;
  p.l0 = f.l0;
  for (const auto& t : f.t_dephase) p.t_dephase.push_back(parse_real(t, "--t-dephase"));
  p.schedule = schedule_from_string(f.schedule);
  for (const auto& t : f.grid) p.theta_grid.push_back(parse_real(t, "--grid"));
  p.seed = f.seed;
  p.multistarts = f.multistarts;
  p.max_evaluations = f.max_evaluations;
  return p;
}

void print_summary(Subcommand cmd, const RunOutput& out) {
  if (cmd == Subcommand::Spectrum) {
    const auto s = Json::parse(out.file("summary.json").content);
    std::cout << "winding_number: " << s["winding_number"].dump() << "\n";
  } else if (cmd == Subcommand::Optimize) {
    const auto r = Json::parse(out.file("result.json").content);
    std::cout << "u1_opt: " << format_number(r["u1_opt"].get<double>())
              << "\nu2_opt: " << format_number(r["u2_opt"].get<double>())
              << "\nobjective: " << format_number(r["objective"].get<double>()) << "\n";
  }
  if (out.exhausted) std::cerr << "warning: optimizer hit the evaluation cap on at least one start\n";
}

int execute(Subcommand cmd, const Flags& flags) {
  const auto start = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  RunParams resolved;
  const RunOutput out = run(cmd, to_params(flags), &resolved);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fs::path root = output_root(flags.out);
  const fs::path dir = fresh_run_dir(root, cmd, start);
  Json manifest;
  manifest["schema"] = "scswalk.run_manifest";
  manifest["schema_version"] = 1;
  manifest["subcommand"] = to_string(cmd);
  manifest["params"] = params_to_json(resolved);
  manifest["seed"] = resolved.seed;
  manifest["version"] = SCSWALK_VERSION;
  manifest["started_utc"] = utc_stamp(start, "%Y-%m-%dT%H:%M:%SZ");
  manifest["duration_s"] = seconds;
  manifest["exhausted"] = out.exhausted;
  manifest["files"] = Json::array();
  for (const auto& f : out.files) {
    write_file(dir / f.name, f.content);
    manifest["files"].push_back({{"name", f.name}, {"bytes", f.content.size()}, {"sha256", sha256_hex(f.content)}});
  }
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  write_file(root / "latest", dir.filename().string() + "\n");

  std::cout << "run directory: " << dir.string() << "\n";
  print_summary(cmd, out);
  return out.exhausted ? kExitExhausted : 0;
}

int replay(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw ValidationError("cannot open manifest " + manifest_path);
  Json manifest;
  try {
    manifest = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (manifest.value("schema", "") != "scswalk.run_manifest")
    throw ValidationError("not a run manifest: " + manifest_path);
  const Subcommand cmd = subcommand_from_string(manifest.at("subcommand").get<std::string>());
  const RunOutput out = run(cmd, run_params_from_json(manifest.at("params")));

  bool all_match = true;
  for (const auto& entry : manifest.at("files")) {
    const auto name = entry.at("name").get<std::string>();
    const auto expected = entry.at("sha256").get<std::string>();
    std::string actual = "<missing>";
    for (const auto& f : out.files)
      if (f.name == name) actual = sha256_hex(f.content);
    const bool ok = actual == expected;
    all_match = all_match && ok;
    std::cout << (ok ? "match    " : "MISMATCH ") << name << "\n";
  }
  if (out.files.size() != manifest.at("files").size()) {
    std::cout << "MISMATCH file count\n";
    all_match = false;
  }
  std::cout << (all_match ? "replay: identical\n" : "replay: outputs differ\n");
  return all_match ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate and compare DTQW and SCS walks on a cycle"};
  app.set_version_flag("--version", SCSWALK_VERSION);
  app.require_subcommand(1);

  Flags flags;
  std::vector<std::pair<CLI::App*, Subcommand>> commands;
  const std::pair<Subcommand, const char*> descriptions[] = {
      {Subcommand::Spectrum, "Quasi-energies, Bloch vectors and winding number"},
      {Subcommand::Evolve, "Pure-state phase distributions, spread and negativity"},
      {Subcommand::Optimize, "Fit SCS angles to the DTQW target"},
      {Subcommand::Decohere, "Dephased evolution of both walks for several dephasing times"},
      {Subcommand::SweepTheta, "Optimized mean Hellinger distance across coin angles"},
  };
  for (const auto& [cmd, text] : descriptions) {
    auto* sub = app.add_subcommand(to_string(cmd), text);
    add_common(sub, flags, cmd);
    commands.emplace_back(sub, cmd);
  }
  std::string manifest_path;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run a manifest and compare output digests");
  replay_cmd->add_option("manifest", manifest_path, "Path to manifest.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (*replay_cmd) return replay(manifest_path);
    for (const auto& [sub, cmd] : commands)
      if (*sub) return execute(cmd, flags);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
