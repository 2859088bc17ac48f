#pragma once

#include "bhgs/error.hpp"
#include "bhgs/solver.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bhgs {

inline constexpr int schema_version = 1;
const char* version() noexcept;

enum class Command { solve, verify, sweep, oracle };

const char* to_string(Command c) noexcept;

/// Exit-code contract of the command line tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_config = 2,
  exit_infeasible = 3,
  exit_convergence = 4,
  exit_verification = 5,
};

int exit_code_for(ErrorKind kind) noexcept;

struct VerifySettings {
  std::optional<std::filesystem::path> profile;
  std::optional<std::filesystem::path> record;
  std::optional<double> T;
  std::size_t corpus = 0;
  std::uint64_t corpus_seed = 20240601;
};

struct SweepSettings {
  /// Axis name -> values. Axes: n, r_max, p, multistart, rng_seed, gauge_l2.
  nlohmann::json axes = nlohmann::json::object();
  std::size_t workers = 1;
};

/// Everything a run needs. Built from a JSON object (the TOML form parses into the same shape):
/// {command, output_dir, formats, potential: {...}, solver: {..., initial: path,
/// initial_dilation: s}, verify: {...}, sweep: {axes..., workers}}.
struct RunConfig {
  Command command = Command::solve;
  std::optional<nlohmann::json> potential;
  SolverConfig solver;
  std::optional<std::filesystem::path> initial;
  double initial_dilation = 1.0;
  std::filesystem::path output_dir;
  std::set<std::string> formats{"json", "csv"};
  VerifySettings verify;
  SweepSettings sweep;

  /// Throws ErrorKind::config. output_dir defaults to $BHGS_OUTPUT_DIR, then "bhgs_out".
  static RunConfig from_json(const nlohmann::json& j);
  /// Semantic content only (no output location or formats); the config hash covers this.
  nlohmann::json canonical() const;
  std::string hash() const;
};

struct RunRecord {
  int exit_code = exit_ok;
  nlohmann::json data;
};

/// Runs the configured command, writing outputs under output_dir. Errors are caught and
/// reported in the record with the matching exit code; the record is also written as
/// record.json when the output directory is usable.
RunRecord run(const RunConfig& config);

RunRecord run_solve(const RunConfig& config);
RunRecord run_verify(const RunConfig& config);
RunRecord run_sweep(const RunConfig& config);
RunRecord run_oracle(const RunConfig& config);

/// Closed-form versus quadrature comparison for a fixed Gaussian family.
nlohmann::json oracle_table(std::size_t n, double r_max);

}  // namespace bhgs
