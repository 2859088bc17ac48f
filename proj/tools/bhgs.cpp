// Command line front end. Talks to the library only through the C interface.
#include "bhgs/bhgs.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

constexpr int exit_config = 2;

struct Options {
  std::string config_path;
  std::string output_dir;
  std::vector<std::string> formats;
  bool print_record = false;

  std::string potential;
  std::optional<double> p;
  std::optional<std::size_t> m;

  std::optional<std::size_t> n;
  std::optional<double> rmax;
  std::optional<std::size_t> multistart;
  std::optional<std::uint64_t> seed;
  std::optional<double> gauge;
  std::optional<std::size_t> threads;
  std::optional<std::string> optimizer;
  std::optional<std::size_t> max_outer;
  std::optional<std::size_t> max_inner;
  bool no_polish = false;
  std::string initial;
  std::optional<double> initial_dilation;

  std::string profile;
  std::string record;
  std::optional<double> T;
  std::optional<std::size_t> corpus;
  std::optional<std::uint64_t> corpus_seed;

  std::vector<std::size_t> n_values;
  std::vector<double> rmax_values;
  std::vector<double> p_values;
  std::vector<std::uint64_t> seed_values;
  std::vector<std::size_t> multistart_values;
  std::vector<double> gauge_values;
  std::vector<std::string> potential_values;
  std::optional<std::size_t> workers;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--config", o.config_path, "TOML or JSON run configuration");
  app->add_option("--output-dir,-o", o.output_dir, "Output directory (default $BHGS_OUTPUT_DIR or bhgs_out)");
  app->add_option("--format", o.formats, "Output formats: json, csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_flag("--print-record", o.print_record, "Print the run record JSON to stdout");
  app->add_option("--n", o.n, "Collocation nodes");
  app->add_option("--rmax", o.rmax, "Truncation radius");
}

void add_potential(CLI::App* app, Options& o) {
  app->add_option("--potential", o.potential, "logarithmic or defocusing_well");
  app->add_option("--p", o.p, "Exponent of the defocusing well");
  app->add_option("--m", o.m, "Number of components");
}

void add_solver(CLI::App* app, Options& o) {
  app->add_option("--multistart", o.multistart, "Random starts");
  app->add_option("--seed", o.seed, "RNG seed");
  app->add_option("--gauge", o.gauge, "Target int |u|^2 of the minimizer");
  app->add_option("--threads", o.threads, "Worker threads (0 = hardware)");
  app->add_option("--optimizer", o.optimizer, "lbfgs or gradient");
  app->add_option("--max-outer", o.max_outer, "Augmented-Lagrangian outer iterations");
  app->add_option("--max-inner", o.max_inner, "Descent iterations per outer step");
  app->add_flag("--no-polish", o.no_polish, "Skip the Newton polish of the ground state");
  app->add_option("--initial", o.initial, "Initial profile (CSV or JSON)");
  app->add_option("--initial-dilation", o.initial_dilation, "Dilate the initial profile by s before solving");
}

json build_config(const std::string& command, const Options& o) {
  json cfg = json::object();
  if (!o.config_path.empty()) {
    char* text = nullptr;
    if (bhgs_config_load(o.config_path.c_str(), &text) != BHGS_OK) {
      throw std::runtime_error(bhgs_last_error());
    }
    cfg = json::parse(text);
    bhgs_string_free(text);
  }
  cfg["command"] = command;
  if (!o.output_dir.empty()) cfg["output_dir"] = o.output_dir;
  if (!o.formats.empty()) cfg["formats"] = o.formats;

  if (!o.potential.empty() || o.p || o.m) {
    json& pot = cfg["potential"];
    if (!pot.is_object()) pot = json::object();
    if (!o.potential.empty()) pot["kind"] = o.potential;
    if (o.m) pot["m"] = *o.m;
    if (o.p) pot["params"]["p"] = *o.p;
  }

  json& solver = cfg["solver"];
  if (!solver.is_object()) solver = json::object();
  if (o.n) solver["n"] = *o.n;
  if (o.rmax) solver["r_max"] = *o.rmax;
  if (o.multistart) solver["multistart"] = *o.multistart;
  if (o.seed) solver["rng_seed"] = *o.seed;
  if (o.gauge) solver["gauge_l2"] = *o.gauge;
  if (o.threads) solver["threads"] = *o.threads;
  if (o.optimizer) solver["optimizer"] = *o.optimizer;
  if (o.max_outer) solver["max_outer"] = *o.max_outer;
  if (o.max_inner) solver["max_inner"] = *o.max_inner;
  if (o.no_polish) solver["polish"] = false;
  if (!o.initial.empty()) solver["initial"] = o.initial;
  if (o.initial_dilation) solver["initial_dilation"] = *o.initial_dilation;

  if (command == "verify") {
    json& v = cfg["verify"];
    if (!v.is_object()) v = json::object();
    if (!o.profile.empty()) v["profile"] = o.profile;
    if (!o.record.empty()) v["record"] = o.record;
    if (o.T) v["T"] = *o.T;
    if (o.corpus) v["corpus"] = *o.corpus;
    if (o.corpus_seed) v["corpus_seed"] = *o.corpus_seed;
  }
  if (command == "sweep") {
    json& s = cfg["sweep"];
    if (!s.is_object()) s = json::object();
    if (!o.n_values.empty()) s["n"] = o.n_values;
    if (!o.rmax_values.empty()) s["r_max"] = o.rmax_values;
    if (!o.p_values.empty()) s["p"] = o.p_values;
    if (!o.seed_values.empty()) s["rng_seed"] = o.seed_values;
    if (!o.multistart_values.empty()) s["multistart"] = o.multistart_values;
    if (!o.gauge_values.empty()) s["gauge_l2"] = o.gauge_values;
    if (!o.potential_values.empty()) s["potential"] = o.potential_values;
    if (o.workers) s["workers"] = *o.workers;
  }
  return cfg;
}

void summarize(const json& record) {
  const std::string command = record.value("command", "");
  std::cout << command << ": " << record.value("status", "") << " (exit " << record.value("exit_code", -1) << ")\n";
  if (record.contains("error")) std::cout << "  error: " << record["error"].get<std::string>() << "\n";
  if (record.contains("T_estimate") && record["T_estimate"].is_number()) {
    std::printf("  T_estimate = %.10g\n", record["T_estimate"].get<double>());
  }
  if (record.contains("lambda")) std::printf("  lambda = %.10g\n", record["lambda"].get<double>());
  if (record.contains("residuals")) {
    std::printf("  pohozaev_residual = %.3e  pde_residual = %.3e\n", record["residuals"]["pohozaev"].get<double>(),
                record["residuals"]["pde"].get<double>());
  }
  if (record.contains("reports")) {
    for (const auto& r : record["reports"]) {
      std::printf("  %-22s lhs = %-14.8g rhs = %-14.8g gap = %-12.4e %s\n", r["name"].get<std::string>().c_str(),
                  r["lhs"].get<double>(), r["rhs"].get<double>(), r["gap"].get<double>(),
                  r["satisfied"].get<bool>() ? "ok" : "FAILED");
    }
  }
  if (record.contains("max_rel_error")) std::printf("  max_rel_error = %.3e\n", record["max_rel_error"].get<double>());
  if (record.contains("summary")) {
    std::printf("  T range [%.10g, %.10g], relative spread %.3e\n", record["summary"]["T_min"].get<double>(),
                record["summary"]["T_max"].get<double>(), record["summary"]["relative_spread"].get<double>());
  }
  if (record.contains("config") && record.contains("manifest")) {
    std::cout << "  files:";
    for (const auto& f : record["manifest"]["files"]) std::cout << ' ' << f.get<std::string>();
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states of the biharmonic equation Delta^2 u = g(u) in R^4"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bhgs_version()));
  Options o;

  CLI::App* solve = app.add_subcommand("solve", "Compute a ground state");
  add_common(solve, o);
  add_potential(solve, o);
  add_solver(solve, o);

  CLI::App* verify = app.add_subcommand("verify", "Check the inequalities on a profile");
  add_common(verify, o);
  add_potential(verify, o);
  verify->add_option("--profile", o.profile, "Profile to check (CSV or JSON)");
  verify->add_option("--record", o.record, "record.json from a previous solve");
  verify->add_option("--T", o.T, "Value of T for the biharmonic bound");
  verify->add_option("--corpus", o.corpus, "Also fuzz this many random fields");
  verify->add_option("--corpus-seed", o.corpus_seed, "Seed of the fuzz corpus");

  CLI::App* sweep = app.add_subcommand("sweep", "Solve over a parameter grid");
  add_common(sweep, o);
  add_potential(sweep, o);
  add_solver(sweep, o);
  sweep->add_option("--n-values", o.n_values, "Node counts")->delimiter(',');
  sweep->add_option("--rmax-values", o.rmax_values, "Truncation radii")->delimiter(',');
  sweep->add_option("--p-values", o.p_values, "Defocusing-well exponents")->delimiter(',');
  sweep->add_option("--seed-values", o.seed_values, "RNG seeds")->delimiter(',');
  sweep->add_option("--multistart-values", o.multistart_values, "Multistart counts")->delimiter(',');
  sweep->add_option("--gauge-values", o.gauge_values, "Gauge values")->delimiter(',');
  sweep->add_option("--potential-values", o.potential_values, "Potential kinds")->delimiter(',');
  sweep->add_option("--workers", o.workers, "Cells solved in parallel");

  CLI::App* oracle = app.add_subcommand("oracle", "Compare quadrature with Gaussian closed forms");
  add_common(oracle, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  json config;
  try {
    config = build_config(command, o);
  } catch (const std::exception& e) {
    std::cerr << "bhgs: " << e.what() << "\n";
    return exit_config;
  }

  int exit_code = exit_config;
  char* record_text = nullptr;
  const bhgs_status status = bhgs_run(config.dump().c_str(), &exit_code, &record_text);
  if (status != BHGS_OK) {
    std::cerr << "bhgs: " << bhgs_status_name(status) << ": " << bhgs_last_error() << "\n";
    return exit_code;
  }
  const json record = json::parse(record_text);
  bhgs_string_free(record_text);
  if (o.print_record) {
    std::cout << record.dump(2) << "\n";
  } else {
    summarize(record);
  }
  return exit_code;
}
