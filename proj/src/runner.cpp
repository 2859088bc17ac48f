#include "bhgs/runner.hpp"

#include "bhgs/gaussian_oracle.hpp"
#include "bhgs/inequalities.hpp"
#include "bhgs/io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace bhgs {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> sweep_axes{"n", "r_max", "p", "multistart", "rng_seed", "gauge_l2", "potential"};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

template <class T>
T get_or(const json& j, const char* key, const T& fallback, const std::string& section) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::config, section + "." + key + ": " + e.what());
  }
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& section) {
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) fail(ErrorKind::config, "unknown setting '" + key + "' in " + section);
  }
}

RadialField load_field(const fs::path& path) {
  if (path.extension() == ".json") {
    json j;
    try {
      j = json::parse(io::read_text(path));
    } catch (const json::parse_error& e) {
      fail(ErrorKind::io, path.string() + ": " + e.what());
    }
    return io::field_from_json(j);
  }
  return io::read_field_csv(path);
}

/// Writes files into the output directory and keeps the manifest.
class Outputs {
 public:
  Outputs(fs::path dir, const std::set<std::string>& formats) : dir_(std::move(dir)), formats_(formats) {}

  bool csv() const { return formats_.contains("csv"); }
  bool json_out() const { return formats_.contains("json"); }

  void text(const std::string& name, const std::string& content) {
    io::write_text(dir_ / name, content);
    files_.push_back(name);
  }
  void field_csv(const std::string& name, const RadialField& f) {
    io::write_field_csv(dir_ / name, f);
    files_.push_back(name);
  }
  void json_file(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }

  const std::vector<std::string>& files() const { return files_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::set<std::string> formats_;
  std::vector<std::string> files_;
};

json start_to_json(const StartRecord& s) {
  return {{"index", s.index},
          {"amplitude", s.amplitude},
          {"width", s.width},
          {"from_initial", s.from_initial},
          {"feasible", s.feasible},
          {"converged", s.converged},
          {"outer_iterations", s.outer_iterations},
          {"inner_iterations", s.inner_iterations},
          {"T_estimate", s.T_estimate},
          {"constraint_violation", s.constraint_violation},
          {"gauge_violation", s.gauge_violation},
          {"lambda", s.lambda},
          {"multiplier_estimate", s.multiplier_estimate},
          {"action_S", s.action_S},
          {"pde_residual", s.pde_residual},
          {"pohozaev_residual", s.pohozaev_residual},
          {"polish_converged", s.polish_converged},
          {"consistency_shift", s.consistency_shift},
          {"error", s.error}};
}

std::string history_csv(const std::vector<HistoryEntry>& history) {
  std::ostringstream os;
  os << "iteration,K,abs_V,gradient_norm,outer,gauge_defect,merit\n";
  for (const auto& h : history) {
    os << h.iteration << ',' << format_double(h.K) << ',' << format_double(h.abs_V) << ','
       << format_double(h.gradient_norm) << ',' << h.outer << ',' << format_double(h.gauge_defect) << ','
       << format_double(h.merit) << '\n';
  }
  return os.str();
}

json solve_summary(const GroundStateResult& r, const PotentialModel& pot) {
  return {{"T_estimate", r.T_estimate},
          {"lambda", r.lambda},
          {"pohozaev_residual", r.pohozaev_residual},
          {"pde_residual", r.pde_residual},
          {"action_S", r.action_S},
          {"K_groundstate", energy_K(r.groundstate)},
          {"polished", r.polished},
          {"consistency_shift", r.consistency_shift},
          {"selected_start", r.selected_start},
          {"truncated", r.groundstate.truncated()},
          {"potential", pot.spec()}};
}

void write_solve_outputs(const GroundStateResult& r, const PotentialModel& pot, const RunConfig& cfg,
                         const std::string& status, Outputs& out, json& data) {
  if (out.csv()) {
    out.field_csv("profile.csv", r.groundstate);
    out.field_csv("minimizer.csv", r.minimizer);
    out.text("history.csv", history_csv(r.history));
  }
  if (out.json_out()) {
    out.json_file("profile.json", io::field_to_json(r.groundstate));
    json result = solve_summary(r, pot);
    result["schema_version"] = schema_version;
    result["status"] = status;
    result["solver"] = cfg.solver.to_json();
    json starts = json::array();
    for (const auto& s : r.starts) starts.push_back(start_to_json(s));
    result["starts"] = std::move(starts);
    result["warnings"] = r.warnings;
    result["files"] = {{"profile", out.csv() ? "profile.csv" : "profile.json"},
                       {"minimizer", out.csv() ? json("minimizer.csv") : json(nullptr)},
                       {"history", out.csv() ? json("history.csv") : json(nullptr)}};
    out.json_file("result.json", result);
  }
  data["T_estimate"] = r.T_estimate;
  data["lambda"] = r.lambda;
  data["residuals"] = {{"pohozaev", r.pohozaev_residual}, {"pde", r.pde_residual}};
  data["warnings"] = r.warnings;
  data["manifest"]["profile"] = out.csv() ? "profile.csv" : "profile.json";
  data["manifest"]["potential"] = pot.spec();
}

PotentialModel resolve_potential(const std::optional<json>& spec) {
  if (!spec) fail(ErrorKind::config, "a potential spec is required (e.g. --potential logarithmic)");
  return potential_from_spec(*spec);
}

SolverConfig solver_with_initial(const RunConfig& cfg) {
  SolverConfig sc = cfg.solver;
  if (cfg.initial) {
    RadialField field = load_field(*cfg.initial);
    if (cfg.initial_dilation != 1.0) field = dilate(field, cfg.initial_dilation);
    sc.initial = std::move(field);
  }
  return sc;
}

json report_line(const InequalityReport& r) { return r.to_json(); }

}  // namespace

const char* version() noexcept { return "1.0.0"; }

const char* to_string(Command c) noexcept {
  switch (c) {
    case Command::solve: return "solve";
    case Command::verify: return "verify";
    case Command::sweep: return "sweep";
    case Command::oracle: return "oracle";
  }
  return "unknown";
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::infeasible: return exit_infeasible;
    case ErrorKind::convergence: return exit_convergence;
    case ErrorKind::degenerate:
    case ErrorKind::normalization:
    case ErrorKind::not_extremizer: return exit_verification;
    case ErrorKind::parameter:
    case ErrorKind::admissibility:
    case ErrorKind::config:
    case ErrorKind::dependency:
    case ErrorKind::io: return exit_config;
  }
  return exit_config;
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) fail(ErrorKind::config, "run configuration must be an object");
  reject_unknown(j, {"command", "potential", "solver", "output_dir", "formats", "verify", "sweep"}, "run configuration");
  RunConfig c;
  if (!j.contains("command")) fail(ErrorKind::config, "missing 'command'");
  const auto command = get_or<std::string>(j, "command", "", "run");
  if (command == "solve") c.command = Command::solve;
  else if (command == "verify") c.command = Command::verify;
  else if (command == "sweep") c.command = Command::sweep;
  else if (command == "oracle") c.command = Command::oracle;
  else fail(ErrorKind::config, "unknown command '" + command + "'");

  if (j.contains("potential") && !j.at("potential").is_null()) {
    c.potential = j.at("potential");
    potential_from_spec(*c.potential);
  }

  json solver = j.value("solver", json::object());
  if (!solver.is_object()) fail(ErrorKind::config, "'solver' must be an object");
  if (solver.contains("initial")) {
    c.initial = fs::path(get_or<std::string>(solver, "initial", "", "solver"));
    solver.erase("initial");
  }
  if (solver.contains("initial_dilation")) {
    c.initial_dilation = get_or<double>(solver, "initial_dilation", 1.0, "solver");
    if (!(c.initial_dilation > 0.0)) fail(ErrorKind::config, "solver.initial_dilation must be positive");
    solver.erase("initial_dilation");
  }
  c.solver = SolverConfig::from_json(solver);

  if (j.contains("output_dir")) {
    c.output_dir = get_or<std::string>(j, "output_dir", "", "run");
  } else if (const char* env = std::getenv("BHGS_OUTPUT_DIR"); env && *env) {
    c.output_dir = env;
  } else {
    c.output_dir = "bhgs_out";
  }

  if (j.contains("formats")) {
    const auto formats = get_or<std::vector<std::string>>(j, "formats", {}, "run");
    if (formats.empty()) fail(ErrorKind::config, "formats must name json and/or csv");
    c.formats.clear();
    for (const auto& f : formats) {
      if (f != "json" && f != "csv") fail(ErrorKind::config, "unknown format '" + f + "'");
      c.formats.insert(f);
    }
  }

  const json verify = j.value("verify", json::object());
  reject_unknown(verify, {"profile", "record", "T", "corpus", "corpus_seed"}, "verify");
  if (verify.contains("profile")) c.verify.profile = get_or<std::string>(verify, "profile", "", "verify");
  if (verify.contains("record")) c.verify.record = get_or<std::string>(verify, "record", "", "verify");
  if (verify.contains("T")) {
    c.verify.T = get_or<double>(verify, "T", 0.0, "verify");
    if (!(*c.verify.T > 0.0)) fail(ErrorKind::config, "verify.T must be positive");
  }
  c.verify.corpus = get_or<std::size_t>(verify, "corpus", 0, "verify");
  c.verify.corpus_seed = get_or<std::uint64_t>(verify, "corpus_seed", c.verify.corpus_seed, "verify");

  json sweep = j.value("sweep", json::object());
  if (sweep.contains("workers")) {
    c.sweep.workers = get_or<std::size_t>(sweep, "workers", 1, "sweep");
    if (c.sweep.workers == 0) fail(ErrorKind::config, "sweep.workers must be at least 1");
    sweep.erase("workers");
  }
  for (const auto& [key, value] : sweep.items()) {
    if (!sweep_axes.contains(key)) fail(ErrorKind::config, "unknown sweep axis '" + key + "'");
    if (!value.is_array()) fail(ErrorKind::config, "sweep axis '" + key + "' must be a list");
  }
  c.sweep.axes = sweep;
  if (c.command == Command::sweep) {
    bool empty = c.sweep.axes.empty();
    for (const auto& [key, value] : c.sweep.axes.items()) empty = empty || value.empty();
    if (empty) fail(ErrorKind::config, "sweep grid is empty");
  }
  return c;
}

json RunConfig::canonical() const {
  json j;
  j["command"] = to_string(command);
  j["potential"] = potential ? potential_from_spec(*potential).spec() : json(nullptr);
  j["solver"] = solver.to_json();
  j["solver"]["initial"] = initial ? json(initial->string()) : json(nullptr);
  j["solver"]["initial_dilation"] = initial_dilation;
  if (command == Command::verify) {
    j["verify"] = {{"profile", verify.profile ? json(verify.profile->string()) : json(nullptr)},
                   {"record", verify.record ? json(verify.record->string()) : json(nullptr)},
                   {"T", verify.T ? json(*verify.T) : json(nullptr)},
                   {"corpus", verify.corpus},
                   {"corpus_seed", verify.corpus_seed}};
  }
  if (command == Command::sweep) j["sweep"] = sweep.axes;
  return j;
}

std::string RunConfig::hash() const { return io::sha256_hex(canonical().dump()); }

RunRecord run_solve(const RunConfig& config) {
  const PotentialModel pot = resolve_potential(config.potential);
  const ValidationReport validation = validate(pot, 1000);
  const SolverConfig sc = solver_with_initial(config);

  Outputs out(config.output_dir, config.formats);
  RunRecord record;
  json& data = record.data;
  data["validation"] = {{"passed", validation.passed},
                        {"points_checked", validation.points_checked},
                        {"max_gradient_error", validation.max_gradient_error},
                        {"notes", validation.notes}};
  try {
    const GroundStateResult result = minimize(pot, sc);
    write_solve_outputs(result, pot, config, "converged", out, data);
    json reports = json::array();
    if (pot.kind() == PotentialKind::logarithmic) reports.push_back(report_line(constant_bound(result.T_estimate)));
    data["reports"] = std::move(reports);
  } catch (const ConvergenceError& e) {
    write_solve_outputs(*e.best(), pot, config, "not_converged", out, data);
    data["manifest"]["files"] = out.files();
    data["error"] = e.what();
    record.exit_code = exit_convergence;
    return record;
  }
  data["manifest"]["files"] = out.files();
  return record;
}

RunRecord run_verify(const RunConfig& config) {
  std::optional<fs::path> profile_path = config.verify.profile;
  std::optional<double> T = config.verify.T;
  std::optional<json> potential_spec = config.potential;
  if (config.verify.record) {
    json prior;
    try {
      prior = json::parse(io::read_text(*config.verify.record));
    } catch (const json::parse_error& e) {
      fail(ErrorKind::io, config.verify.record->string() + ": " + e.what());
    }
    const fs::path base = config.verify.record->parent_path();
    if (!profile_path && prior.contains("manifest") && prior["manifest"].contains("profile")) {
      profile_path = base / prior["manifest"]["profile"].get<std::string>();
    }
    if (!T && prior.contains("T_estimate") && prior["T_estimate"].is_number()) T = prior["T_estimate"].get<double>();
    if (!potential_spec && prior.contains("manifest") && prior["manifest"].contains("potential")) {
      potential_spec = prior["manifest"]["potential"];
    }
  }
  if (!profile_path) fail(ErrorKind::config, "verify needs a profile file or a solve record");

  const RadialField u = load_field(*profile_path);
  const RadialField un = normalized(u);
  Outputs out(config.output_dir, config.formats);
  RunRecord record;
  json& data = record.data;
  std::vector<InequalityReport> reports;
  bool failed = false;

  reports.push_back(classical_lsi(un));
  reports.push_back(interpolation(u));
  if (!T) fail(ErrorKind::dependency, "the biharmonic log-Sobolev check needs T: pass --T or a solve record");
  reports.push_back(biharmonic_lsi(un, *T));
  reports.push_back(constant_bound(*T));
  for (const auto& r : reports) failed = failed || !r.satisfied;

  const PotentialModel log_pot = make_logarithmic(u.components());
  const bool logarithmic = !potential_spec || potential_from_spec(*potential_spec).kind() == PotentialKind::logarithmic;
  InequalityReport equality;
  equality.name = "equality_case";
  equality.tol = equality_tolerance;
  if (!logarithmic) {
    equality.context = {{"status", "skipped"}, {"reason", "equality case concerns the logarithmic potential"}};
  } else {
    try {
      const Reconstruction rec = reconstruct_groundstate(un, log_pot, *T);
      equality = rec.equality;
      const double scale = u.values().cwiseAbs().maxCoeff();
      const double roundtrip = (rec.candidate.values() - u.values()).cwiseAbs().maxCoeff() / scale;
      equality.context["status"] = "reconstructed";
      equality.context["r"] = rec.r;
      equality.context["scaled_potential"] = rec.scaled_potential;
      equality.context["candidate_pde_residual"] = rec.pde_residual;
      equality.context["roundtrip_error"] = roundtrip;
      if (out.csv()) out.field_csv("candidate.csv", rec.candidate);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::not_extremizer) throw;
      const InequalityReport b = biharmonic_lsi(un, *T);
      equality.lhs = b.lhs;
      equality.rhs = b.rhs;
      equality.gap = b.gap;
      equality.satisfied = false;
      equality.context = {{"status", "not_extremizer"}, {"error", e.what()}};
    }
  }
  reports.push_back(equality);

  if (config.verify.corpus > 0) {
    const auto corpus = fuzz_corpus(u.grid_ptr(), config.verify.corpus, config.verify.corpus_seed);
    std::size_t classical_bad = 0, interp_bad = 0, bih_bad = 0;
    double classical_worst = INFINITY, interp_worst = INFINITY, bih_worst = INFINITY;
    for (const auto& f : corpus) {
      const RadialField fn = normalized(f);
      const auto c = classical_lsi(fn);
      const auto i = interpolation(f);
      const auto b = biharmonic_lsi(fn, *T);
      classical_bad += !c.satisfied;
      interp_bad += !i.satisfied;
      bih_bad += !b.satisfied;
      classical_worst = std::min(classical_worst, c.gap);
      interp_worst = std::min(interp_worst, i.gap);
      bih_worst = std::min(bih_worst, b.gap);
    }
    auto summary = [&](const char* name, std::size_t bad, double worst, double tol) {
      InequalityReport r;
      r.name = name;
      r.lhs = static_cast<double>(bad);
      r.rhs = 0.0;
      r.gap = worst;
      r.tol = tol;
      r.satisfied = bad == 0;
      r.context = {{"samples", corpus.size()}, {"violations", bad}, {"worst_gap", worst}, {"seed", config.verify.corpus_seed}};
      return r;
    };
    reports.push_back(summary("corpus_classical_lsi", classical_bad, classical_worst, classical_lsi_tolerance));
    reports.push_back(summary("corpus_interpolation", interp_bad, interp_worst, 0.0));
    reports.push_back(summary("corpus_biharmonic_lsi", bih_bad, bih_worst, biharmonic_lsi_tolerance));
    failed = failed || classical_bad || interp_bad || bih_bad;
    if (out.csv()) {
      std::ostringstream os;
      os << "r";
      for (std::size_t k = 0; k < corpus.size(); ++k) os << ",f_" << (k + 1);
      os << '\n';
      const auto& r = u.grid().nodes();
      for (Eigen::Index i = 0; i < r.size(); ++i) {
        os << format_double(r(i));
        for (const auto& f : corpus) os << ',' << format_double(f.values()(i, 0));
        os << '\n';
      }
      out.text("corpus.csv", os.str());
    }
  }

  json lines = json::array();
  std::string jsonl;
  for (const auto& r : reports) {
    lines.push_back(r.to_json());
    jsonl += r.to_json().dump() + "\n";
  }
  out.text("reports.jsonl", jsonl);
  data["T_estimate"] = *T;
  data["reports"] = std::move(lines);
  data["manifest"]["profile"] = profile_path->string();
  data["manifest"]["files"] = out.files();
  if (failed) record.exit_code = exit_verification;
  return record;
}

RunRecord run_sweep(const RunConfig& config) {
  struct Cell {
    json params;
    RunConfig cfg;
  };
  std::vector<Cell> cells{Cell{json::object(), config}};
  for (const auto& [axis, values] : config.sweep.axes.items()) {
    std::vector<Cell> next;
    for (const auto& cell : cells) {
      for (const auto& v : values) {
        Cell c = cell;
        c.params[axis] = v;
        next.push_back(std::move(c));
      }
    }
    cells = std::move(next);
  }

  // Resolve each cell to a concrete configuration up front so bad values fail early.
  for (auto& cell : cells) {
    json solver = cell.cfg.solver.to_json();
    json potential = cell.cfg.potential ? *cell.cfg.potential : json(nullptr);
    for (const auto& [axis, v] : cell.params.items()) {
      if (axis == "potential") {
        potential = {{"kind", v}, {"m", potential.is_object() ? potential.value("m", 1) : 1}};
      } else if (axis == "p") {
        if (!potential.is_object()) potential = {{"kind", "defocusing_well"}, {"m", 1}};
        potential["params"]["p"] = v;
      } else {
        solver[axis] = v;
      }
    }
    if (cell.params.contains("p") && potential.is_object() && potential.value("kind", "") != "defocusing_well") {
      fail(ErrorKind::config, "sweep axis 'p' needs the defocusing_well potential");
    }
    if (config.sweep.workers > 1) solver["threads"] = 1;
    cell.cfg.solver = SolverConfig::from_json(solver);
    cell.cfg.potential = potential.is_null() ? std::nullopt : std::optional<json>(potential);
  }

  std::vector<json> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cells.size()) return;
      const RunConfig& cfg = cells[k].cfg;
      json row = cells[k].params;
      row["cell"] = k;
      try {
        const PotentialModel pot = resolve_potential(cfg.potential);
        validate(pot, 1000);
        const GroundStateResult r = minimize(pot, solver_with_initial(cfg));
        row["status"] = "converged";
        row["exit_code"] = exit_ok;
        row["T_estimate"] = r.T_estimate;
        row["lambda"] = r.lambda;
        row["pohozaev_residual"] = r.pohozaev_residual;
        row["pde_residual"] = r.pde_residual;
      } catch (const ConvergenceError& e) {
        row["status"] = "not_converged";
        row["exit_code"] = exit_convergence;
        row["error"] = e.what();
        row["T_estimate"] = e.best()->T_estimate;
      } catch (const Error& e) {
        row["status"] = to_string(e.kind());
        row["exit_code"] = exit_code_for(e.kind());
        row["error"] = e.what();
      }
      row["potential"] = cfg.potential ? cfg.potential->value("kind", "") : "";
      row["n"] = cfg.solver.n;
      row["r_max"] = cfg.solver.r_max;
      row["multistart"] = cfg.solver.multistart;
      row["rng_seed"] = cfg.solver.rng_seed;
      row["gauge_l2"] = cfg.solver.gauge_l2;
      if (cfg.potential && cfg.potential->contains("params") && (*cfg.potential)["params"].contains("p")) {
        row["p"] = (*cfg.potential)["params"]["p"];
      }
      rows[k] = std::move(row);
    }
  };
  const std::size_t workers = std::min(config.sweep.workers, cells.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  RunRecord record;
  std::ostringstream csv;
  csv << "cell,potential,p,n,r_max,multistart,rng_seed,gauge_l2,status,exit_code,T_estimate,lambda,"
         "pohozaev_residual,pde_residual,rel_change\n";
  std::optional<double> previous;
  double t_min = INFINITY, t_max = -INFINITY;
  for (auto& row : rows) {
    auto num = [&](const char* key) { return row.contains(key) ? format_double(row[key].get<double>()) : std::string(); };
    std::string rel;
    if (row["exit_code"] == exit_ok) {
      const double T = row["T_estimate"].get<double>();
      if (previous) {
        row["rel_change"] = std::abs(T - *previous) / std::abs(T);
        rel = format_double(row["rel_change"].get<double>());
      }
      previous = T;
      t_min = std::min(t_min, T);
      t_max = std::max(t_max, T);
    } else if (record.exit_code == exit_ok) {
      record.exit_code = row["exit_code"].get<int>();
    }
    csv << row["cell"].get<std::size_t>() << ',' << row["potential"].get<std::string>() << ',' << num("p") << ','
        << row["n"].get<std::size_t>() << ',' << num("r_max") << ',' << row["multistart"].get<std::size_t>() << ','
        << row["rng_seed"].get<std::uint64_t>() << ',' << num("gauge_l2") << ',' << row["status"].get<std::string>()
        << ',' << row["exit_code"].get<int>() << ',' << num("T_estimate") << ',' << num("lambda") << ','
        << num("pohozaev_residual") << ',' << num("pde_residual") << ',' << rel << '\n';
  }
  Outputs out(config.output_dir, config.formats);
  if (out.csv()) out.text("sweep.csv", csv.str());
  record.data["cells"] = rows;
  if (previous) {
    record.data["summary"] = {{"T_min", t_min}, {"T_max", t_max}, {"relative_spread", (t_max - t_min) / t_max}};
  }
  record.data["manifest"]["files"] = out.files();
  return record;
}

json oracle_table(std::size_t n, double r_max) {
  const GridPtr grid = RadialGrid::build(n, r_max);
  const PotentialModel log_pot = make_logarithmic(1);
  const std::vector<oracle::GaussianProfile> profiles{
      {1.0, 1.0}, {1.0 / std::numbers::pi, 1.0}, {2.0, 0.5}, {0.5, 1.25}};
  json rows = json::array();
  for (const auto& p : profiles) {
    const EnergyReport exact = oracle::closed_form_report(p);
    const RadialField f = RadialField::sample(grid, [&](double r) { return p(r); });
    const EnergyReport quad = action(f, log_pot);
    const std::vector<std::pair<const char*, std::pair<double, double>>> entries{
        {"K", {exact.K, quad.K}},
        {"l2_sq", {exact.l2_sq, quad.l2_sq}},
        {"grad_sq", {exact.grad_sq, quad.grad_sq}},
        {"hess_sq", {exact.hess_sq, quad.hess_sq}},
        {"entropy", {exact.entropy, quad.entropy}},
        {"V", {exact.V, quad.V}},
        {"S", {exact.S, quad.S}},
    };
    for (const auto& [name, values] : entries) {
      const double err = std::abs(values.second - values.first) / std::max(std::abs(values.first), 1e-300);
      rows.push_back({{"a", p.a}, {"sigma", p.sigma}, {"functional", name}, {"closed_form", values.first},
                      {"quadrature", values.second}, {"rel_error", err}});
    }
  }
  return rows;
}

RunRecord run_oracle(const RunConfig& config) {
  RunRecord record;
  const json table = oracle_table(config.solver.n, config.solver.r_max);
  double worst = 0.0;
  for (const auto& row : table) worst = std::max(worst, row["rel_error"].get<double>());
  Outputs out(config.output_dir, config.formats);
  if (out.csv()) {
    std::ostringstream os;
    os << "a,sigma,functional,closed_form,quadrature,rel_error\n";
    for (const auto& row : table) {
      os << format_double(row["a"].get<double>()) << ',' << format_double(row["sigma"].get<double>()) << ','
         << row["functional"].get<std::string>() << ',' << format_double(row["closed_form"].get<double>()) << ','
         << format_double(row["quadrature"].get<double>()) << ',' << format_double(row["rel_error"].get<double>())
         << '\n';
    }
    out.text("oracle.csv", os.str());
  }
  record.data["oracle"] = table;
  record.data["max_rel_error"] = worst;
  record.data["manifest"]["files"] = out.files();
  if (worst > 1e-8) record.exit_code = exit_verification;
  return record;
}

RunRecord run(const RunConfig& config) {
  RunRecord record;
  std::string error;
  std::string status = "ok";
  try {
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec || !fs::is_directory(config.output_dir)) {
      fail(ErrorKind::io, "cannot create output directory " + config.output_dir.string());
    }
    switch (config.command) {
      case Command::solve: record = run_solve(config); break;
      case Command::verify: record = run_verify(config); break;
      case Command::sweep: record = run_sweep(config); break;
      case Command::oracle: record = run_oracle(config); break;
    }
    if (record.exit_code == exit_verification) status = "verification_failed";
    else if (record.exit_code == exit_convergence) status = "convergence";
    else if (record.exit_code != exit_ok) status = "failed";
  } catch (const Error& e) {
    record.exit_code = exit_code_for(e.kind());
    status = to_string(e.kind());
    error = e.what();
  } catch (const std::exception& e) {
    record.exit_code = 1;
    status = "internal";
    error = e.what();
  }

  json& data = record.data;
  if (!data.is_object()) data = json::object();
  data["schema_version"] = schema_version;
  data["command"] = to_string(config.command);
  data["timestamp"] = utc_timestamp();
  data["version"] = version();
  try {
    data["config_hash"] = config.hash();
    data["config"] = config.canonical();
  } catch (const Error&) {
    data["config_hash"] = nullptr;
  }
  data["exit_code"] = record.exit_code;
  data["status"] = status;
  if (!error.empty()) data["error"] = error;
  if (!data.contains("reports")) data["reports"] = json::array();
  if (!data.contains("manifest")) data["manifest"] = json::object();
  if (!data["manifest"].contains("files")) data["manifest"]["files"] = json::array();
  data["manifest"]["files"].push_back("record.json");

  std::error_code ec;
  if (fs::is_directory(config.output_dir, ec)) {
    try {
      io::write_text(config.output_dir / "record.json", data.dump(2) + "\n");
    } catch (const Error&) {
      // The record is still returned to the caller.
    }
  }
  return record;
}

}  // namespace bhgs
