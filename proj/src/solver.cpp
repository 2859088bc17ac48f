#include "bhgs/solver.hpp"

#include "lbfgs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace bhgs {

namespace {

// A start counts as converged once the V-constraint holds to this level, even if the
// tighter configured target was not reached.
constexpr double acceptance_violation = 1e-7;
constexpr double tie_tolerance = 1e-6;
// The gauge only fixes the dilation; K and V do not depend on it, so it is held loosely.
constexpr double gauge_tolerance = 1e-8;
// The polish is rejected when it moves the state by more than this fraction of its size.
constexpr double polish_trust = 0.05;
constexpr double residual_warning = 1e-4;

template <class T>
T read_key(const nlohmann::json& j, const char* key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::config, std::string("solver setting '") + key + "': " + e.what());
  }
}

// Potential and gradient sums over the grid for a nodal matrix.
struct PointwiseTerms {
  Eigen::VectorXd G;
  Eigen::MatrixXd g;
};

PointwiseTerms pointwise(const Eigen::MatrixXd& U, const PotentialModel& pot) {
  const Eigen::Index n = U.rows();
  PointwiseTerms out{Eigen::VectorXd(n), Eigen::MatrixXd(n, U.cols())};
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd ui = U.row(i).transpose();
    out.G(i) = pot.G(ui);
    out.g.row(i) = pot.g(ui).transpose();
  }
  return out;
}

Eigen::MatrixXd apply_laplacian(const RadialGrid& grid, const Eigen::MatrixXd& U) {
  Eigen::MatrixXd out(U.rows(), U.cols());
  for (Eigen::Index k = 0; k < U.cols(); ++k) out.col(k) = grid.apply_laplacian(U.col(k));
  return out;
}

Eigen::MatrixXd apply_bilaplacian(const RadialGrid& grid, const Eigen::MatrixXd& U) {
  return apply_laplacian(grid, apply_laplacian(grid, U));
}

// Read-only data shared by all multistart runs.
struct Workspace {
  GridPtr grid;
  Eigen::MatrixXd basis;      // P, n x q
  Eigen::MatrixXd stiffness;  // P^T L^T W L P
  Eigen::LLT<Eigen::MatrixXd> preconditioner;
  std::size_t m = 1;

  Workspace(GridPtr g, std::size_t components) : grid(std::move(g)), m(components) {
    basis = grid->boundary_basis();
    const Eigen::MatrixXd LP = grid->laplacian_matrix() * basis;
    stiffness = LP.transpose() * grid->weights().asDiagonal() * LP;
    stiffness = 0.5 * (stiffness + stiffness.transpose()).eval();
    const double shift = 1e-8 * stiffness.trace() / static_cast<double>(stiffness.rows());
    Eigen::MatrixXd M = stiffness;
    M.diagonal().array() += shift;
    preconditioner.compute(M);
  }

  Eigen::Index q() const { return basis.cols(); }
  Eigen::Index cols() const { return static_cast<Eigen::Index>(m); }

  Eigen::MatrixXd nodal(const Eigen::VectorXd& z) const {
    return basis * Eigen::Map<const Eigen::MatrixXd>(z.data(), q(), cols());
  }
  Eigen::VectorXd reduce(const Eigen::MatrixXd& U) const {
    const Eigen::MatrixXd Z = basis.transpose() * U;
    return Eigen::Map<const Eigen::VectorXd>(Z.data(), Z.size());
  }
  Eigen::VectorXd precondition(const Eigen::VectorXd& v) const {
    Eigen::MatrixXd V = Eigen::Map<const Eigen::MatrixXd>(v.data(), q(), cols());
    const Eigen::MatrixXd out = preconditioner.solve(V);
    return Eigen::Map<const Eigen::VectorXd>(out.data(), out.size());
  }
};

struct Constraints {
  double K = 0.0;
  double V = 0.0;
  double N = 0.0;
};

struct Multipliers {
  double y_V = 0.0;
  double y_N = 0.0;
  double rho = 10.0;
};

class ReducedProblem {
 public:
  ReducedProblem(const Workspace& ws, const PotentialModel& pot, double gauge)
      : ws_(ws), pot_(pot), gauge_(gauge) {}

  Constraints values(const Eigen::VectorXd& z) const {
    const Eigen::MatrixXd Z = Eigen::Map<const Eigen::MatrixXd>(z.data(), ws_.q(), ws_.cols());
    const Eigen::MatrixXd U = ws_.basis * Z;
    const auto& w = ws_.grid->weights();
    Constraints c;
    c.K = 0.5 * w.dot(apply_laplacian(*ws_.grid, U).rowwise().squaredNorm());
    double V = 0.0;
    for (Eigen::Index i = 0; i < U.rows(); ++i) V += w(i) * pot_.G(U.row(i).transpose());
    c.V = V;
    c.N = w.dot(U.rowwise().squaredNorm());
    return c;
  }

  double merit(const Eigen::VectorXd& z, const Multipliers& mu, Eigen::VectorXd* grad) const {
    const Constraints c = values(z);
    const double h = c.N - gauge_;
    const double value = c.K - mu.y_V * c.V + 0.5 * mu.rho * c.V * c.V - mu.y_N * h +
                         0.5 * mu.rho * h * h;
    if (grad) {
      const Eigen::MatrixXd Z = Eigen::Map<const Eigen::MatrixXd>(z.data(), ws_.q(), ws_.cols());
      const Eigen::MatrixXd U = ws_.basis * Z;
      const auto& w = ws_.grid->weights();
      const double cV = -mu.y_V + mu.rho * c.V;
      const double cN = -mu.y_N + mu.rho * h;
      Eigen::MatrixXd nodal(U.rows(), U.cols());
      for (Eigen::Index i = 0; i < U.rows(); ++i) {
        nodal.row(i) = w(i) * (cV * pot_.g(U.row(i).transpose()).transpose() + 2.0 * cN * U.row(i));
      }
      const Eigen::MatrixXd G = ws_.stiffness * Z + ws_.basis.transpose() * nodal;
      *grad = Eigen::Map<const Eigen::VectorXd>(G.data(), G.size());
    }
    return value;
  }

  double gauge() const { return gauge_; }

 private:
  const Workspace& ws_;
  const PotentialModel& pot_;
  double gauge_;
};

struct Seed {
  Eigen::MatrixXd values;
  double amplitude = 0.0;
  double width = 0.0;
  bool from_initial = false;
};

Seed make_seed(const Workspace& ws, const SolverConfig& cfg, std::size_t index) {
  if (index == 0 && cfg.initial) {
    const RadialField& init = *cfg.initial;
    if (init.components() != ws.m) {
      fail(ErrorKind::config, "initial field has " + std::to_string(init.components()) +
                                  " components, potential has " + std::to_string(ws.m));
    }
    Eigen::MatrixXd values;
    if (init.size() == ws.grid->size() && init.grid().r_max() == ws.grid->r_max()) {
      values = init.values();
    } else {
      // Resample onto the solver grid; points past the source range are zero.
      const auto& r = ws.grid->nodes();
      std::vector<double> inside;
      for (Eigen::Index i = 0; i < r.size(); ++i) {
        if (r(i) <= init.grid().r_max()) inside.push_back(r(i));
      }
      const Eigen::MatrixXd stencil = init.grid().interpolation_matrix(inside);
      values = Eigen::MatrixXd::Zero(r.size(), init.values().cols());
      values.topRows(static_cast<Eigen::Index>(inside.size())) = stencil * init.values();
    }
    return Seed{values, 0.0, 0.0, true};
  }

  std::seed_seq seq{static_cast<std::uint32_t>(cfg.rng_seed), static_cast<std::uint32_t>(cfg.rng_seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> amp(cfg.amplitude_min, cfg.amplitude_max);
  std::uniform_real_distribution<double> wid(cfg.width_min, cfg.width_max);
  Seed seed;
  seed.amplitude = amp(rng);
  seed.width = wid(rng);
  Eigen::VectorXd direction = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ws.m));
  direction(0) = 1.0;
  if (ws.m > 1) {
    std::normal_distribution<double> normal;
    for (Eigen::Index k = 0; k < direction.size(); ++k) direction(k) = normal(rng);
    direction.normalize();
  }
  const auto& r = ws.grid->nodes();
  seed.values.resize(r.size(), direction.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double bump = seed.amplitude * std::exp(-r(i) * r(i) / (2.0 * seed.width * seed.width));
    seed.values.row(i) = bump * direction.transpose();
  }
  return seed;
}

double total_potential(const RadialGrid& grid, const Eigen::MatrixXd& U, const PotentialModel& pot) {
  double V = 0.0;
  for (Eigen::Index i = 0; i < U.rows(); ++i) V += grid.weights()(i) * pot.G(U.row(i).transpose());
  return V;
}

// Finds c with V(c u) > 0 by scanning amplitudes outward from 1 in both directions.
std::optional<double> feasible_scale(const RadialGrid& grid, const Eigen::MatrixXd& U,
                                     const PotentialModel& pot) {
  if (!(U.cwiseAbs().maxCoeff() > 0.0)) return std::nullopt;
  if (total_potential(grid, U, pot) > 0.0) return 1.0;
  for (int j = 1; j <= 120; ++j) {
    const double up = std::pow(1.25, j);
    if (total_potential(grid, up * U, pot) > 0.0) return up;
    if (j <= 60) {
      const double down = std::pow(1.25, -j);
      if (total_potential(grid, down * U, pot) > 0.0) return down;
    }
  }
  return std::nullopt;
}

struct StartOutcome {
  StartRecord record;
  std::optional<RadialField> minimizer;
  std::optional<RadialField> groundstate;
  std::vector<HistoryEntry> history;
  std::vector<std::string> warnings;
};

StartOutcome run_start(const Workspace& ws, const PotentialModel& pot, const SolverConfig& cfg,
                       std::size_t index) {
  StartOutcome out;
  StartRecord& rec = out.record;
  rec.index = index;

  Seed seed = make_seed(ws, cfg, index);
  rec.amplitude = seed.amplitude;
  rec.width = seed.width;
  rec.from_initial = seed.from_initial;

  const auto& grid = *ws.grid;
  const std::optional<double> scale = feasible_scale(grid, seed.values, pot);
  if (!scale) {
    rec.error = "no amplitude of the seed reaches int G(u) > 0";
    return out;
  }
  rec.feasible = true;
  RadialField start(ws.grid, *scale * seed.values);
  const double N0 = l2_sq(start);
  start = dilate(start, std::pow(cfg.gauge_l2 / N0, 0.25));
  if (start.truncated()) out.warnings.push_back("start " + std::to_string(index) + ": gauge dilation truncated the seed");

  Eigen::VectorXd z = ws.reduce(start.values());
  ReducedProblem problem(ws, pot, cfg.gauge_l2);
  Multipliers mu{0.0, 0.0, cfg.penalty_initial};

  detail::DescentSettings settings;
  settings.memory = cfg.optimizer == "gradient" ? 0 : cfg.lbfgs_memory;
  settings.max_iterations = cfg.max_inner;
  settings.gradient_tolerance = cfg.gradient_tolerance;

  auto violation = [&](const Constraints& c) {
    return std::max(std::abs(c.V) / (1.0 + c.K), std::abs(c.N - cfg.gauge_l2) / cfg.gauge_l2);
  };

  double previous = std::numeric_limits<double>::infinity();
  Constraints c = problem.values(z);
  for (std::size_t outer = 1; outer <= cfg.max_outer; ++outer) {
    rec.outer_iterations = outer;
    auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd* g) { return problem.merit(x, mu, g); };
    auto precondition = [&](const Eigen::VectorXd& v) { return ws.precondition(v); };
    auto on_accept = [&](std::size_t it, double merit, double gnorm) {
      const Constraints cc = problem.values(z);
      out.history.push_back(HistoryEntry{outer, rec.inner_iterations + it, cc.K, std::abs(cc.V),
                                         std::abs(cc.N - cfg.gauge_l2), gnorm, merit});
    };
    const detail::DescentOutcome inner = detail::minimize_lbfgs(objective, precondition, z, settings, on_accept);
    rec.inner_iterations += inner.iterations;
    c = problem.values(z);
    const double v = violation(c);
    const bool gauge_ok = std::abs(c.N - cfg.gauge_l2) / cfg.gauge_l2 <= std::max(cfg.constraint_tolerance, gauge_tolerance);
    if (std::abs(c.V) / (1.0 + c.K) <= cfg.constraint_tolerance && gauge_ok) break;
    mu.y_V -= mu.rho * c.V;
    mu.y_N -= mu.rho * (c.N - cfg.gauge_l2);
    if (v > 0.25 * previous) mu.rho = std::min(mu.rho * cfg.penalty_growth, cfg.penalty_max);
    previous = v;
  }

  RadialField minimizer(ws.grid, ws.nodal(z));
  rec.T_estimate = energy_K(minimizer);
  rec.constraint_violation = std::abs(c.V) / (1.0 + c.K);
  rec.gauge_violation = std::abs(c.N - cfg.gauge_l2) / cfg.gauge_l2;
  rec.multiplier_estimate = mu.y_V - mu.rho * c.V;
  rec.converged = rec.constraint_violation <= acceptance_violation && rec.gauge_violation <= 1e-6;
  out.minimizer = minimizer;

  try {
    rec.lambda = extract_lambda(minimizer, pot);
    RadialField ground = rescale_to_groundstate(minimizer, rec.lambda);
    if (ground.truncated()) out.warnings.push_back("start " + std::to_string(index) + ": rescaling truncated the profile at R_max");
    if (cfg.polish) {
      PolishResult polished = polish_groundstate(ground, pot, cfg.polish_iterations);
      const double size = ground.values().cwiseAbs().maxCoeff();
      const double shift = (polished.field.values() - ground.values()).cwiseAbs().maxCoeff();
      if (polished.converged && shift <= polish_trust * size) {
        ground = polished.field;
        rec.polish_converged = true;
        rec.consistency_shift = polished.consistency_shift;
      } else {
        out.warnings.push_back("start " + std::to_string(index) + ": Newton polish rejected");
      }
    }
    rec.action_S = energy_K(ground) - potential_energy(ground, pot);
    rec.pde_residual = pde_residual(ground, pot);
    rec.pohozaev_residual = std::abs(potential_energy(ground, pot));
    if (rec.pde_residual > residual_warning) {
      std::ostringstream os;
      os << "start " << index << ": pde residual " << rec.pde_residual << " above " << residual_warning
         << (cfg.polish ? "" : "; the Newton polish is disabled");
      out.warnings.push_back(os.str());
    }
    out.groundstate = ground;
  } catch (const Error& e) {
    rec.converged = false;
    rec.error = e.what();
  }
  return out;
}

bool better(const StartRecord& a, const StartRecord& b) {
  const double scale = 1.0 + std::max(std::abs(a.T_estimate), std::abs(b.T_estimate));
  if (std::abs(a.T_estimate - b.T_estimate) <= tie_tolerance * scale) {
    if (a.pde_residual != b.pde_residual) return a.pde_residual < b.pde_residual;
    return a.index < b.index;
  }
  return a.T_estimate < b.T_estimate;
}

GroundStateResult assemble(std::vector<StartOutcome>& outcomes, std::size_t chosen) {
  StartOutcome& best = outcomes[chosen];
  GroundStateResult result{
      .minimizer = *best.minimizer,
      .T_estimate = best.record.T_estimate,
      .lambda = best.record.lambda,
      .groundstate = best.groundstate ? *best.groundstate : *best.minimizer,
      .pohozaev_residual = best.record.pohozaev_residual,
      .pde_residual = best.record.pde_residual,
      .action_S = best.record.action_S,
      .polished = best.record.polish_converged,
      .consistency_shift = best.record.consistency_shift,
      .selected_start = best.record.index,
      .starts = {},
      .history = best.history,
      .warnings = {},
  };
  for (auto& o : outcomes) {
    result.starts.push_back(o.record);
    for (auto& w : o.warnings) result.warnings.push_back(w);
  }
  return result;
}

}  // namespace

void SolverConfig::check() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::config, "invalid solver setting: " + what);
  };
  require(n >= RadialGrid::min_nodes, "n must be at least " + std::to_string(RadialGrid::min_nodes));
  require(std::isfinite(r_max) && r_max > 0.0, "r_max must be positive");
  require(std::isfinite(gauge_l2) && gauge_l2 > 0.0, "gauge_l2 must be positive");
  require(penalty_initial > 0.0, "penalty_initial must be positive");
  require(penalty_growth > 1.0, "penalty_growth must exceed 1");
  require(penalty_max >= penalty_initial, "penalty_max must be at least penalty_initial");
  require(max_outer >= 1, "max_outer must be at least 1");
  require(constraint_tolerance > 0.0, "constraint_tolerance must be positive");
  require(optimizer == "lbfgs" || optimizer == "gradient", "optimizer must be 'lbfgs' or 'gradient'");
  require(optimizer != "lbfgs" || lbfgs_memory >= 1, "lbfgs_memory must be at least 1");
  require(max_inner >= 1, "max_inner must be at least 1");
  require(gradient_tolerance > 0.0, "gradient_tolerance must be positive");
  require(multistart >= 1, "multistart must be at least 1");
  require(amplitude_min > 0.0 && amplitude_max >= amplitude_min, "amplitude range must satisfy 0 < min <= max");
  require(width_min > 0.0 && width_max >= width_min, "width range must satisfy 0 < min <= max");
}

nlohmann::json SolverConfig::to_json() const {
  return {
      {"n", n},
      {"r_max", r_max},
      {"gauge_l2", gauge_l2},
      {"penalty_initial", penalty_initial},
      {"penalty_growth", penalty_growth},
      {"penalty_max", penalty_max},
      {"max_outer", max_outer},
      {"constraint_tolerance", constraint_tolerance},
      {"optimizer", optimizer},
      {"lbfgs_memory", lbfgs_memory},
      {"max_inner", max_inner},
      {"gradient_tolerance", gradient_tolerance},
      {"multistart", multistart},
      {"rng_seed", rng_seed},
      {"amplitude_min", amplitude_min},
      {"amplitude_max", amplitude_max},
      {"width_min", width_min},
      {"width_max", width_max},
      {"polish", polish},
      {"polish_iterations", polish_iterations},
      {"threads", threads},
  };
}

SolverConfig SolverConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorKind::config, "solver settings must be an object");
  SolverConfig c;
  const nlohmann::json known = c.to_json();
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) fail(ErrorKind::config, "unknown solver setting '" + key + "'");
  }
  c.n = read_key(j, "n", c.n);
  c.r_max = read_key(j, "r_max", c.r_max);
  c.gauge_l2 = read_key(j, "gauge_l2", c.gauge_l2);
  c.penalty_initial = read_key(j, "penalty_initial", c.penalty_initial);
  c.penalty_growth = read_key(j, "penalty_growth", c.penalty_growth);
  c.penalty_max = read_key(j, "penalty_max", c.penalty_max);
  c.max_outer = read_key(j, "max_outer", c.max_outer);
  c.constraint_tolerance = read_key(j, "constraint_tolerance", c.constraint_tolerance);
  c.optimizer = read_key(j, "optimizer", c.optimizer);
  c.lbfgs_memory = read_key(j, "lbfgs_memory", c.lbfgs_memory);
  c.max_inner = read_key(j, "max_inner", c.max_inner);
  c.gradient_tolerance = read_key(j, "gradient_tolerance", c.gradient_tolerance);
  c.multistart = read_key(j, "multistart", c.multistart);
  c.rng_seed = read_key(j, "rng_seed", c.rng_seed);
  c.amplitude_min = read_key(j, "amplitude_min", c.amplitude_min);
  c.amplitude_max = read_key(j, "amplitude_max", c.amplitude_max);
  c.width_min = read_key(j, "width_min", c.width_min);
  c.width_max = read_key(j, "width_max", c.width_max);
  c.polish = read_key(j, "polish", c.polish);
  c.polish_iterations = read_key(j, "polish_iterations", c.polish_iterations);
  c.threads = read_key(j, "threads", c.threads);
  c.check();
  return c;
}

double potential_energy(const RadialField& u, const PotentialModel& potential) {
  return total_potential(u.grid(), u.values(), potential);
}

double extract_lambda(const RadialField& u, const PotentialModel& potential) {
  const PointwiseTerms terms = pointwise(u.values(), potential);
  const double numerator = u.grid().integrate(terms.g.cwiseProduct(u.values()).rowwise().sum());
  const double denominator = laplacian_sq(u);
  if (!(denominator > 1e-300)) fail(ErrorKind::degenerate, "int |Delta u|^2 vanishes; no multiplier");
  const double lambda = numerator / denominator;
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    std::ostringstream os;
    os << "multiplier lambda = " << lambda << " is not positive";
    fail(ErrorKind::degenerate, os.str());
  }
  return lambda;
}

RadialField rescale_to_groundstate(const RadialField& u, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail(ErrorKind::parameter, "lambda must be positive");
  return dilate(u, std::pow(lambda, -0.25));
}

RadialField bilaplacian(const RadialField& u) {
  return RadialField(u.grid_ptr(), apply_bilaplacian(u.grid(), u.values()), u.truncated());
}

double pde_residual(const RadialField& u, const PotentialModel& potential) {
  const Eigen::MatrixXd B = apply_bilaplacian(u.grid(), u.values());
  const PointwiseTerms terms = pointwise(u.values(), potential);
  double worst = 0.0;
  for (Eigen::Index i = 1; i + 1 < B.rows(); ++i) {
    const double defect = (B.row(i) - terms.g.row(i)).norm();
    worst = std::max(worst, defect / (1.0 + terms.g.row(i).norm()));
  }
  return worst;
}

EnergyReport action(const RadialField& u, const PotentialModel& potential) {
  EnergyReport r;
  r.K = energy_K(u);
  r.V = potential_energy(u, potential);
  r.S = r.K - r.V;
  r.l2_sq = l2_sq(u);
  r.grad_sq = grad_sq(u);
  r.entropy = entropy(u);
  r.hess_sq = hessian_sq(u);
  r.pohozaev_residual = std::abs(r.V);
  return r;
}

PolishResult polish_groundstate(const RadialField& guess, const PotentialModel& potential,
                                std::size_t max_iterations) {
  const RadialGrid& grid = guess.grid();
  const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
  const Eigen::Index m = static_cast<Eigen::Index>(guess.components());
  if (static_cast<std::size_t>(m) != potential.components()) {
    fail(ErrorKind::parameter, "field and potential have different component counts");
  }
  const Eigen::Index unknowns = n * m + 1;
  const Eigen::MatrixXd LL = grid.laplacian_matrix() * grid.laplacian_matrix();
  const auto& w = grid.weights();
  const Eigen::RowVectorXd d1_end = grid.d1().row(n - 1);
  auto idx = [m](Eigen::Index i, Eigen::Index k) { return i * m + k; };

  auto residual = [&](const Eigen::MatrixXd& U, double theta) {
    const Eigen::MatrixXd B = apply_bilaplacian(grid, U);
    Eigen::VectorXd F(unknowns);
    Eigen::Index row = 0;
    double V = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd ui = U.row(i).transpose();
      V += w(i) * potential.G(ui);
      if (i == 0 || i == n - 1) continue;
      const Eigen::VectorXd gi = potential.g(ui);
      for (Eigen::Index k = 0; k < m; ++k) F(row++) = B(i, k) - gi(k) - theta * U(i, k);
    }
    for (Eigen::Index k = 0; k < m; ++k) F(row++) = U(n - 1, k);
    for (Eigen::Index k = 0; k < m; ++k) F(row++) = d1_end.dot(U.col(k));
    F(row) = V;
    return F;
  };

  PolishResult result{guess, false, 0, 0.0};
  Eigen::MatrixXd U = guess.values();
  double theta = 0.0;
  Eigen::VectorXd F = residual(U, theta);
  if (!F.allFinite()) return result;

  for (std::size_t it = 1; it <= max_iterations; ++it) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(unknowns, unknowns);
    Eigen::Index row = 0;
    for (Eigen::Index i = 1; i < n - 1; ++i) {
      const Eigen::MatrixXd Dg = potential.dg(U.row(i).transpose());
      for (Eigen::Index k = 0; k < m; ++k, ++row) {
        for (Eigen::Index j = 0; j < n; ++j) J(row, idx(j, k)) += LL(i, j);
        for (Eigen::Index l = 0; l < m; ++l) J(row, idx(i, l)) -= Dg(k, l);
        J(row, idx(i, k)) -= theta;
        J(row, unknowns - 1) = -U(i, k);
      }
    }
    for (Eigen::Index k = 0; k < m; ++k, ++row) J(row, idx(n - 1, k)) = 1.0;
    for (Eigen::Index k = 0; k < m; ++k, ++row) {
      for (Eigen::Index j = 0; j < n; ++j) J(row, idx(j, k)) = d1_end(j);
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::VectorXd gj = potential.g(U.row(j).transpose());
      for (Eigen::Index l = 0; l < m; ++l) J(row, idx(j, l)) = w(j) * gj(l);
    }

    const Eigen::VectorXd delta = J.partialPivLu().solve(-F);
    if (!delta.allFinite()) return result;
    const double size = std::max(1.0, U.cwiseAbs().maxCoeff());
    if (delta.head(n * m).cwiseAbs().maxCoeff() <= 1e-9 * size) {
      // Below this the residual is at its round-off floor and further steps only wander.
      result.converged = true;
      result.iterations = it;
      break;
    }

    double t = 1.0;
    Eigen::MatrixXd trial;
    double trial_theta = theta;
    Eigen::VectorXd trial_F;
    const double norm = F.norm();
    for (int halvings = 0;; ++halvings) {
      trial = U;
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < m; ++k) trial(i, k) += t * delta(idx(i, k));
      }
      trial_theta = theta + t * delta(unknowns - 1);
      trial_F = residual(trial, trial_theta);
      if ((trial_F.allFinite() && trial_F.norm() <= norm) || halvings >= 6) break;
      t *= 0.5;
    }
    if (!trial_F.allFinite()) return result;

    U = trial;
    theta = trial_theta;
    F = trial_F;
    result.iterations = it;
  }
  result.field = RadialField(guess.grid_ptr(), U, guess.truncated());
  result.consistency_shift = theta;
  return result;
}

GroundStateResult minimize(const PotentialModel& potential, const SolverConfig& config) {
  config.check();
  const GridPtr grid = RadialGrid::build(config.n, config.r_max);
  const Workspace ws(grid, potential.components());
  if (ws.preconditioner.info() != Eigen::Success) {
    fail(ErrorKind::degenerate, "stiffness preconditioner is not positive definite");
  }

  const std::size_t count = config.multistart;
  std::vector<std::optional<StartOutcome>> slots(count);
  std::atomic<std::size_t> next{0};
  std::mutex error_lock;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= count) return;
      try {
        slots[k] = run_start(ws, potential, config, k);
      } catch (...) {
        std::lock_guard lock(error_lock);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::size_t threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  threads = std::min(threads, count);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<StartOutcome> outcomes;
  for (auto& s : slots) outcomes.push_back(std::move(*s));

  std::optional<std::size_t> chosen;
  std::optional<std::size_t> fallback;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const StartRecord& r = outcomes[k].record;
    if (!r.feasible || !outcomes[k].minimizer) continue;
    if (r.converged && (!chosen || better(r, outcomes[*chosen].record))) chosen = k;
    if (!fallback || r.constraint_violation < outcomes[*fallback].record.constraint_violation) fallback = k;
  }
  if (!fallback) {
    fail(ErrorKind::infeasible, "no seed enters the feasible set int G(u) >= 0 with u != 0 (" +
                                    outcomes.front().record.error + ")");
  }
  if (!chosen) {
    auto best = std::make_shared<const GroundStateResult>(assemble(outcomes, *fallback));
    std::ostringstream os;
    os << "no start reached |V(u)| <= " << acceptance_violation << " (1 + K(u)); best violation "
       << outcomes[*fallback].record.constraint_violation;
    throw ConvergenceError(os.str(), best);
  }
  return assemble(outcomes, *chosen);
}

}  // namespace bhgs
