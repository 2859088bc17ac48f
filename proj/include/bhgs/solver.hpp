#pragma once

#include "bhgs/calculus.hpp"
#include "bhgs/error.hpp"
#include "bhgs/potential.hpp"

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bhgs {

struct SolverConfig {
  std::size_t n = 128;
  double r_max = 16.0;
  /// Gauge: target int |u|^2 of the minimizer.
  double gauge_l2 = 1.0;

  // Augmented-Lagrangian penalty schedule for V(u) = 0 and the gauge.
  double penalty_initial = 10.0;
  double penalty_growth = 4.0;
  double penalty_max = 1e6;
  std::size_t max_outer = 40;
  /// Target |V(u)| <= constraint_tolerance * (1 + K(u)).
  double constraint_tolerance = 1e-10;

  /// "lbfgs" or "gradient" (preconditioned steepest descent).
  std::string optimizer = "lbfgs";
  std::size_t lbfgs_memory = 20;
  std::size_t max_inner = 500;
  double gradient_tolerance = 1e-10;

  std::size_t multistart = 8;
  std::uint64_t rng_seed = 1;
  double amplitude_min = 0.5;
  double amplitude_max = 3.0;
  double width_min = 0.3;
  double width_max = 1.5;
  /// Optional first seed; resampled onto the solver grid when needed.
  std::optional<RadialField> initial;

  bool polish = true;
  std::size_t polish_iterations = 30;
  /// Worker threads for the multistart runs; 0 picks the hardware concurrency.
  std::size_t threads = 0;

  /// Throws ErrorKind::config on invalid settings.
  void check() const;
  /// Every setting except `initial`.
  nlohmann::json to_json() const;
  static SolverConfig from_json(const nlohmann::json& j);
};

struct HistoryEntry {
  std::size_t outer = 0;
  std::size_t iteration = 0;
  double K = 0.0;
  double abs_V = 0.0;
  double gauge_defect = 0.0;
  double gradient_norm = 0.0;
  double merit = 0.0;
};

struct StartRecord {
  std::size_t index = 0;
  double amplitude = 0.0;
  double width = 0.0;
  bool from_initial = false;
  bool feasible = false;
  bool converged = false;
  std::size_t outer_iterations = 0;
  std::size_t inner_iterations = 0;
  double T_estimate = 0.0;
  double constraint_violation = 0.0;
  double gauge_violation = 0.0;
  double lambda = 0.0;
  double multiplier_estimate = 0.0;
  double action_S = 0.0;
  double pde_residual = 0.0;
  double pohozaev_residual = 0.0;
  bool polish_converged = false;
  double consistency_shift = 0.0;
  std::string error;
};

struct GroundStateResult {
  RadialField minimizer;
  double T_estimate = 0.0;
  double lambda = 0.0;
  RadialField groundstate;
  double pohozaev_residual = 0.0;
  double pde_residual = 0.0;
  double action_S = 0.0;
  bool polished = false;
  /// theta in Delta^2 u = g(u) + theta u for the polished state.
  double consistency_shift = 0.0;
  std::size_t selected_start = 0;
  std::vector<StartRecord> starts;
  std::vector<HistoryEntry> history;
  std::vector<std::string> warnings;
};

/// Raised when no start reaches the constraint tolerance; carries the best attempt.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::shared_ptr<const GroundStateResult> best)
      : Error(ErrorKind::convergence, what), best_(std::move(best)) {}
  const std::shared_ptr<const GroundStateResult>& best() const noexcept { return best_; }

 private:
  std::shared_ptr<const GroundStateResult> best_;
};

/// Minimizes 1/2 int |Delta u|^2 over radial u != 0 with int G(u) = 0 (the active form of
/// int G(u) >= 0) and int |u|^2 = gauge_l2, then rescales the minimizer to a ground state
/// of Delta^2 u = g(u).
GroundStateResult minimize(const PotentialModel& potential, const SolverConfig& config);

/// int G(u).
double potential_energy(const RadialField& u, const PotentialModel& potential);

/// lambda = int g(u).u / int |Delta u|^2, the multiplier in Delta^2 u = g(u) / lambda.
double extract_lambda(const RadialField& u, const PotentialModel& potential);

/// x -> u(lambda^{1/4} x), which solves Delta^2 v = g(v) when Delta^2 u = g(u) / lambda.
RadialField rescale_to_groundstate(const RadialField& u, double lambda);

/// Delta(Delta u) per node.
RadialField bilaplacian(const RadialField& u);

/// max over interior nodes of |Delta^2 u - g(u)| / (1 + |g(u)|).
double pde_residual(const RadialField& u, const PotentialModel& potential);

EnergyReport action(const RadialField& u, const PotentialModel& potential);

struct PolishResult {
  RadialField field;
  bool converged = false;
  std::size_t iterations = 0;
  double consistency_shift = 0.0;
};

/// Newton iteration on the collocation equations Delta^2 u = g(u) + theta u at the interior
/// nodes, with u(R) = u'(R) = 0 and int G(u) = 0 closing the system. theta is a scalar slack
/// that stays at discretization level for a genuine ground state.
PolishResult polish_groundstate(const RadialField& guess, const PotentialModel& potential,
                                std::size_t max_iterations = 30);

}  // namespace bhgs
