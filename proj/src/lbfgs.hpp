#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <deque>
#include <functional>

namespace bhgs::detail {

struct DescentSettings {
  std::size_t memory = 20;  // 0 gives preconditioned steepest descent
  std::size_t max_iterations = 500;
  double gradient_tolerance = 1e-10;
  double armijo = 1e-4;
};

struct DescentOutcome {
  std::size_t iterations = 0;
  bool converged = false;
  double value = 0.0;
  double gradient_norm = 0.0;
};

/// Limited-memory BFGS with a fixed SPD preconditioner as the initial inverse Hessian
/// and Armijo backtracking. Every accepted step strictly decreases the objective.
///
/// objective(x, grad) returns f(x) and fills grad when grad is non-null.
/// precondition(v) applies the inverse of the preconditioner.
/// on_accept(iteration, value, gradient_norm) runs after each accepted step.
DescentOutcome minimize_lbfgs(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>& objective,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& precondition,
    Eigen::VectorXd& x, const DescentSettings& settings,
    const std::function<void(std::size_t, double, double)>& on_accept = {});

}  // namespace bhgs::detail
