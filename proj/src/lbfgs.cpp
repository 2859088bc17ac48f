#include "lbfgs.hpp"

#include <cmath>
#include <vector>

namespace bhgs::detail {

DescentOutcome minimize_lbfgs(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>& objective,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& precondition,
    Eigen::VectorXd& x, const DescentSettings& settings,
    const std::function<void(std::size_t, double, double)>& on_accept) {
  struct Pair {
    Eigen::VectorXd s;
    Eigen::VectorXd y;
    double rho;
  };
  std::deque<Pair> history;
  DescentOutcome out;

  Eigen::VectorXd grad(x.size());
  double value = objective(x, &grad);
  std::size_t stalled = 0;

  for (std::size_t it = 0; it < settings.max_iterations; ++it) {
    const Eigen::VectorXd hg = precondition(grad);
    const double gnorm = std::sqrt(std::max(0.0, grad.dot(hg)));
    out.gradient_norm = gnorm;
    if (gnorm <= settings.gradient_tolerance * (1.0 + std::abs(value))) {
      out.converged = true;
      break;
    }

    Eigen::VectorXd q = grad;
    std::vector<double> alpha(history.size());
    for (std::size_t k = history.size(); k-- > 0;) {
      alpha[k] = history[k].rho * history[k].s.dot(q);
      q -= alpha[k] * history[k].y;
    }
    Eigen::VectorXd direction = precondition(q);
    for (std::size_t k = 0; k < history.size(); ++k) {
      const double beta = history[k].rho * history[k].y.dot(direction);
      direction += (alpha[k] - beta) * history[k].s;
    }
    direction = -direction;
    double slope = grad.dot(direction);
    if (!(slope < 0.0)) {
      history.clear();
      direction = -hg;
      slope = grad.dot(direction);
    }
    if (!(slope < 0.0)) break;

    double step = 1.0;
    Eigen::VectorXd trial = x + direction;
    double trial_value = objective(trial, nullptr);
    while (!(std::isfinite(trial_value) && trial_value <= value + settings.armijo * step * slope)) {
      step *= 0.5;
      if (step < 1e-20) break;
      trial = x + step * direction;
      trial_value = objective(trial, nullptr);
    }
    if (step < 1e-20 || !(trial_value < value)) {
      // No decrease representable in floating point: stationary to round-off.
      break;
    }

    Eigen::VectorXd trial_grad(x.size());
    objective(trial, &trial_grad);
    Pair pair{trial - x, trial_grad - grad, 0.0};
    const double sy = pair.s.dot(pair.y);
    if (settings.memory > 0 && sy > 1e-300) {
      pair.rho = 1.0 / sy;
      history.push_back(std::move(pair));
      if (history.size() > settings.memory) history.pop_front();
    }

    const double decrease = value - trial_value;
    x = std::move(trial);
    grad = std::move(trial_grad);
    value = trial_value;
    out.iterations = it + 1;
    if (on_accept) on_accept(out.iterations, value, gnorm);

    stalled = decrease <= 1e-15 * (1.0 + std::abs(value)) ? stalled + 1 : 0;
    if (stalled >= 5) break;
  }
  out.value = value;
  return out;
}

}  // namespace bhgs::detail
