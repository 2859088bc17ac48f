#include "doctest.h"

#include "bhgs/calculus.hpp"
#include "bhgs/error.hpp"
#include "bhgs/potential.hpp"
#include "bhgs/solver.hpp"
#include "support.hpp"

using namespace bhgs;
using namespace testing;

namespace {

// Delta^2 of exp(-r^2/2) in R^4 is (r^4 - 12 r^2 + 24) exp(-r^2/2) and ln w = -r^2/2, so
// g(t) = c t (4 ln^2 t + 24 ln t + 24) makes the unit Gaussian solve Delta^2 u = g(u) / c.
PotentialModel manufactured(double c) {
  auto G = [c](const PotentialModel::VectorRef& u) {
    const double t = u.norm();
    if (t < 1e-150) return 0.0;
    const double l = std::log(t);
    return c * t * t * (2.0 * l * l + 10.0 * l + 7.0);
  };
  auto g = [c](const PotentialModel::VectorRef& u) -> Eigen::VectorXd {
    const double t = u.norm();
    if (t < 1e-150) return Eigen::VectorXd::Zero(u.size());
    const double l = std::log(t);
    return c * u * (4.0 * l * l + 24.0 * l + 24.0);
  };
  return PotentialModel("manufactured", PotentialKind::custom, 1, G, g, 0.1,
                        Eigen::VectorXd::Constant(1, 1.0));
}

SolverConfig small_config() {
  SolverConfig c;
  c.n = 96;
  c.r_max = 16.0;
  c.multistart = 2;
  c.threads = 1;
  return c;
}

}  // namespace

TEST_CASE("solver settings are checked") {
  SolverConfig c;
  CHECK_NOTHROW(c.check());
  auto rejects = [](auto edit) {
    SolverConfig bad;
    edit(bad);
    try {
      bad.check();
    } catch (const Error& e) {
      return e.kind() == ErrorKind::config;
    }
    return false;
  };
  CHECK(rejects([](SolverConfig& s) { s.n = 8; }));
  CHECK(rejects([](SolverConfig& s) { s.r_max = -1.0; }));
  CHECK(rejects([](SolverConfig& s) { s.gauge_l2 = 0.0; }));
  CHECK(rejects([](SolverConfig& s) { s.multistart = 0; }));
  CHECK(rejects([](SolverConfig& s) { s.constraint_tolerance = 0.0; }));
  CHECK(rejects([](SolverConfig& s) { s.optimizer = "newton"; }));
  CHECK(rejects([](SolverConfig& s) { s.penalty_growth = 1.0; }));
  CHECK(rejects([](SolverConfig& s) { s.amplitude_min = 2.0; s.amplitude_max = 1.0; }));
}

TEST_CASE("solver settings round-trip through JSON") {
  SolverConfig c;
  c.n = 80;
  c.optimizer = "gradient";
  c.rng_seed = 99;
  c.polish = false;
  const SolverConfig d = SolverConfig::from_json(c.to_json());
  CHECK(d.to_json() == c.to_json());
  CHECK_THROWS_AS(SolverConfig::from_json({{"n", 64}, {"typo", 1}}), Error);
  CHECK_THROWS_AS(SolverConfig::from_json({{"n", "many"}}), Error);
  CHECK_THROWS_AS(SolverConfig::from_json(nlohmann::json::array()), Error);
}

TEST_CASE("multiplier of a manufactured solution") {
  const auto grid = RadialGrid::build(128, 16.0);
  const RadialField u = gaussian(grid);
  CHECK(extract_lambda(u, manufactured(1.0)) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(extract_lambda(u, manufactured(2.0)) == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(pde_residual(u, manufactured(1.0)) <= 1e-6);
}

TEST_CASE("rescaling removes the multiplier") {
  const auto grid = RadialGrid::build(128, 16.0);
  const RadialField u = gaussian(grid);
  for (double c : {2.0, 16.0, 0.5}) {
    const PotentialModel pot = manufactured(c);
    const double lambda = extract_lambda(u, pot);
    const RadialField v = rescale_to_groundstate(u, lambda);
    CHECK(pde_residual(v, pot) <= 1e-4);
    CHECK(pde_residual(u, pot) > 1e-2);
  }
  const RadialField v = rescale_to_groundstate(u, 16.0);
  const auto& r = grid->nodes();
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    CHECK(std::abs(v.values()(i, 0) - std::exp(-2.0 * r(i) * r(i))) <= 1e-9);
  }
  CHECK(rescale_to_groundstate(u, 1.0).values() == u.values());
  CHECK_THROWS_AS(rescale_to_groundstate(u, 0.0), Error);
  CHECK_THROWS_AS(rescale_to_groundstate(u, -1.0), Error);
}

TEST_CASE("multiplier of degenerate and non-solution fields") {
  const auto grid = RadialGrid::build(96, 16.0);
  const PotentialModel log = make_logarithmic(1);
  try {
    extract_lambda(RadialField::zeros(grid, 1), log);
    FAIL("expected degenerate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate);
  }
  const RadialField u = gaussian(grid, 2.0);
  const double lambda = extract_lambda(u, log);
  CHECK(lambda > 0.0);
  CHECK(std::isfinite(lambda));
  CHECK(pde_residual(u, log) > 0.1);
}

TEST_CASE("action on the unit Gaussian") {
  const auto grid = RadialGrid::build(128, 16.0);
  const EnergyReport r = action(gaussian(grid), make_logarithmic(1));
  CHECK(rel(r.K, 3.0 * pi * pi) <= 1e-8);
  CHECK(rel(r.V, -pi * pi) <= 1e-8);
  CHECK(rel(r.S, 4.0 * pi * pi) <= 1e-8);
  CHECK(rel(r.pohozaev_residual, pi * pi) <= 1e-8);
  CHECK(rel(potential_energy(gaussian(grid), make_logarithmic(1)), -pi * pi) <= 1e-8);
}

TEST_CASE("bilaplacian of the Gaussian") {
  const auto grid = RadialGrid::build(128, 16.0);
  const RadialField b = bilaplacian(gaussian(grid));
  const auto& r = grid->nodes();
  double err = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double x = r(i) * r(i);
    err = std::max(err, std::abs(b.values()(i, 0) - (x * x - 12.0 * x + 24.0) * std::exp(-0.5 * x)));
  }
  // Fourth derivatives carry roughly n^8 eps of round-off; the peak value is 24.
  CHECK(err <= 1e-6 * 24.0);
}

TEST_CASE("Newton polish recovers a manufactured solution") {
  const auto grid = RadialGrid::build(96, 16.0);
  const RadialField exact = gaussian(grid);
  const PolishResult p = polish_groundstate(dilate(exact, 1.02).scaled(0.99), manufactured(1.0));
  CHECK(p.converged);
  // Newton lands on the discrete solution, which sits at discretization distance from the Gaussian.
  CHECK(std::abs(p.consistency_shift) <= 1e-5);
  CHECK((p.field.values() - exact.values()).cwiseAbs().maxCoeff() <= 1e-4);
  CHECK(pde_residual(p.field, manufactured(1.0)) <= 1e-5);
  const PolishResult fixed = polish_groundstate(exact, manufactured(1.0));
  CHECK(fixed.converged);
  CHECK((fixed.field.values() - exact.values()).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("ground state of the logarithmic potential on a small grid") {
  const SolverConfig cfg = small_config();
  const GroundStateResult res = minimize(make_logarithmic(1), cfg);
  CHECK(res.T_estimate > pi * pi * e * e / 2.0);
  CHECK(res.lambda > 0.0);
  CHECK(res.pohozaev_residual <= 1e-6);
  CHECK(res.pde_residual <= 1e-4);
  CHECK(res.polished);
  CHECK(res.starts.size() == 2);
  const EnergyReport m = action(res.minimizer, make_logarithmic(1));
  CHECK(std::abs(m.V) <= 1e-7 * (1.0 + m.K));
  CHECK(rel(m.l2_sq, cfg.gauge_l2) <= 1e-6);
  CHECK(rel(energy_K(res.groundstate), res.T_estimate) <= 1e-4);
  CHECK(rel(res.action_S, energy_K(res.groundstate) - potential_energy(res.groundstate, make_logarithmic(1))) <= 1e-12);
  CHECK(rel(res.T_estimate, 211.004) <= 1e-4);

  REQUIRE_FALSE(res.history.empty());
  for (std::size_t k = 1; k < res.history.size(); ++k) {
    if (res.history[k].outer == res.history[k - 1].outer) {
      CHECK(res.history[k].merit <= res.history[k - 1].merit + 1e-12 * std::abs(res.history[k - 1].merit));
    }
  }
  for (const StartRecord& s : res.starts) {
    if (!s.converged) continue;
    CHECK(res.T_estimate <= s.T_estimate * (1.0 + 1e-6));
  }
}

TEST_CASE("thread count does not change the result") {
  SolverConfig a = small_config();
  a.multistart = 3;
  a.threads = 1;
  SolverConfig b = a;
  b.threads = 3;
  const PotentialModel pot = make_defocusing_well(1, 4.0);
  const GroundStateResult ra = minimize(pot, a);
  const GroundStateResult rb = minimize(pot, b);
  CHECK(ra.T_estimate == rb.T_estimate);
  CHECK(ra.selected_start == rb.selected_start);
  CHECK(ra.groundstate.values() == rb.groundstate.values());
}

TEST_CASE("a zero seed is infeasible") {
  SolverConfig c = small_config();
  c.multistart = 1;
  c.initial = RadialField::zeros(RadialGrid::build(c.n, c.r_max), 1);
  try {
    minimize(make_logarithmic(1), c);
    FAIL("expected infeasible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::infeasible);
  }
}

TEST_CASE("an exhausted iteration budget carries the best attempt") {
  SolverConfig c = small_config();
  c.multistart = 1;
  c.max_outer = 1;
  c.max_inner = 5;
  try {
    minimize(make_logarithmic(1), c);
    FAIL("expected convergence error");
  } catch (const ConvergenceError& e) {
    CHECK(e.kind() == ErrorKind::convergence);
    REQUIRE(e.best());
    CHECK(e.best()->T_estimate > 0.0);
    CHECK_FALSE(e.best()->starts.front().converged);
  }
}

TEST_CASE("the initial seed is resampled onto the solver grid") {
  SolverConfig c = small_config();
  c.multistart = 1;
  c.initial = gaussian(RadialGrid::build(64, 12.0), 1.0, 1.2);
  const GroundStateResult res = minimize(make_logarithmic(1), c);
  CHECK(res.starts.front().from_initial);
  CHECK(rel(res.T_estimate, 211.004) <= 1e-4);
}

TEST_CASE("an unpolished ground state is flagged when its residual is large") {
  SolverConfig c = small_config();
  c.multistart = 1;
  c.polish = false;
  const GroundStateResult res = minimize(make_logarithmic(1), c);
  CHECK_FALSE(res.polished);
  CHECK(res.pde_residual > 1e-4);
  bool flagged = false;
  for (const auto& w : res.warnings) flagged = flagged || w.find("pde residual") != std::string::npos;
  CHECK(flagged);
}
