#include "doctest.h"

#include "bhgs/error.hpp"
#include "bhgs/inequalities.hpp"
#include "bhgs/potential.hpp"
#include "bhgs/solver.hpp"
#include "support.hpp"

using namespace bhgs;
using namespace testing;

namespace {

ErrorKind kind_of(auto&& call) {
  try {
    call();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::parameter;
}

const GridPtr& grid() {
  static const GridPtr g = RadialGrid::build(128, 16.0);
  return g;
}

}  // namespace

TEST_CASE("classical log-Sobolev is an equality on the normalized Gaussian") {
  const InequalityReport r = classical_lsi(gaussian(grid(), 1.0 / pi));
  const double both = -(1.0 + std::log(pi));
  CHECK(r.lhs == doctest::Approx(both).epsilon(1e-8));
  CHECK(r.rhs == doctest::Approx(both).epsilon(1e-8));
  CHECK(std::abs(r.gap) <= 1e-6);
  CHECK(r.satisfied);
  CHECK(r.name == "classical_lsi");
}

TEST_CASE("classical log-Sobolev is strict off the Gaussian family") {
  const RadialField wide = normalized(dilate(gaussian(grid()), 1.3));
  const InequalityReport a = classical_lsi(wide);
  CHECK(a.gap > 0.0);
  const RadialField algebraic =
      normalized(RadialField::sample(grid(), [](double r) { return std::pow(1.0 + r * r, -3.0); }));
  const InequalityReport b = classical_lsi(algebraic);
  CHECK(b.gap > 1e-3);
  CHECK(b.satisfied);
}

TEST_CASE("log-Sobolev checks require a normalized field") {
  CHECK(kind_of([] { classical_lsi(gaussian(grid())); }) == ErrorKind::normalization);
  CHECK(kind_of([] { biharmonic_lsi(gaussian(grid()), 100.0); }) == ErrorKind::normalization);
  CHECK(kind_of([] { biharmonic_lsi(gaussian(grid(), 1.0 / pi), 0.0); }) == ErrorKind::parameter);
  CHECK(kind_of([] { normalized(RadialField::zeros(grid(), 1)); }) == ErrorKind::degenerate);
}

TEST_CASE("biharmonic bound on the normalized Gaussian") {
  const RadialField u = gaussian(grid(), 1.0 / pi);
  const double pe2 = pi * pi * e * e;
  // hess_sq = 6 and entropy = -(1 + ln pi) in closed form.
  const InequalityReport half = biharmonic_lsi(u, pe2 / 2.0);
  CHECK(half.gap == doctest::Approx(0.5 * std::log(6.0)).epsilon(1e-7));
  const InequalityReport twice = biharmonic_lsi(u, 2.0 * pe2);
  CHECK(twice.gap == doctest::Approx(0.5 * std::log(6.0) - std::log(2.0)).epsilon(1e-7));
  CHECK(twice.gap > 0.0);
  const InequalityReport computed = biharmonic_lsi(u, 211.004);
  CHECK(computed.gap > 0.0);
  CHECK(computed.context.at("T") == 211.004);
}

TEST_CASE("interpolation inequality on the Gaussian") {
  const InequalityReport r = interpolation(gaussian(grid()));
  CHECK(r.lhs == doctest::Approx(2.0 * pi * pi).epsilon(1e-8));
  CHECK(r.rhs == doctest::Approx(std::sqrt(6.0) * pi * pi).epsilon(1e-8));
  CHECK(std::abs(r.context.at("ratio").get<double>() - 2.0 / std::sqrt(6.0)) <= 1e-6);
  CHECK(r.strict);
  CHECK(r.satisfied);
  CHECK(r.gap == doctest::Approx(r.rhs - r.lhs));
  CHECK(kind_of([] { interpolation(RadialField::zeros(grid(), 1)); }) == ErrorKind::degenerate);
}

TEST_CASE("interpolation ratio is dilation invariant") {
  FieldGenerator gen(5);
  for (int k = 0; k < 20; ++k) {
    const RadialField u = gen(grid());
    const double ratio = interpolation(u).context.at("ratio").get<double>();
    for (double s : {0.6, 1.4}) {
      const double scaled = interpolation(dilate(u, s)).context.at("ratio").get<double>();
      CHECK(std::abs(scaled - ratio) <= 1e-6);
    }
  }
}

TEST_CASE("interpolation holds strictly on random fields") {
  FieldGenerator gen(17);
  for (int k = 0; k < 100; ++k) {
    const InequalityReport r = interpolation(gen(grid(), 1 + k % 2));
    CHECK(r.satisfied);
    CHECK(r.gap > 0.0);
  }
}

TEST_CASE("constant bound") {
  const double boundary = pi * pi * e * e / 2.0;
  CHECK_FALSE(constant_bound(36.0).satisfied);
  CHECK_FALSE(constant_bound(boundary).satisfied);
  CHECK(constant_bound(boundary * (1.0 + 1e-12)).satisfied);
  const InequalityReport r = constant_bound(211.004);
  CHECK(r.satisfied);
  CHECK(r.strict);
  CHECK(r.lhs == 2.0 * 211.004);
  CHECK(r.rhs == doctest::Approx(2.0 * boundary));
}

TEST_CASE("scaling a field by mu shifts V by mu^2 ln mu int |u|^2") {
  const PotentialModel log = make_logarithmic(1);
  FieldGenerator gen(23);
  for (int k = 0; k < 20; ++k) {
    const RadialField u = gen(grid());
    const double mu = gen.uniform(0.2, 5.0);
    const double want = mu * mu * (potential_energy(u, log) + std::log(mu) * l2_sq(u));
    CHECK(potential_energy(u.scaled(mu), log) == doctest::Approx(want).epsilon(1e-10));
  }
  const RadialField u = normalized(gen(grid()));
  CHECK(std::abs(potential_energy(u.scaled(std::exp(-entropy(u))), log)) <= 1e-12);
}

TEST_CASE("a Gaussian is not an extremizer of the biharmonic bound") {
  const PotentialModel log = make_logarithmic(1);
  CHECK(kind_of([&] { reconstruct_groundstate(gaussian(grid(), 1.0 / pi), log, 211.004); }) ==
        ErrorKind::not_extremizer);
  CHECK(kind_of([&] { reconstruct_groundstate(gaussian(grid(), 1.0 / pi), make_defocusing_well(1, 4.0), 211.0); }) ==
        ErrorKind::parameter);
}

TEST_CASE("the computed ground state reconstructs itself") {
  SolverConfig c;
  c.n = 96;
  c.multistart = 1;
  c.threads = 1;
  const PotentialModel log = make_logarithmic(1);
  const GroundStateResult res = minimize(log, c);
  const RadialField u = normalized(res.groundstate);
  const InequalityReport b = biharmonic_lsi(u, res.T_estimate);
  CHECK(std::abs(b.gap) <= 1e-4);
  const Reconstruction rec = reconstruct_groundstate(u, log, res.T_estimate);
  CHECK(rec.equality.satisfied);
  CHECK(rec.mu == doctest::Approx(std::sqrt(l2_sq(res.groundstate))).epsilon(1e-6));
  CHECK(rec.lambda == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(rec.r == doctest::Approx(std::pow(rec.lambda, 0.25)));
  CHECK(std::abs(rec.scaled_potential) <= 1e-6);
  CHECK(std::isfinite(rec.pde_residual));
  CHECK((rec.candidate.values() - res.groundstate.values()).cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("fuzz corpus is fixed by its seed") {
  const auto a = fuzz_corpus(grid(), 30, 9);
  const auto b = fuzz_corpus(grid(), 30, 9);
  const auto c = fuzz_corpus(grid(), 30, 10);
  REQUIRE(a.size() == 30);
  bool differs = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].values() == b[k].values());
    differs = differs || a[k].values() != c[k].values();
  }
  CHECK(differs);
}

TEST_CASE("report serialization") {
  const nlohmann::json j = constant_bound(100.0).to_json();
  CHECK(j.at("name") == "constant_bound");
  CHECK(j.at("satisfied") == true);
  CHECK(j.at("context").at("T") == 100.0);
  for (const char* key : {"lhs", "rhs", "gap", "tol", "strict"}) CHECK(j.contains(key));
}

TEST_CASE("log-Sobolev bounds hold across the fuzz corpus") {
  // Ground-state value of T for the logarithmic potential at n = 128, R_max = 16.
  const double T = 211.00397;
  std::size_t checked = 0;
  for (const RadialField& f : fuzz_corpus(grid(), 500, 20240601)) {
    const RadialField u = normalized(f);
    CHECK(classical_lsi(u).gap >= -1e-6);
    CHECK(biharmonic_lsi(u, T).gap >= -1e-4);
    CHECK(interpolation(f).gap > 0.0);
    ++checked;
  }
  CHECK(checked == 500);
}
