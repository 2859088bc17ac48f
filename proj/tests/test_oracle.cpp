#include "doctest.h"

#include "bhgs/error.hpp"
#include "bhgs/gaussian_oracle.hpp"
#include "support.hpp"

using namespace bhgs;
using namespace testing;

TEST_CASE("moments reproduce tabulated values") {
  CHECK(oracle::moments(1, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(oracle::moments(3, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(oracle::moments(5, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(oracle::moments(0, 1.0) == doctest::Approx(std::sqrt(pi) / 2.0).epsilon(1e-15));
}

TEST_CASE("half-integer gamma agrees with std::tgamma") {
  for (int k = 0; k <= 30; ++k) {
    CHECK(rel(oracle::half_integer_gamma(k), std::tgamma(0.5 * (k + 1))) <= 1e-13);
  }
}

TEST_CASE("moments scale as alpha^{-(k+1)/2}") {
  for (int k = 0; k <= 9; ++k) {
    for (double alpha : {0.25, 0.5, 2.0, 7.0}) {
      const double want = 0.5 * std::pow(alpha, -0.5 * (k + 1)) * std::tgamma(0.5 * (k + 1));
      CHECK(rel(oracle::moments(k, alpha), want) <= 1e-13);
    }
  }
}

TEST_CASE("moments reject invalid parameters") {
  CHECK_THROWS_AS(oracle::moments(-1, 1.0), Error);
  CHECK_THROWS_AS(oracle::moments(2, 0.0), Error);
  CHECK_THROWS_AS(oracle::moments(2, -1.0), Error);
  try {
    oracle::moments(2, -1.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parameter);
  }
}

TEST_CASE("closed forms on the unit Gaussian") {
  const EnergyReport r = oracle::closed_form_report({1.0, 1.0});
  const double pi2 = pi * pi;
  CHECK(rel(r.K, 3.0 * pi2) <= 1e-14);
  CHECK(rel(r.l2_sq, pi2) <= 1e-14);
  CHECK(rel(r.grad_sq, 2.0 * pi2) <= 1e-14);
  CHECK(rel(r.hess_sq, 6.0 * pi2) <= 1e-14);
  CHECK(rel(r.entropy, -pi2) <= 1e-14);
  CHECK(rel(r.V, -pi2) <= 1e-14);
  CHECK(rel(r.S, 4.0 * pi2) <= 1e-14);
}

TEST_CASE("closed forms vanish for zero amplitude") {
  const EnergyReport r = oracle::closed_form_report({0.0, 1.0});
  CHECK(r.K == 0.0);
  CHECK(r.l2_sq == 0.0);
  CHECK(r.grad_sq == 0.0);
  CHECK(r.hess_sq == 0.0);
  CHECK(r.entropy == 0.0);
}

TEST_CASE("closed forms follow the d = 4 scaling exponents") {
  for (double s : {0.5, 0.8, 1.7, 2.0}) {
    const EnergyReport r = oracle::closed_form_report({1.0, s});
    CHECK(rel(r.K, 3.0 * pi * pi) <= 1e-14);
    CHECK(rel(r.l2_sq, std::pow(s, 4) * pi * pi) <= 1e-14);
    CHECK(rel(r.grad_sq, s * s * 2.0 * pi * pi) <= 1e-14);
  }
}

TEST_CASE("normalized Gaussian has both classical log-Sobolev sides at -(1 + ln pi)") {
  const EnergyReport r = oracle::closed_form_report({1.0 / pi, 1.0});
  CHECK(rel(r.l2_sq, 1.0) <= 1e-14);
  const double lhs = std::log(r.grad_sq / (2.0 * pi * e));
  CHECK(lhs == doctest::Approx(-(1.0 + std::log(pi))).epsilon(1e-14));
  CHECK(r.entropy == doctest::Approx(-(1.0 + std::log(pi))).epsilon(1e-14));
}
