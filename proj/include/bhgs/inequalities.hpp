#pragma once

#include "bhgs/calculus.hpp"
#include "bhgs/potential.hpp"

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bhgs {

/// Both sides of one inequality. satisfied <=> gap >= -tol, except for strict
/// inequalities where satisfied <=> gap > 0.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double tol = 0.0;
  bool strict = false;
  bool satisfied = false;
  nlohmann::json context = nlohmann::json::object();

  nlohmann::json to_json() const;
};

/// Fields passed to the log-Sobolev checks must satisfy |int |u|^2 - 1| <= this.
inline constexpr double normalization_tolerance = 1e-8;
inline constexpr double classical_lsi_tolerance = 1e-6;
inline constexpr double biharmonic_lsi_tolerance = 1e-4;
/// |gap| below which a normalized field counts as an equality case of the biharmonic bound.
inline constexpr double equality_tolerance = 1e-4;

/// u / ||u||_2.
RadialField normalized(const RadialField& u);

/// ln(int |grad u|^2 / (2 pi e)) >= int |u|^2 ln|u| for int |u|^2 = 1.
InequalityReport classical_lsi(const RadialField& u);

/// 1/2 ln(int |D^2 u|^2 / (2T)) >= int |u|^2 ln|u| for int |u|^2 = 1.
InequalityReport biharmonic_lsi(const RadialField& u, double T);

/// int |grad u|^2 < (int |Delta u|^2)^{1/2} (int |u|^2)^{1/2}, strictly.
InequalityReport interpolation(const RadialField& u);

/// 2T > (pi e)^2, strictly.
InequalityReport constant_bound(double T);

struct Reconstruction {
  double mu = 0.0;
  double r = 0.0;
  double lambda = 0.0;
  /// V(mu u) for the logarithmic potential.
  double scaled_potential = 0.0;
  RadialField candidate;
  double pde_residual = 0.0;
  InequalityReport equality;
};

/// Equality case of the biharmonic bound: mu = exp(-int |u|^2 ln|u|) makes V(mu u) = 0,
/// lambda comes from mu u, and candidate(x) = mu u(r x) with r = lambda^{1/4} solves
/// Delta^2 v = g(v). Throws ErrorKind::not_extremizer when |gap| > equality_tolerance.
Reconstruction reconstruct_groundstate(const RadialField& u, const PotentialModel& potential,
                                       double T);

/// Radial Gaussian mixtures sum_k a_k exp(-r^2 / (2 sigma_k^2)) with 1 to 4 terms,
/// a_k in [-2, 2] and sigma_k in [0.3, 2]; fixed by the seed.
std::vector<RadialField> fuzz_corpus(const GridPtr& grid, std::size_t count, std::uint64_t seed);

}  // namespace bhgs
