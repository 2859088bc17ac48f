#include "bhgs/inequalities.hpp"

#include "bhgs/error.hpp"
#include "bhgs/solver.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace bhgs {

namespace {

using std::numbers::e;
using std::numbers::pi;

void require_normalized(const RadialField& u, const char* what) {
  const double l2 = l2_sq(u);
  if (!(std::abs(l2 - 1.0) <= normalization_tolerance)) {
    std::ostringstream os;
    os << what << " needs int |u|^2 = 1, got " << l2;
    fail(ErrorKind::normalization, os.str());
  }
}

InequalityReport make_report(std::string name, double lhs, double rhs, double tol, bool strict) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.gap = lhs - rhs;
  r.tol = tol;
  r.strict = strict;
  r.satisfied = strict ? r.gap > 0.0 : r.gap >= -tol;
  return r;
}

}  // namespace

nlohmann::json InequalityReport::to_json() const {
  return {{"name", name},   {"lhs", lhs},       {"rhs", rhs},         {"gap", gap},
          {"tol", tol},     {"strict", strict}, {"satisfied", satisfied}, {"context", context}};
}

RadialField normalized(const RadialField& u) {
  const double l2 = l2_sq(u);
  if (!(l2 > 0.0)) fail(ErrorKind::degenerate, "cannot normalize the zero field");
  return u.scaled(1.0 / std::sqrt(l2));
}

InequalityReport classical_lsi(const RadialField& u) {
  require_normalized(u, "classical log-Sobolev check");
  const double grad = grad_sq(u);
  if (!(grad > 0.0)) fail(ErrorKind::degenerate, "int |grad u|^2 vanishes");
  InequalityReport r = make_report("classical_lsi", std::log(grad / (2.0 * pi * e)), entropy(u),
                                   classical_lsi_tolerance, false);
  r.context = {{"grad_sq", grad}, {"l2_sq", l2_sq(u)}};
  return r;
}

InequalityReport biharmonic_lsi(const RadialField& u, double T) {
  if (!(T > 0.0) || !std::isfinite(T)) fail(ErrorKind::parameter, "T must be positive");
  require_normalized(u, "biharmonic log-Sobolev check");
  const double hess = hessian_sq(u);
  if (!(hess > 0.0)) fail(ErrorKind::degenerate, "int |D^2 u|^2 vanishes");
  InequalityReport r = make_report("biharmonic_lsi", 0.5 * std::log(hess / (2.0 * T)), entropy(u),
                                   biharmonic_lsi_tolerance, false);
  r.context = {{"T", T}, {"hess_sq", hess}, {"l2_sq", l2_sq(u)}};
  return r;
}

InequalityReport interpolation(const RadialField& u) {
  const double l2 = l2_sq(u);
  if (!(l2 > 0.0)) fail(ErrorKind::degenerate, "interpolation inequality needs u != 0");
  const double lap = laplacian_sq(u);
  const double grad = grad_sq(u);
  InequalityReport r = make_report("interpolation", grad, std::sqrt(lap * l2), 0.0, true);
  // Strictness is stated as rhs > lhs.
  r.gap = r.rhs - r.lhs;
  r.satisfied = r.gap > 0.0;
  r.context = {{"laplacian_sq", lap}, {"l2_sq", l2}, {"ratio", grad / r.rhs}};
  return r;
}

InequalityReport constant_bound(double T) {
  InequalityReport r = make_report("constant_bound", 2.0 * T, (pi * e) * (pi * e), 0.0, true);
  r.context = {{"T", T}};
  return r;
}

Reconstruction reconstruct_groundstate(const RadialField& u, const PotentialModel& potential,
                                       double T) {
  if (potential.kind() != PotentialKind::logarithmic) {
    fail(ErrorKind::parameter, "reconstruction needs the logarithmic potential");
  }
  InequalityReport equality = biharmonic_lsi(u, T);
  equality.name = "equality_case";
  equality.tol = equality_tolerance;
  equality.satisfied = std::abs(equality.gap) <= equality_tolerance;
  if (!equality.satisfied) {
    std::ostringstream os;
    os << "not an extremizer: biharmonic log-Sobolev gap " << equality.gap << " exceeds "
       << equality_tolerance;
    fail(ErrorKind::not_extremizer, os.str());
  }

  const double V = entropy(u);
  const double mu = std::exp(-V);
  const RadialField scaled = u.scaled(mu);
  const double scaled_V = potential_energy(scaled, potential);
  if (!(std::abs(scaled_V) <= 1e-6 * std::max(1.0, mu * mu))) {
    std::ostringstream os;
    os << "V(mu u) = " << scaled_V << " does not vanish";
    fail(ErrorKind::not_extremizer, os.str());
  }
  const double lambda = extract_lambda(scaled, potential);
  RadialField candidate = rescale_to_groundstate(scaled, lambda);
  const double residual = pde_residual(candidate, potential);
  equality.context["mu"] = mu;
  equality.context["lambda"] = lambda;
  return Reconstruction{
      .mu = mu,
      .r = std::pow(lambda, 0.25),
      .lambda = lambda,
      .scaled_potential = scaled_V,
      .candidate = std::move(candidate),
      .pde_residual = residual,
      .equality = std::move(equality),
  };
}

std::vector<RadialField> fuzz_corpus(const GridPtr& grid, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> terms(1, 4);
  std::uniform_real_distribution<double> amplitude(-2.0, 2.0);
  std::uniform_real_distribution<double> width(0.3, 2.0);
  const auto& r = grid->nodes();
  std::vector<RadialField> out;
  out.reserve(count);
  while (out.size() < count) {
    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(r.size(), 1);
    const int k = terms(rng);
    for (int t = 0; t < k; ++t) {
      const double a = amplitude(rng);
      const double s = width(rng);
      values.col(0) += a * (-(r.array().square()) / (2.0 * s * s)).exp().matrix();
    }
    if (values.cwiseAbs().maxCoeff() < 1e-3) continue;
    out.emplace_back(grid, std::move(values));
  }
  return out;
}

}  // namespace bhgs
