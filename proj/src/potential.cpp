#include "bhgs/potential.hpp"

#include "bhgs/error.hpp"

#include <cmath>

// Boost 1.74's pchip header calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <memory>
#include <random>
#include <sstream>

namespace bhgs {

namespace {

constexpr double log_floor = 1e-150;
constexpr double gradient_tolerance = 1e-5;

Eigen::VectorXd first_axis(std::size_t m, double length) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  v(0) = length;
  return v;
}

Eigen::VectorXd random_direction(std::mt19937_64& rng, std::size_t m) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(static_cast<Eigen::Index>(m));
  do {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

std::string describe(double t) {
  std::ostringstream out;
  out.precision(6);
  out << t;
  return out.str();
}

}  // namespace

const char* to_string(PotentialKind kind) noexcept {
  switch (kind) {
    case PotentialKind::logarithmic: return "logarithmic";
    case PotentialKind::defocusing_well: return "defocusing_well";
    case PotentialKind::table: return "table";
    case PotentialKind::custom: return "custom";
  }
  return "unknown";
}

PotentialModel::PotentialModel(std::string name, PotentialKind kind, std::size_t m,
                               ScalarFn potential, GradientFn gradient, double epsilon,
                               Vector u0, std::map<std::string, double> params,
                               JacobianFn jacobian, bool isotropic)
    : name_(std::move(name)),
      kind_(kind),
      m_(m),
      potential_(std::move(potential)),
      gradient_(std::move(gradient)),
      jacobian_(std::move(jacobian)),
      epsilon_(epsilon),
      u0_(std::move(u0)),
      params_(std::move(params)),
      isotropic_(isotropic) {
  if (m_ < 1) fail(ErrorKind::parameter, "potential needs m >= 1");
  if (!potential_ || !gradient_) fail(ErrorKind::parameter, "potential needs G and g");
  if (!(epsilon_ > 0.0)) fail(ErrorKind::parameter, "epsilon must be positive");
  if (u0_.size() != static_cast<Eigen::Index>(m_)) fail(ErrorKind::parameter, "u0 has wrong dimension");
  spec_ = {{"name", name_}, {"kind", to_string(kind_)}, {"m", m_}, {"params", params_}};
}

Eigen::MatrixXd PotentialModel::dg(const VectorRef& u) const {
  if (jacobian_) return jacobian_(u);
  const Eigen::Index m = u.size();
  Eigen::MatrixXd jac(m, m);
  const double scale = std::max(u.norm(), 1e-12);
  const double h = 1e-6 * scale;
  Vector shifted = u;
  for (Eigen::Index j = 0; j < m; ++j) {
    shifted(j) = u(j) + h;
    const Vector up = gradient_(shifted);
    shifted(j) = u(j) - h;
    const Vector down = gradient_(shifted);
    shifted(j) = u(j);
    jac.col(j) = (up - down) / (2.0 * h);
  }
  return jac;
}

PotentialModel make_logarithmic(std::size_t m) {
  if (m < 1) fail(ErrorKind::parameter, "logarithmic potential needs m >= 1");
  auto G = [](const PotentialModel::VectorRef& u) {
    const double t = u.norm();
    return t < log_floor ? 0.0 : t * t * std::log(t);
  };
  auto g = [](const PotentialModel::VectorRef& u) -> Eigen::VectorXd {
    const double t = u.norm();
    if (t < log_floor) return Eigen::VectorXd::Zero(u.size());
    return u * (2.0 * std::log(t) + 1.0);
  };
  auto jac = [](const PotentialModel::VectorRef& u) -> Eigen::MatrixXd {
    const Eigen::Index m = u.size();
    const double t = std::max(u.norm(), log_floor);
    Eigen::MatrixXd j = (2.0 * std::log(t) + 1.0) * Eigen::MatrixXd::Identity(m, m);
    if (u.norm() >= log_floor) j += 2.0 * u * u.transpose() / (t * t);
    return j;
  };
  const double epsilon = std::exp(-0.5) * 0.99;
  return PotentialModel("logarithmic", PotentialKind::logarithmic, m, G, g, epsilon,
                        first_axis(m, 2.0), {}, jac);
}

PotentialModel make_defocusing_well(std::size_t m, double p) {
  if (m < 1) fail(ErrorKind::parameter, "defocusing well needs m >= 1");
  if (!(p > 2.0) || !std::isfinite(p)) fail(ErrorKind::parameter, "defocusing well needs p > 2");
  auto G = [p](const PotentialModel::VectorRef& u) {
    const double t = u.norm();
    return -0.5 * t * t + std::pow(t, p) / p;
  };
  auto g = [p](const PotentialModel::VectorRef& u) -> Eigen::VectorXd {
    const double t = u.norm();
    if (t == 0.0) return Eigen::VectorXd::Zero(u.size());
    return u * (-1.0 + std::pow(t, p - 2.0));
  };
  auto jac = [p](const PotentialModel::VectorRef& u) -> Eigen::MatrixXd {
    const Eigen::Index m = u.size();
    const double t = u.norm();
    if (t == 0.0) return -Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd j = (-1.0 + std::pow(t, p - 2.0)) * Eigen::MatrixXd::Identity(m, m);
    j += (p - 2.0) * std::pow(t, p - 4.0) * u * u.transpose();
    return j;
  };
  const double epsilon = std::min(1.0, std::pow(0.5 * p, 1.0 / (p - 2.0))) * 0.99;
  double radius = std::pow(p, 1.0 / (p - 2.0)) * 1.1;
  while (G(first_axis(m, radius)) <= 0.0) radius *= 1.1;
  PotentialModel model("defocusing_well", PotentialKind::defocusing_well, m, G, g, epsilon,
                       first_axis(m, radius), {{"p", p}}, jac);
  return model;
}

PotentialModel make_table(std::size_t m, std::vector<double> t, std::vector<double> values,
                          std::string name) {
  if (m < 1) fail(ErrorKind::parameter, "table potential needs m >= 1");
  if (t.size() != values.size() || t.size() < 4) {
    fail(ErrorKind::parameter, "table potential needs matching t and G arrays with >= 4 knots");
  }
  if (t.front() != 0.0 || values.front() != 0.0) {
    fail(ErrorKind::parameter, "table potential must start at (0, 0)");
  }
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (!(t[k] > t[k - 1])) fail(ErrorKind::parameter, "table abscissae must increase strictly");
  }

  // Sign witnesses come from the knots: epsilon just inside the first non-negative knot,
  // u0 at the largest tabulated value.
  double epsilon = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (values[k] >= 0.0) {
      epsilon = 0.99 * t[k - 1];
      break;
    }
    epsilon = 0.99 * t[k];
  }
  if (!(epsilon > 0.0)) epsilon = 0.99 * t[1];
  const auto top = std::max_element(values.begin(), values.end()) - values.begin();
  const double u0 = t[static_cast<std::size_t>(top)] > 0.0 ? t[static_cast<std::size_t>(top)] : t.back();

  nlohmann::json table = {{"t", t}, {"G", values}};
  const double t_end = t.back();
  auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(
      std::move(t), std::move(values));
  const double h_end = (*spline)(t_end);
  const double slope_end = spline->prime(t_end);

  auto radial = [spline, t_end, h_end, slope_end](double s) {
    return s <= t_end ? (*spline)(s) : h_end + slope_end * (s - t_end);
  };
  auto radial_prime = [spline, t_end, slope_end](double s) {
    return s <= t_end ? spline->prime(s) : slope_end;
  };
  auto G = [radial](const PotentialModel::VectorRef& u) { return radial(u.norm()); };
  auto g = [radial_prime](const PotentialModel::VectorRef& u) -> Eigen::VectorXd {
    const double s = u.norm();
    if (s == 0.0) return Eigen::VectorXd::Zero(u.size());
    return u * (radial_prime(s) / s);
  };
  PotentialModel model(std::move(name), PotentialKind::table, m, G, g, epsilon, first_axis(m, u0));
  auto spec = model.spec();
  spec["table"] = std::move(table);
  model.set_spec(std::move(spec));
  return model;
}

PotentialModel potential_from_spec(const nlohmann::json& spec) {
  if (!spec.is_object()) fail(ErrorKind::config, "potential spec must be an object");
  if (!spec.contains("kind")) fail(ErrorKind::config, "potential spec lacks 'kind'");
  const std::string kind = spec.at("kind").get<std::string>();
  const std::size_t m = spec.value("m", std::size_t{1});
  const nlohmann::json params = spec.value("params", nlohmann::json::object());
  if (m < 1) fail(ErrorKind::config, "potential spec needs m >= 1");

  try {
    if (kind == "logarithmic") return make_logarithmic(m);
    if (kind == "defocusing_well") {
      const double p = params.value("p", 4.0);
      return make_defocusing_well(m, p);
    }
    if (kind == "table") {
      if (!spec.contains("table")) fail(ErrorKind::config, "table potential lacks 'table'");
      const auto& table = spec.at("table");
      auto model = make_table(m, table.at("t").get<std::vector<double>>(),
                              table.at("G").get<std::vector<double>>(),
                              spec.value("name", std::string("table")));
      return model;
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parameter) fail(ErrorKind::config, e.what());
    throw;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::config, std::string("malformed potential spec: ") + e.what());
  }
  fail(ErrorKind::config, "unknown potential kind '" + kind + "'");
}

ValidationReport inspect(const PotentialModel& model, std::size_t samples, std::uint64_t seed) {
  if (samples < 100) fail(ErrorKind::parameter, "validation needs at least 100 samples");
  ValidationReport report;
  const std::size_t m = model.components();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  std::mt19937_64 rng(seed);

  auto violate = [&](const std::string& what) {
    report.passed = false;
    report.violations.push_back(what);
  };

  if (model.G(zero) != 0.0) violate("G(0) = 0 fails: G(0) = " + describe(model.G(zero)));
  if (model.g(zero).norm() != 0.0) violate("g(0) = 0 fails");

  // Log-spaced radii in (0, epsilon], one random direction each (both signs when m = 1).
  const double eps = model.epsilon();
  const double lo = std::log(eps * 1e-12);
  const double hi = std::log(eps);
  bool negative_ok = true;
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = std::exp(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples - 1));
    const Eigen::VectorXd dir = random_direction(rng, m);
    for (double sign : {1.0, -1.0}) {
      const double value = model.G(sign * t * dir);
      ++report.points_checked;
      if (!(value < 0.0) && negative_ok) {
        negative_ok = false;
        violate("G < 0 on 0 < |u| <= epsilon fails at |u| = " + describe(t));
      }
    }
  }

  if (!(model.G(model.u0()) > 0.0)) violate("G(u0) > 0 fails");

  // Gradient consistency away from the origin.
  std::uniform_real_distribution<double> log_radius(std::log(1e-3), std::log(10.0));
  for (std::size_t k = 0; k < samples; ++k) {
    const Eigen::VectorXd u = std::exp(log_radius(rng)) * random_direction(rng, m);
    const Eigen::VectorXd analytic = model.g(u);
    Eigen::VectorXd numeric(u.size());
    const double h = 1e-6 * u.norm();
    Eigen::VectorXd shifted = u;
    for (Eigen::Index j = 0; j < u.size(); ++j) {
      shifted(j) = u(j) + h;
      const double up = model.G(shifted);
      shifted(j) = u(j) - h;
      const double down = model.G(shifted);
      shifted(j) = u(j);
      numeric(j) = (up - down) / (2.0 * h);
    }
    const double err = (numeric - analytic).norm() / std::max(analytic.norm(), 1e-8);
    report.max_gradient_error = std::max(report.max_gradient_error, err);
    ++report.points_checked;
  }
  if (report.max_gradient_error > gradient_tolerance) {
    violate("g = grad G fails: relative error " + describe(report.max_gradient_error));
  }

  if (!model.isotropic()) report.notes.push_back("anisotropic potential: untested territory");
  return report;
}

ValidationReport validate(const PotentialModel& model, std::size_t samples, std::uint64_t seed) {
  ValidationReport report = inspect(model, samples, seed);
  if (!report.passed) {
    fail(ErrorKind::admissibility, "potential '" + model.name() + "' is not admissible: " +
                                       report.violations.front());
  }
  return report;
}

}  // namespace bhgs
