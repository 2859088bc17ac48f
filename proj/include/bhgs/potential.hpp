#pragma once

#include "json.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace bhgs {

enum class PotentialKind { logarithmic, defocusing_well, table, custom };

const char* to_string(PotentialKind kind) noexcept;

/// A potential G : R^m -> R with gradient g, plus witnesses for its sign structure:
/// G < 0 on 0 < |u| <= epsilon, and G(u0) > 0.
class PotentialModel {
 public:
  using Vector = Eigen::VectorXd;
  using VectorRef = Eigen::Ref<const Eigen::VectorXd>;
  using ScalarFn = std::function<double(const VectorRef&)>;
  using GradientFn = std::function<Vector(const VectorRef&)>;
  using JacobianFn = std::function<Eigen::MatrixXd(const VectorRef&)>;

  PotentialModel(std::string name, PotentialKind kind, std::size_t m, ScalarFn potential,
                 GradientFn gradient, double epsilon, Vector u0,
                 std::map<std::string, double> params = {}, JacobianFn jacobian = {},
                 bool isotropic = true);

  const std::string& name() const noexcept { return name_; }
  PotentialKind kind() const noexcept { return kind_; }
  std::size_t components() const noexcept { return m_; }
  double epsilon() const noexcept { return epsilon_; }
  const Vector& u0() const noexcept { return u0_; }
  const std::map<std::string, double>& params() const noexcept { return params_; }
  bool isotropic() const noexcept { return isotropic_; }

  double G(const VectorRef& u) const { return potential_(u); }
  Vector g(const VectorRef& u) const { return gradient_(u); }
  /// Jacobian of g; central differences when no closed form was supplied.
  Eigen::MatrixXd dg(const VectorRef& u) const;

  /// JSON description {name, kind, m, params[, table]} accepted by potential_from_spec.
  nlohmann::json spec() const { return spec_; }
  void set_spec(nlohmann::json spec) { spec_ = std::move(spec); }

 private:
  std::string name_;
  PotentialKind kind_;
  std::size_t m_;
  ScalarFn potential_;
  GradientFn gradient_;
  JacobianFn jacobian_;
  double epsilon_;
  Vector u0_;
  std::map<std::string, double> params_;
  bool isotropic_;
  nlohmann::json spec_;
};

/// G(u) = |u|^2 ln|u|, g(u) = u (2 ln|u| + 1), both 0 at u = 0.
PotentialModel make_logarithmic(std::size_t m);

/// G(u) = -|u|^2 / 2 + |u|^p / p for p > 2.
PotentialModel make_defocusing_well(std::size_t m, double p);

/// Isotropic G(u) = h(|u|) with h a monotone cubic (PCHIP) through (t_k, G_k).
/// Needs t_0 = 0, G_0 = 0, at least four knots; extended linearly past the last knot.
PotentialModel make_table(std::size_t m, std::vector<double> t, std::vector<double> values,
                          std::string name = "table");

/// Builds a potential from {name, kind: "logarithmic"|"defocusing_well"|"table", m, params,
/// table: {t: [...], G: [...]}}.
PotentialModel potential_from_spec(const nlohmann::json& spec);

struct ValidationReport {
  bool passed = true;
  std::vector<std::string> violations;
  std::size_t points_checked = 0;
  double max_gradient_error = 0.0;
  std::vector<std::string> notes;
};

/// Densely samples the sign conditions near 0, checks G(0) = g(0) = 0, G(u0) > 0 and
/// g against central differences of G. Throws ErrorKind::admissibility naming the
/// first failed condition.
ValidationReport validate(const PotentialModel& model, std::size_t samples,
                          std::uint64_t seed = 20240601);

/// Same checks without throwing.
ValidationReport inspect(const PotentialModel& model, std::size_t samples,
                         std::uint64_t seed = 20240601);

}  // namespace bhgs
