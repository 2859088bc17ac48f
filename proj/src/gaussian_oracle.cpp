#include "bhgs/gaussian_oracle.hpp"

#include "bhgs/error.hpp"

#include <cmath>
#include <numbers>

namespace bhgs::oracle {

using std::numbers::pi;

double GaussianProfile::operator()(double r) const {
  return a * std::exp(-r * r / (2.0 * sigma * sigma));
}

double half_integer_gamma(int k) {
  if (k < 0) fail(ErrorKind::parameter, "moment order must be non-negative");
  // Gamma(x + 1) = x Gamma(x), starting from x = 1/2 (k even) or x = 1 (k odd).
  double x = (k % 2 == 0) ? 0.5 : 1.0;
  double value = (k % 2 == 0) ? std::sqrt(pi) : 1.0;
  const double target = 0.5 * static_cast<double>(k + 1);
  while (x < target) {
    value *= x;
    x += 1.0;
  }
  return value;
}

double moments(int k, double alpha) {
  if (k < 0 || !(alpha > 0.0) || !std::isfinite(alpha)) {
    fail(ErrorKind::parameter, "moments need k >= 0 and alpha > 0");
  }
  return 0.5 * std::pow(alpha, -0.5 * static_cast<double>(k + 1)) * half_integer_gamma(k);
}

EnergyReport closed_form_report(const GaussianProfile& p) {
  if (!(p.sigma > 0.0)) fail(ErrorKind::parameter, "Gaussian width must be positive");
  EnergyReport out;
  if (p.a == 0.0) return out;

  // Every integrand is a polynomial in r times a^2 exp(-r^2 / sigma^2) times the
  // 2 pi^2 r^3 measure; alpha is the exponent of the squared profile.
  const double alpha = 1.0 / (p.sigma * p.sigma);
  const double s2 = p.sigma * p.sigma;
  const double s4 = s2 * s2;
  const double measure = 2.0 * pi * pi * p.a * p.a;
  auto m = [alpha](int k) { return moments(k, alpha); };

  out.l2_sq = measure * m(3);
  // w' = -(r / sigma^2) w
  out.grad_sq = measure * m(5) / s4;
  // Delta w = (r^2 / sigma^4 - 4 / sigma^2) w
  const double lap_sq = measure * (m(7) / (s4 * s4) - 8.0 * m(5) / (s4 * s2) + 16.0 * m(3) / s4);
  out.K = 0.5 * lap_sq;
  // (w'')^2 + 3 (w'/r)^2 = (r^4 / sigma^8 - 2 r^2 / sigma^6 + 4 / sigma^4) w^2
  out.hess_sq = measure * (m(7) / (s4 * s4) - 2.0 * m(5) / (s4 * s2) + 4.0 * m(3) / s4);
  // ln|w| = ln|a| - r^2 / (2 sigma^2)
  out.entropy = std::log(std::abs(p.a)) * out.l2_sq - measure * m(5) / (2.0 * s2);
  out.V = out.entropy;
  out.S = out.K - out.V;
  out.pohozaev_residual = std::abs(out.V);
  return out;
}

}  // namespace bhgs::oracle
