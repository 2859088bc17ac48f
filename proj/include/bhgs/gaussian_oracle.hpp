#pragma once

#include "bhgs/calculus.hpp"

namespace bhgs::oracle {

/// w(r) = a exp(-r^2 / (2 sigma^2)).
struct GaussianProfile {
  double a = 1.0;
  double sigma = 1.0;

  double operator()(double r) const;
};

/// Gamma((k+1)/2) for integer k >= 0, from Gamma(1/2) = sqrt(pi) and Gamma(1) = 1.
double half_integer_gamma(int k);

/// int_0^inf r^k exp(-alpha r^2) dr = 1/2 alpha^{-(k+1)/2} Gamma((k+1)/2).
double moments(int k, double alpha);

/// Closed forms of every functional on a Gaussian profile, with V and S taken for
/// the logarithmic potential (V = entropy).
EnergyReport closed_form_report(const GaussianProfile& p);

}  // namespace bhgs::oracle
