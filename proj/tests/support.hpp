#pragma once

#include "bhgs/calculus.hpp"
#include "bhgs/radial_grid.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <numbers>
#include <random>

namespace testing {

inline constexpr double pi = std::numbers::pi;
inline constexpr double e = std::numbers::e;

inline double rel(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline bhgs::RadialField gaussian(const bhgs::GridPtr& grid, double a = 1.0, double sigma = 1.0) {
  return bhgs::RadialField::sample(grid, [=](double r) { return a * std::exp(-r * r / (2.0 * sigma * sigma)); });
}

/// Fresh empty directory under the working directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::current_path() / "scratch" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Random smooth decaying radial fields: sums of 1-3 Gaussians and r^2-weighted Gaussians,
/// with m components. Independent of the library's own corpus generator.
class FieldGenerator {
 public:
  explicit FieldGenerator(std::uint64_t seed) : rng_(seed) {}

  bhgs::RadialField operator()(const bhgs::GridPtr& grid, std::size_t m = 1) {
    std::uniform_int_distribution<int> terms(1, 3);
    std::uniform_real_distribution<double> amp(-2.5, 2.5);
    std::uniform_real_distribution<double> width(0.4, 1.8);
    std::bernoulli_distribution poly(0.3);
    const auto& r = grid->nodes();
    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(r.size(), static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k) {
      const int count = terms(rng_);
      for (int t = 0; t < count; ++t) {
        const double a = amp(rng_);
        const double s = width(rng_);
        const bool weighted = poly(rng_);
        for (Eigen::Index i = 0; i < r.size(); ++i) {
          const double x = r(i) / s;
          values(i, static_cast<Eigen::Index>(k)) += a * (weighted ? x * x : 1.0) * std::exp(-0.5 * x * x);
        }
      }
    }
    return bhgs::RadialField(grid, values);
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testing
