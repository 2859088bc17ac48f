#include "bhgs/calculus.hpp"

#include "bhgs/error.hpp"

#include <cmath>
#include <vector>

namespace bhgs {

namespace {

// Relative level above which mass pushed past R_max counts as truncation.
constexpr double truncation_level = 1e-6;

Eigen::MatrixXd laplacian_values(const RadialField& f) {
  const auto& grid = f.grid();
  Eigen::MatrixXd out(f.values().rows(), f.values().cols());
  for (Eigen::Index k = 0; k < out.cols(); ++k) out.col(k) = grid.apply_laplacian(f.values().col(k));
  return out;
}

}  // namespace

RadialField laplacian(const RadialField& f) {
  return RadialField(f.grid_ptr(), laplacian_values(f), f.truncated());
}

double integrate(const RadialGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& f) {
  return grid.integrate(f);
}

double laplacian_sq(const RadialField& f) {
  const Eigen::MatrixXd lap = laplacian_values(f);
  return f.grid().integrate(lap.rowwise().squaredNorm());
}

double energy_K(const RadialField& f) { return 0.5 * laplacian_sq(f); }

double hessian_sq(const RadialField& f) {
  const auto& grid = f.grid();
  const auto& r = grid.nodes();
  const Eigen::Index n = r.size();
  Eigen::VectorXd density = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < f.values().cols(); ++k) {
    const Eigen::VectorXd d1 = grid.apply_d1(f.values().col(k));
    const Eigen::VectorXd d2 = grid.apply_d2(f.values().col(k));
    density(0) += 4.0 * d2(0) * d2(0);
    for (Eigen::Index i = 1; i < n; ++i) {
      const double radial = d1(i) / r(i);
      density(i) += d2(i) * d2(i) + 3.0 * radial * radial;
    }
  }
  return grid.integrate(density);
}

double grad_sq(const RadialField& f) {
  const auto& grid = f.grid();
  Eigen::VectorXd density = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
  for (Eigen::Index k = 0; k < f.values().cols(); ++k) {
    density += grid.apply_d1(f.values().col(k)).array().square().matrix();
  }
  return grid.integrate(density);
}

double l2_sq(const RadialField& f) {
  return f.grid().integrate(f.values().rowwise().squaredNorm());
}

double entropy(const RadialField& f) {
  const Eigen::VectorXd norms = f.norms();
  Eigen::VectorXd density(norms.size());
  for (Eigen::Index i = 0; i < norms.size(); ++i) {
    const double t = norms(i);
    density(i) = t < entropy_floor ? 0.0 : t * t * std::log(t);
  }
  return f.grid().integrate(density);
}

double inner(const RadialField& a, const RadialField& b) {
  if (a.grid_ptr() != b.grid_ptr() && (a.size() != b.size() || a.grid().r_max() != b.grid().r_max())) {
    fail(ErrorKind::parameter, "inner product of fields on different grids");
  }
  if (a.components() != b.components()) fail(ErrorKind::parameter, "component count mismatch");
  return a.grid().integrate(a.values().cwiseProduct(b.values()).rowwise().sum());
}

RadialField dilate(const RadialField& f, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) fail(ErrorKind::parameter, "dilation factor must be positive");
  const auto& grid = f.grid();
  const auto& r = grid.nodes();
  const double r_max = grid.r_max();
  if (s == 1.0) return f;

  std::vector<double> sources;
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double src = r(i) / s;
    if (src <= r_max) {
      sources.push_back(src);
      rows.push_back(i);
    }
  }
  const Eigen::MatrixXd interp = grid.interpolation_matrix(sources);
  const Eigen::MatrixXd resampled = interp * f.values();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(f.values().rows(), f.values().cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.row(rows[k]) = resampled.row(static_cast<Eigen::Index>(k));
  }

  bool truncated = f.truncated();
  if (s > 1.0) {
    const Eigen::VectorXd norms = f.norms();
    const double peak = norms.maxCoeff();
    double lost = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      if (r(i) > r_max / s) lost = std::max(lost, norms(i));
    }
    if (peak > 0.0 && lost > truncation_level * peak) truncated = true;
  }
  return RadialField(f.grid_ptr(), std::move(out), truncated);
}

}  // namespace bhgs
