#pragma once

#include "bhgs/radial_grid.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>

namespace bhgs {

/// An m-component radial profile w(r) sampled on a RadialGrid; represents u(x) = w(|x|).
///
/// values() is n x m: row i holds w(r_i), column k holds component k.
class RadialField {
 public:
  RadialField(GridPtr grid, Eigen::MatrixXd values, bool truncated = false);

  static RadialField zeros(GridPtr grid, std::size_t m);
  /// Scalar profile sampled from a callable.
  static RadialField sample(GridPtr grid, const std::function<double(double)>& profile);

  const RadialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_->size(); }
  std::size_t components() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  Eigen::VectorXd component(std::size_t k) const { return values_.col(static_cast<Eigen::Index>(k)); }
  /// |w(r_i)| per node.
  Eigen::VectorXd norms() const { return values_.rowwise().norm(); }

  /// Set when a dilation pushed non-negligible mass past R_max.
  bool truncated() const noexcept { return truncated_; }

  RadialField scaled(double c) const { return RadialField(grid_, c * values_, truncated_); }

  /// Largest violation among |w(R)|, |w'(R)| and |w'(0)|.
  double boundary_defect() const;
  /// Orthogonal projection onto profiles with w'(0) = w(R) = w'(R) = 0.
  RadialField with_boundary_conditions() const;

 private:
  GridPtr grid_;
  Eigen::MatrixXd values_;
  bool truncated_ = false;
};

}  // namespace bhgs
