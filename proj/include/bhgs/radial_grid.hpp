#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <span>

namespace bhgs {

/// Chebyshev-Gauss-Lobatto collocation on [0, R_max] for radial functions on R^4.
///
/// Nodes increase from r_0 = 0 to r_{n-1} = R_max. The quadrature weights fold
/// the Clenshaw-Curtis rule together with the 2*pi^2 r^3 measure, so that
/// sum_i w_i f(r_i) approximates the integral of f(|x|) over R^4.
///
/// Differentiation matrices have rows summing to zero exactly (the diagonal is
/// the negated off-diagonal sum). The apply_* methods use that to evaluate
/// sum_j A_ij (f_j - f_i), which keeps round-off proportional to the local
/// variation of f rather than to its magnitude.
class RadialGrid {
 public:
  static constexpr std::size_t min_nodes = 16;

  static std::shared_ptr<const RadialGrid> build(std::size_t n, double r_max);

  std::size_t size() const noexcept { return static_cast<std::size_t>(nodes_.size()); }
  double r_max() const noexcept { return r_max_; }

  const Eigen::VectorXd& nodes() const noexcept { return nodes_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  const Eigen::MatrixXd& d1() const noexcept { return d1_; }
  const Eigen::MatrixXd& d2() const noexcept { return d2_; }
  /// Dense radial Laplacian w'' + 3w'/r; row 0 holds the limit 4 w''(0).
  const Eigen::MatrixXd& laplacian_matrix() const noexcept { return lap_; }
  /// Orthonormal basis (n x (n-3)) of nodal vectors with w'(0) = w(R) = w'(R) = 0.
  const Eigen::MatrixXd& boundary_basis() const noexcept { return bc_basis_; }

  double integrate(const Eigen::Ref<const Eigen::VectorXd>& f) const;

  Eigen::VectorXd apply_d1(const Eigen::Ref<const Eigen::VectorXd>& f) const;
  Eigen::VectorXd apply_d2(const Eigen::Ref<const Eigen::VectorXd>& f) const;
  Eigen::VectorXd apply_laplacian(const Eigen::Ref<const Eigen::VectorXd>& f) const;

  /// Barycentric interpolation of nodal data; r must lie in [0, R_max].
  double interpolate(const Eigen::Ref<const Eigen::VectorXd>& values, double r) const;
  /// Rows are barycentric interpolation stencils for the given points.
  Eigen::MatrixXd interpolation_matrix(std::span<const double> points) const;

 private:
  RadialGrid() = default;

  double r_max_ = 0.0;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd bary_;
  Eigen::MatrixXd d1_;
  Eigen::MatrixXd d2_;
  Eigen::MatrixXd lap_;
  Eigen::MatrixXd bc_basis_;
  // Row-major copies for the difference-form products.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> d1_rows_;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> d2_rows_;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> lap_rows_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

}  // namespace bhgs
