#include "bhgs/radial_grid.hpp"

#include "bhgs/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace bhgs {

namespace {

using std::numbers::pi;

// Clenshaw-Curtis weights on [-1, 1] for the N+1 Lobatto points cos(pi k / N).
Eigen::VectorXd clenshaw_curtis(std::size_t big_n) {
  const auto n = static_cast<Eigen::Index>(big_n);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n + 1);
  const double nn = static_cast<double>(big_n);
  const bool even = big_n % 2 == 0;
  const double end = even ? 1.0 / (nn * nn - 1.0) : 1.0 / (nn * nn);
  w(0) = end;
  w(n) = end;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double theta = pi * static_cast<double>(i) / nn;
    double v = 1.0;
    const Eigen::Index kmax = even ? n / 2 - 1 : (n - 1) / 2;
    for (Eigen::Index k = 1; k <= kmax; ++k) {
      const double kk = static_cast<double>(k);
      v -= 2.0 * std::cos(2.0 * kk * theta) / (4.0 * kk * kk - 1.0);
    }
    if (even) v -= std::cos(nn * theta) / (nn * nn - 1.0);
    w(i) = 2.0 * v / nn;
  }
  return w;
}

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::VectorXd apply_diff(const RowMatrix& a, const Eigen::Ref<const Eigen::VectorXd>& f) {
  const Eigen::Index n = f.size();
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* row = a.data() + i * n;
    const double fi = f(i);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) acc += row[j] * (f(j) - fi);
    out(i) = acc;
  }
  return out;
}

}  // namespace

std::shared_ptr<const RadialGrid> RadialGrid::build(std::size_t n, double r_max) {
  if (n < min_nodes) {
    fail(ErrorKind::parameter, "grid needs at least " + std::to_string(min_nodes) +
                                   " nodes, got " + std::to_string(n));
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    fail(ErrorKind::parameter, "R_max must be positive and finite");
  }

  std::shared_ptr<RadialGrid> g(new RadialGrid());
  g->r_max_ = r_max;
  const auto nn = static_cast<Eigen::Index>(n);
  const double big_n = static_cast<double>(n - 1);

  Eigen::VectorXd theta(nn);
  for (Eigen::Index i = 0; i < nn; ++i) theta(i) = pi * static_cast<double>(i) / big_n;

  g->nodes_.resize(nn);
  for (Eigen::Index i = 0; i < nn; ++i) {
    const double s = std::sin(0.5 * theta(i));
    g->nodes_(i) = r_max * s * s;
  }
  g->nodes_(0) = 0.0;
  g->nodes_(nn - 1) = r_max;

  g->bary_.resize(nn);
  for (Eigen::Index i = 0; i < nn; ++i) {
    const double delta = (i == 0 || i == nn - 1) ? 0.5 : 1.0;
    g->bary_(i) = (i % 2 == 0 ? 1.0 : -1.0) * delta;
  }

  // r_i - r_j without cancellation.
  auto gap = [&](Eigen::Index i, Eigen::Index j) {
    return r_max * std::sin(0.5 * (theta(i) + theta(j))) * std::sin(0.5 * (theta(i) - theta(j)));
  };

  auto& d1 = g->d1_;
  auto& d2 = g->d2_;
  d1 = Eigen::MatrixXd::Zero(nn, nn);
  d2 = Eigen::MatrixXd::Zero(nn, nn);
  for (Eigen::Index i = 0; i < nn; ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < nn; ++j) {
      if (j == i) continue;
      d1(i, j) = (g->bary_(j) / g->bary_(i)) / gap(i, j);
      sum += d1(i, j);
    }
    d1(i, i) = -sum;
  }
  for (Eigen::Index i = 0; i < nn; ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < nn; ++j) {
      if (j == i) continue;
      d2(i, j) = 2.0 * d1(i, j) * (d1(i, i) - 1.0 / gap(i, j));
      sum += d2(i, j);
    }
    d2(i, i) = -sum;
  }

  g->lap_ = d2;
  for (Eigen::Index i = 1; i < nn; ++i) g->lap_.row(i) += (3.0 / g->nodes_(i)) * d1.row(i);
  g->lap_.row(0) = 4.0 * d2.row(0);
  g->d1_rows_ = d1;
  g->d2_rows_ = d2;
  g->lap_rows_ = g->lap_;

  const Eigen::VectorXd cc = clenshaw_curtis(n - 1);
  const double two_pi_sq = 2.0 * pi * pi;
  g->weights_.resize(nn);
  for (Eigen::Index i = 0; i < nn; ++i) {
    const double r = g->nodes_(i);
    g->weights_(i) = cc(i) * 0.5 * r_max * two_pi_sq * r * r * r;
  }

  Eigen::MatrixXd bc(nn, 3);
  bc.col(0) = d1.row(0).transpose();
  bc.col(1) = Eigen::VectorXd::Unit(nn, nn - 1);
  bc.col(2) = d1.row(nn - 1).transpose();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(bc);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(nn, nn);
  g->bc_basis_ = q.rightCols(nn - 3);

  return g;
}

double RadialGrid::integrate(const Eigen::Ref<const Eigen::VectorXd>& f) const {
  if (f.size() != nodes_.size()) fail(ErrorKind::parameter, "integrand size does not match grid");
  return weights_.dot(f);
}

Eigen::VectorXd RadialGrid::apply_d1(const Eigen::Ref<const Eigen::VectorXd>& f) const {
  return apply_diff(d1_rows_, f);
}

Eigen::VectorXd RadialGrid::apply_d2(const Eigen::Ref<const Eigen::VectorXd>& f) const {
  return apply_diff(d2_rows_, f);
}

Eigen::VectorXd RadialGrid::apply_laplacian(const Eigen::Ref<const Eigen::VectorXd>& f) const {
  return apply_diff(lap_rows_, f);
}

double RadialGrid::interpolate(const Eigen::Ref<const Eigen::VectorXd>& values, double r) const {
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index j = 0; j < nodes_.size(); ++j) {
    const double d = r - nodes_(j);
    if (d == 0.0) return values(j);
    const double c = bary_(j) / d;
    num += c * values(j);
    den += c;
  }
  return num / den;
}

Eigen::MatrixXd RadialGrid::interpolation_matrix(std::span<const double> points) const {
  const auto n = nodes_.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(points.size()), n);
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    const double r = points[k];
    Eigen::Index hit = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (r == nodes_(j)) hit = j;
    }
    if (hit >= 0) {
      m(row, hit) = 1.0;
      continue;
    }
    double den = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double c = bary_(j) / (r - nodes_(j));
      m(row, j) = c;
      den += c;
    }
    m.row(row) /= den;
  }
  return m;
}

}  // namespace bhgs
