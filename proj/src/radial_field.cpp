#include "bhgs/radial_field.hpp"

#include "bhgs/error.hpp"

#include <algorithm>
#include <cmath>

namespace bhgs {

RadialField::RadialField(GridPtr grid, Eigen::MatrixXd values, bool truncated)
    : grid_(std::move(grid)), values_(std::move(values)), truncated_(truncated) {
  if (!grid_) fail(ErrorKind::parameter, "field needs a grid");
  if (values_.rows() != static_cast<Eigen::Index>(grid_->size())) {
    fail(ErrorKind::parameter, "field row count does not match grid size");
  }
  if (values_.cols() < 1) fail(ErrorKind::parameter, "field needs at least one component");
  if (!values_.allFinite()) fail(ErrorKind::parameter, "field values must be finite");
}

RadialField RadialField::zeros(GridPtr grid, std::size_t m) {
  const auto n = static_cast<Eigen::Index>(grid->size());
  return RadialField(std::move(grid), Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(m)));
}

RadialField RadialField::sample(GridPtr grid, const std::function<double(double)>& profile) {
  const auto& r = grid->nodes();
  Eigen::MatrixXd v(r.size(), 1);
  for (Eigen::Index i = 0; i < r.size(); ++i) v(i, 0) = profile(r(i));
  return RadialField(std::move(grid), std::move(v));
}

double RadialField::boundary_defect() const {
  const auto& d1 = grid_->d1();
  const Eigen::Index last = values_.rows() - 1;
  const double end_value = values_.row(last).norm();
  const double end_slope = (d1.row(last) * values_).norm();
  const double origin_slope = (d1.row(0) * values_).norm();
  return std::max({end_value, end_slope, origin_slope});
}

RadialField RadialField::with_boundary_conditions() const {
  const auto& p = grid_->boundary_basis();
  Eigen::MatrixXd projected = p * (p.transpose() * values_);
  return RadialField(grid_, std::move(projected), truncated_);
}

}  // namespace bhgs
