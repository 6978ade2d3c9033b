#include "gpcert/box.hpp"

#include <cmath>

namespace gpcert {

Box::Box(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  require(lower_.size() == upper_.size(), "box bounds have different dimensions");
  for (Index j = 0; j < lower_.size(); ++j) {
    require(std::isfinite(lower_[j]) && std::isfinite(upper_[j]), "box bounds must be finite");
    require(lower_[j] <= upper_[j], "box lower bound exceeds upper bound in dimension " + std::to_string(j));
  }
}

Box Box::point(const Vector& x) { return Box(x, x); }

Box Box::around(const Vector& center, double half_width) {
  require(half_width >= 0.0, "box half width must be non-negative");
  Vector h = Vector::Constant(center.size(), half_width);
  return Box(center - h, center + h);
}

double Box::max_side() const { return dim() == 0 ? 0.0 : (upper_ - lower_).maxCoeff(); }

int Box::effective_dim() const {
  int count = 0;
  for (Index j = 0; j < dim(); ++j) count += upper_[j] > lower_[j] ? 1 : 0;
  return count;
}

Vector Box::center() const { return 0.5 * (lower_ + upper_); }

bool Box::contains(const Vector& x, double tol) const {
  if (x.size() != dim()) return false;
  for (Index j = 0; j < dim(); ++j) {
    if (x[j] < lower_[j] - tol || x[j] > upper_[j] + tol) return false;
  }
  return true;
}

bool Box::contains(const Box& other) const {
  if (other.dim() != dim()) return false;
  return (other.lower_.array() >= lower_.array()).all() && (other.upper_.array() <= upper_.array()).all();
}

Vector Box::clamp(const Vector& x) const { return x.cwiseMax(lower_).cwiseMin(upper_); }

Index Box::widest_dim() const {
  Index best = -1;
  double best_width = 0.0;
  for (Index j = 0; j < dim(); ++j) {
    if (width(j) > best_width) {
      best_width = width(j);
      best = j;
    }
  }
  return best;
}

std::pair<Box, Box> Box::split() const {
  const Index j = widest_dim();
  if (j < 0) return {*this, *this};
  const double mid = 0.5 * (lower_[j] + upper_[j]);
  Box left = *this;
  Box right = *this;
  left.upper_[j] = mid;
  right.lower_[j] = mid;
  return {std::move(left), std::move(right)};
}

double Box::min_norm() const {
  double sq = 0.0;
  for (Index j = 0; j < dim(); ++j) {
    double nearest = 0.0;
    if (lower_[j] > 0.0) nearest = lower_[j];
    else if (upper_[j] < 0.0) nearest = upper_[j];
    sq += nearest * nearest;
  }
  return std::sqrt(sq);
}

double Box::max_norm() const {
  double sq = 0.0;
  for (Index j = 0; j < dim(); ++j) {
    const double far = std::max(std::abs(lower_[j]), std::abs(upper_[j]));
    sq += far * far;
  }
  return std::sqrt(sq);
}

std::vector<Index> Box::free_dims() const {
  std::vector<Index> dims;
  for (Index j = 0; j < dim(); ++j) {
    if (upper_[j] > lower_[j]) dims.push_back(j);
  }
  return dims;
}

}  // namespace gpcert
