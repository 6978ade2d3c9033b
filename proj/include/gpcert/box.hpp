#pragma once

#include "gpcert/types.hpp"

#include <utility>
#include <vector>

namespace gpcert {

/// Axis-aligned hyper-rectangle. Zero-width sides are allowed and are
/// treated as frozen coordinates (feature boxes freeze most pixels).
class Box {
 public:
  Box() = default;
  Box(Vector lower, Vector upper);

  static Box point(const Vector& x);
  /// [center - half_width, center + half_width] on every coordinate.
  static Box around(const Vector& center, double half_width);

  [[nodiscard]] Index dim() const { return lower_.size(); }
  [[nodiscard]] const Vector& lower() const { return lower_; }
  [[nodiscard]] const Vector& upper() const { return upper_; }
  [[nodiscard]] double lower(Index j) const { return lower_[j]; }
  [[nodiscard]] double upper(Index j) const { return upper_[j]; }
  [[nodiscard]] double width(Index j) const { return upper_[j] - lower_[j]; }
  [[nodiscard]] Interval side(Index j) const { return {lower_[j], upper_[j]}; }

  /// Largest side length (the covering-number "D").
  [[nodiscard]] double max_side() const;
  /// Number of sides with positive width.
  [[nodiscard]] int effective_dim() const;
  [[nodiscard]] bool is_point() const { return effective_dim() == 0; }
  [[nodiscard]] Vector center() const;
  [[nodiscard]] bool contains(const Vector& x, double tol = 0.0) const;
  [[nodiscard]] bool contains(const Box& other) const;
  [[nodiscard]] Vector clamp(const Vector& x) const;

  /// Widest side, lowest index on ties; -1 for a point.
  [[nodiscard]] Index widest_dim() const;
  /// Bisects the widest side.
  [[nodiscard]] std::pair<Box, Box> split() const;

  /// Euclidean norm range over the box.
  [[nodiscard]] double min_norm() const;
  [[nodiscard]] double max_norm() const;

  /// Indices of the non-degenerate sides, ascending.
  [[nodiscard]] std::vector<Index> free_dims() const;

  friend bool operator==(const Box& a, const Box& b) { return a.lower_ == b.lower_ && a.upper_ == b.upper_; }

 private:
  Vector lower_;
  Vector upper_;
};

}  // namespace gpcert
