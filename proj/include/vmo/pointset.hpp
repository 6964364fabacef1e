#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "vmo/common.hpp"

namespace vmo {

/// A fixed-dimension set of points in R^d, stored flat.
class PointSet {
public:
  PointSet() = default;
  PointSet(int dim, Index count) : dim_(dim), data_(static_cast<std::size_t>(dim) * count, 0.0) {}

  int dim() const { return dim_; }
  Index size() const { return dim_ == 0 ? 0 : static_cast<Index>(data_.size()) / dim_; }

  std::span<double> operator[](Index v) {
    return {data_.data() + static_cast<std::size_t>(v) * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> operator[](Index v) const {
    return {data_.data() + static_cast<std::size_t>(v) * dim_, static_cast<std::size_t>(dim_)};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  void append(std::span<const double> p);

  double distance2(Index a, Index b) const {
    double s = 0.0;
    auto pa = (*this)[a], pb = (*this)[b];
    for (int m = 0; m < dim_; ++m) {
      const double d = pa[m] - pb[m];
      s += d * d;
    }
    return s;
  }
  double distance(Index a, Index b) const { return std::sqrt(distance2(a, b)); }

  bool pairwise_distinct() const;

  /// (lo, hi) corners of the axis-aligned bounding box.
  std::pair<std::vector<double>, std::vector<double>> bounding_box() const;
  double bounding_box_diagonal() const;

  /// Mean distance to the nearest other point; 0 for fewer than two points.
  double mean_nearest_neighbor_distance() const;

  /// Points at the given indices, in order.
  PointSet gather(std::span<const Index> indices) const;

private:
  int dim_ = 0;
  std::vector<double> data_;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    const double d = a[m] - b[m];
    s += d * d;
  }
  return s;
}

}  // namespace vmo
