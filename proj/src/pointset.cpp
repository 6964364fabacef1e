#include "vmo/pointset.hpp"

#include <limits>
#include <stdexcept>

namespace vmo {

void PointSet::append(std::span<const double> p) {
  if (dim_ == 0)
    dim_ = static_cast<int>(p.size());
  else if (static_cast<int>(p.size()) != dim_)
    throw std::invalid_argument("point dimension mismatch");
  data_.insert(data_.end(), p.begin(), p.end());
}

bool PointSet::pairwise_distinct() const {
  const Index k = size();
  for (Index i = 0; i < k; ++i)
    for (Index j = i + 1; j < k; ++j)
      if (distance2(i, j) == 0.0) return false;
  return true;
}

std::pair<std::vector<double>, std::vector<double>> PointSet::bounding_box() const {
  std::vector<double> lo(static_cast<std::size_t>(dim_), std::numeric_limits<double>::infinity());
  std::vector<double> hi(static_cast<std::size_t>(dim_), -std::numeric_limits<double>::infinity());
  const Index k = size();
  for (Index v = 0; v < k; ++v) {
    auto p = (*this)[v];
    for (int m = 0; m < dim_; ++m) {
      lo[static_cast<std::size_t>(m)] = std::min(lo[static_cast<std::size_t>(m)], p[m]);
      hi[static_cast<std::size_t>(m)] = std::max(hi[static_cast<std::size_t>(m)], p[m]);
    }
  }
  return {std::move(lo), std::move(hi)};
}

double PointSet::bounding_box_diagonal() const {
  if (size() == 0) return 0.0;
  auto [lo, hi] = bounding_box();
  double s = 0.0;
  for (int m = 0; m < dim_; ++m) {
    const double d = hi[static_cast<std::size_t>(m)] - lo[static_cast<std::size_t>(m)];
    s += d * d;
  }
  return std::sqrt(s);
}

double PointSet::mean_nearest_neighbor_distance() const {
  const Index k = size();
  if (k < 2) return 0.0;
  double total = 0.0;
  for (Index i = 0; i < k; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < k; ++j)
      if (j != i) best = std::min(best, distance2(i, j));
    total += std::sqrt(best);
  }
  return total / static_cast<double>(k);
}

PointSet PointSet::gather(std::span<const Index> indices) const {
  PointSet out(dim_, static_cast<Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i) {
    auto dst = out[static_cast<Index>(i)];
    auto src = (*this)[indices[i]];
    for (int m = 0; m < dim_; ++m) dst[m] = src[m];
  }
  return out;
}

}  // namespace vmo
