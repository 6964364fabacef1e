#pragma once

#include <span>
#include <vector>

#include "vmo/pointset.hpp"

namespace vmo {

/// 2^d-ary spatial tree over a point set: recursive bisection of the bounding
/// box in all axes. Every node aggregates the weighted mean position and total
/// weight of its points. Traversal uses next-links that tie the last sibling
/// to the parent's sibling; the root's next is the dummy (-1), so a walk
/// needs no backtracking.
class SpatialTree {
public:
  static constexpr Index kDummy = -1;

  struct Node {
    Index first_child = kDummy;   // kDummy for leaves
    Index next = kDummy;
    Index points_begin = 0;       // into point_order(), leaves only
    Index points_end = 0;
    double weight = 0.0;
    double cell_diameter = 0.0;
  };

  static SpatialTree build(const PointSet& points, std::span<const double> weights,
                           int leaf_capacity = 8);

  Index root() const { return 0; }
  const Node& node(Index t) const { return nodes_[static_cast<std::size_t>(t)]; }
  Index node_count() const { return static_cast<Index>(nodes_.size()); }
  std::span<const double> centroid(Index t) const {
    return {centroids_.data() + static_cast<std::size_t>(t) * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const Index> leaf_points(Index t) const {
    const Node& n = node(t);
    return {point_order_.data() + n.points_begin, static_cast<std::size_t>(n.points_end - n.points_begin)};
  }

  double total_weight() const { return nodes_.empty() ? 0.0 : nodes_[0].weight; }

private:
  int dim_ = 0;
  std::vector<Node> nodes_;
  std::vector<double> centroids_;   // node-major, dim_ per node
  std::vector<Index> point_order_;  // permutation of point indices, leaves own ranges
};

}  // namespace vmo
