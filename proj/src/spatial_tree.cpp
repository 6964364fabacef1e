#include "vmo/spatial_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vmo {

namespace {

struct Builder {
  const PointSet& pts;
  std::span<const double> weights;
  int leaf_capacity;
  int dim;
  double min_extent;

  std::vector<SpatialTree::Node> nodes;
  std::vector<double> centroids;
  std::vector<Index> order;

  Index new_node(std::span<const Index> subset, std::span<const double> lo,
                 std::span<const double> hi) {
    const Index id = static_cast<Index>(nodes.size());
    nodes.emplace_back();
    double w = 0.0;
    std::vector<double> c(static_cast<std::size_t>(dim), 0.0);
    for (Index p : subset) {
      const double wp = weights[static_cast<std::size_t>(p)];
      w += wp;
      auto x = pts[p];
      for (int m = 0; m < dim; ++m) c[static_cast<std::size_t>(m)] += wp * x[m];
    }
    for (int m = 0; m < dim; ++m) c[static_cast<std::size_t>(m)] /= w;
    double diam2 = 0.0;
    for (int m = 0; m < dim; ++m) {
      const double d = hi[m] - lo[m];
      diam2 += d * d;
    }
    nodes[static_cast<std::size_t>(id)].weight = w;
    nodes[static_cast<std::size_t>(id)].cell_diameter = std::sqrt(diam2);
    centroids.insert(centroids.end(), c.begin(), c.end());
    return id;
  }

  // Returns the node id; fills `order` for leaf ranges.
  Index build(std::vector<Index> subset, std::vector<double> lo, std::vector<double> hi) {
    const Index id = new_node(subset, lo, hi);
    double max_extent = 0.0;
    for (int m = 0; m < dim; ++m)
      max_extent = std::max(max_extent, hi[static_cast<std::size_t>(m)] - lo[static_cast<std::size_t>(m)]);
    if (static_cast<int>(subset.size()) <= leaf_capacity || max_extent <= min_extent) {
      nodes[static_cast<std::size_t>(id)].points_begin = static_cast<Index>(order.size());
      order.insert(order.end(), subset.begin(), subset.end());
      nodes[static_cast<std::size_t>(id)].points_end = static_cast<Index>(order.size());
      return id;
    }
    std::vector<double> mid(static_cast<std::size_t>(dim));
    for (int m = 0; m < dim; ++m)
      mid[static_cast<std::size_t>(m)] =
          0.5 * (lo[static_cast<std::size_t>(m)] + hi[static_cast<std::size_t>(m)]);
    const std::size_t n_octants = std::size_t(1) << dim;
    std::vector<std::vector<Index>> buckets(n_octants);
    for (Index p : subset) {
      auto x = pts[p];
      std::size_t mask = 0;
      for (int m = 0; m < dim; ++m)
        if (x[m] >= mid[static_cast<std::size_t>(m)]) mask |= std::size_t(1) << m;
      buckets[mask].push_back(p);
    }
    subset.clear();
    subset.shrink_to_fit();
    std::vector<Index> children;
    for (std::size_t mask = 0; mask < n_octants; ++mask) {
      if (buckets[mask].empty()) continue;
      std::vector<double> clo(static_cast<std::size_t>(dim)), chi(static_cast<std::size_t>(dim));
      for (int m = 0; m < dim; ++m) {
        const bool upper = mask & (std::size_t(1) << m);
        clo[static_cast<std::size_t>(m)] = upper ? mid[static_cast<std::size_t>(m)] : lo[static_cast<std::size_t>(m)];
        chi[static_cast<std::size_t>(m)] = upper ? hi[static_cast<std::size_t>(m)] : mid[static_cast<std::size_t>(m)];
      }
      children.push_back(build(std::move(buckets[mask]), std::move(clo), std::move(chi)));
    }
    nodes[static_cast<std::size_t>(id)].first_child = children.front();
    // sibling chain; the last child's next is patched in link_pass
    for (std::size_t i = 0; i + 1 < children.size(); ++i)
      nodes[static_cast<std::size_t>(children[i])].next = children[i + 1];
    nodes[static_cast<std::size_t>(children.back())].next = kPatch;
    return id;
  }

  static constexpr Index kPatch = -2;

  void link_pass() {
    // replace kPatch markers: the last sibling inherits the parent's next
    fix(0, SpatialTree::kDummy);
  }
  void fix(Index t, Index next_of_parent) {
    SpatialTree::Node& n = nodes[static_cast<std::size_t>(t)];
    if (n.next == kPatch) n.next = next_of_parent;
    Index effective_next = n.next;
    for (Index c = n.first_child; c != SpatialTree::kDummy;) {
      Index sibling = nodes[static_cast<std::size_t>(c)].next;
      fix(c, effective_next);
      c = sibling == kPatch ? SpatialTree::kDummy : sibling;
    }
  }
};

}  // namespace

SpatialTree SpatialTree::build(const PointSet& points, std::span<const double> weights,
                               int leaf_capacity) {
  if (points.size() == 0) throw std::invalid_argument("spatial tree needs at least one point");
  if (points.size() != static_cast<Index>(weights.size()))
    throw std::invalid_argument("weight count mismatch");
  auto [lo, hi] = points.bounding_box();
  double diag = 0.0;
  for (std::size_t m = 0; m < lo.size(); ++m) {
    const double d = hi[m] - lo[m];
    diag += d * d;
  }
  Builder b{points, weights, leaf_capacity, points.dim(),
            1e-12 * std::max(1.0, std::sqrt(diag)), {}, {}, {}};
  std::vector<Index> all(static_cast<std::size_t>(points.size()));
  std::iota(all.begin(), all.end(), Index(0));
  b.build(std::move(all), std::move(lo), std::move(hi));
  b.link_pass();

  SpatialTree t;
  t.dim_ = points.dim();
  t.nodes_ = std::move(b.nodes);
  t.centroids_ = std::move(b.centroids);
  t.point_order_ = std::move(b.order);
  return t;
}

}  // namespace vmo
