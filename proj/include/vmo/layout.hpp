#pragma once

#include <cstdint>

#include "vmo/hypergraph.hpp"
#include "vmo/pointset.hpp"
#include "vmo/spatial_tree.hpp"

namespace vmo {

/// Parameters of the energy model and of the multilevel solver. The energy
/// exponents are fixed: quadratic rubber bands and repulsion decaying with
/// exponent dim - 2, which keeps the repulsive field harmonic so distant point
/// clusters act like single aggregated charges.
struct LayoutParams {
  int dim = 4;                      // >= 3
  double opening_threshold = 0.5;   // cell_diameter / distance < threshold => far
  double step_decay = 0.9;
  int descent_iters = 200;
  Index coarsest_size = 64;
  double prolong_scale = 1.25;
  double jitter_magnitude = 0.01;   // fraction of mean nearest-neighbor spacing
  std::uint64_t seed = 1;
  int leaf_capacity = 8;

  double repulsion_exponent() const { return static_cast<double>(dim - 2); }
  void validate() const;
};

/// Energy of a layout: quadratic pull of every hyperedge member towards the
/// hyperedge center plus pairwise repulsion w_i w_j / r^(d-2). Exact O(k^2)
/// reference. Points must be pairwise distinct and hyperedges non-empty.
double energy(const Hypergraph& g, const PointSet& x, const LayoutParams& p);

/// Analytic gradient of energy; one vector per vertex.
PointSet gradient_exact(const Hypergraph& g, const PointSet& x, const LayoutParams& p);

/// Gradient with the repulsion term approximated by the spatial-tree
/// traversal; the rubber term is exact. With opening_threshold = 0 this equals
/// gradient_exact.
PointSet gradient_approx(const Hypergraph& g, const PointSet& x, const SpatialTree& tree,
                         const LayoutParams& p);

/// Steepest descent with decayed steps. Steps that would collide two points
/// or increase the energy are halved; the result never has higher energy than
/// the start. Requires a connected hypergraph.
PointSet descend(const Hypergraph& g, PointSet x0, const LayoutParams& p, int iters);

/// Multilevel energy minimization: coarsen, lay out the coarsest level from a
/// seeded random start, then prolong (scale + jitter) and descend per level.
/// Requires a connected hypergraph.
PointSet multilevel_layout(const Hypergraph& g, const LayoutParams& p);

/// Maps each nonzero of m to the midpoint of its row and column points in a
/// bipartite layout (rows 0..nrows-1, then columns).
PointSet finegrain_points(const PointSet& bipartite_layout, const SparseMatrix& m);

}  // namespace vmo
