#pragma once

#include <vector>

#include "vmo/sparse_matrix.hpp"

namespace vmo {

enum class Representation { symmetric, bipartite, column_net, row_net, finegrain };

/// Weighted hypergraph. Hyperedges form a list (multiset): duplicates are
/// preserved and each edge's member list is kept sorted and unique, so taking
/// the dual twice reproduces the original structure exactly.
struct Hypergraph {
  Index num_vertices = 0;
  std::vector<double> vertex_weights;             // size num_vertices, > 0
  std::vector<std::vector<Index>> hyperedges;     // sorted member lists; empty allowed
  std::vector<double> hyperedge_costs;            // size hyperedges.size(), > 0

  Index num_hyperedges() const { return static_cast<Index>(hyperedges.size()); }

  static Hypergraph with_unit_weights(Index num_vertices,
                                      std::vector<std::vector<Index>> hyperedges);

  /// Hyperedge lists per vertex, in increasing hyperedge index.
  std::vector<std::vector<Index>> incidence() const;

  void validate() const;
};

struct CoarseningMap {
  std::vector<Index> fine_to_coarse;  // surjective onto 0..coarse_count-1
  Index coarse_count = 0;
};

/// label[v] == label[w] iff v and w are hyperedge-connected; each label is the
/// smallest vertex index of its component.
struct ComponentLabels {
  std::vector<Index> label;

  Index component_count() const;
  /// Vertex lists grouped by label, ordered by smallest member.
  std::vector<std::vector<Index>> groups() const;
};

Hypergraph from_matrix(const SparseMatrix& m, Representation kind);

Hypergraph dual(const Hypergraph& g);

ComponentLabels connected_components(const Hypergraph& g);

/// One level of matching-based coarsening: single-neighbor vertices pair with
/// their neighbor (or with a sibling sharing it), then a greedy pass over
/// hyperedges in descending cost pairs the lowest-indexed unmatched members.
std::pair<Hypergraph, CoarseningMap> coarsen(const Hypergraph& g);

/// Subhypergraph induced by a connected component (edges touching the
/// component are fully contained in it). Empty hyperedges are dropped.
Hypergraph induced_component(const Hypergraph& g, std::span<const Index> verts,
                             std::vector<Index>* local_of = nullptr);

}  // namespace vmo
