#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "vmo/layout.hpp"
#include "vmo/matrix_market.hpp"
#include "vmo/partition.hpp"
#include "vmo/pointset.hpp"
#include "vmo/sparse_matrix.hpp"

namespace vmo {

enum class Form { bbd, sbd };
enum class CutStrategy { none, schur, twobit };

/// Perfect row <-> column matching on the bipartite representation. Vertex ids
/// are rows 0..m-1 followed by columns m..2m-1.
struct Matching {
  Index m = 0;
  std::vector<Index> row_to_col;  // size m, 0-based column
  std::vector<Index> col_to_row;  // size m

  Index mu(Index v) const {
    return v < m ? m + row_to_col[static_cast<std::size_t>(v)]
                 : col_to_row[static_cast<std::size_t>(v - m)];
  }
};

struct HopcroftKarpResult {
  std::vector<Index> row_to_col;  // -1 where unmatched
  std::vector<Index> col_to_row;
  bool perfect = false;
  std::vector<Index> unmatched_rows;
  std::vector<Index> unmatched_cols;
};

/// Maximum bipartite matching; `row_adj` maps each of the m rows to its
/// columns. An initial partial matching may be supplied and is augmented.
HopcroftKarpResult hopcroft_karp(Index m_rows, Index m_cols,
                                 const std::vector<std::vector<Index>>& row_adj,
                                 const std::vector<Index>* initial_row_to_col = nullptr);

/// Greedy heavy-entry matching (descending |a_ij|, ties in row-major order)
/// augmented to a perfect matching. Throws StructuralSingularError when the
/// pattern admits none.
Matching strengthen_diagonal(const SparseMatrix& m);

struct SeparatorPlane {
  std::vector<double> normal;  // z2 - z1
  double offset = 0.0;         // (z1 + z2)/2 . normal
};

struct Split {
  std::vector<Index> v1, v2, v3;  // vertex ids; matched pairs adjacent
  std::vector<Index> e1, e2, e3;  // edge ids
  SeparatorPlane plane;
};

struct BipartiteGraph {
  Index nrows = 0, ncols = 0;
  std::vector<std::pair<Index, Index>> edges;  // (row vertex, nrows + column)

  Index num_vertices() const { return nrows + ncols; }
  static BipartiteGraph from_matrix(const SparseMatrix& m);
};

struct SplitParams {
  std::uint64_t seed = 1;
  int lloyd_iters = 20;
};

/// One application of the separator construction: cluster the subset's points
/// into two groups, then walk the cut edges moving the endpoint closer to the
/// separating plane (and its match) into part 3.
Split split_once(const BipartiteGraph& g, std::span<const Index> verts,
                 std::span<const Index> edge_ids, const PointSet& points, const Matching* mu,
                 const SplitParams& sp);

struct OrderNode {
  int level = 0;
  std::vector<Index> verts;  // scope vertices in order; matched pairs adjacent
  bool has_split = false;
  Split split;
  std::unique_ptr<OrderNode> child1, child2, child3;  // child3: schur recursion

  // permuted-position ranges, assigned by finalize_tree
  Index row_begin = 0, row_end = 0;
  Index col_begin = 0, col_end = 0;
  Index sep_rows = 0, sep_cols = 0;
};

struct OrderOptions {
  Form form = Form::bbd;
  CutStrategy cut = CutStrategy::none;
  Index min_block = 32;
  int max_depth = 64;
  bool use_matching = true;
  std::uint64_t seed = 1;
  int lloyd_iters = 20;
  int twobit_levels = 1;
  bool edge_costs_from_values = false;  // off by default; unit costs lay out better
  LayoutParams layout;
  const PointSet* given_geometry = nullptr;  // nrows + ncols points; bypasses layout
};

struct OrderingTree {
  Form form = Form::bbd;
  CutStrategy cut = CutStrategy::none;
  Index nrows = 0, ncols = 0;
  BipartiteGraph graph;
  std::optional<Matching> matching;
  PointSet points;  // bipartite layout used for the splits
  std::vector<std::unique_ptr<OrderNode>> components;
  std::vector<Index> row_perm, col_perm;  // new position -> original index
};

/// Builds the bipartite layout (one connected component at a time), splits
/// recursively, and extracts the permutations. Components are ordered block
/// diagonally; empty rows/columns go last.
OrderingTree recursive_order(const SparseMatrix& m, const OrderOptions& opts);

/// Reorders every separator by the two-bit keys collected from up to
/// `levels` descendant splits, then rebuilds ranges and permutations.
/// levels == 0 leaves the tree unchanged.
void refine_cut_twobit(OrderingTree& tree, int levels);

std::vector<BlockReportRow> block_report(const OrderingTree& tree);

/// Re-derives ranges and permutations from the node structure.
void finalize_tree(OrderingTree& tree);

}  // namespace vmo
