#pragma once

#include <span>
#include <vector>

#include "vmo/matrix_market.hpp"
#include "vmo/ordering.hpp"
#include "vmo/sparse_matrix.hpp"

namespace vmo {

enum class PivotMode { complete, none };

struct PivotEvent {
  enum class Kind { row_swap, col_swap, zero_pivot_skip, threshold_row_swap };
  Kind kind;
  Index step = 0;
  Index a = -1, b = -1;  // swapped positions
  double pivot = 0.0;
};

/// Dense factors with structural nonzero tracking: entries that become
/// numerically zero by cancellation still count as fill.
struct Factors {
  Index n = 0;
  std::vector<Index> row_perm, col_perm;  // new position -> original index
  std::vector<double> lower, upper;       // row-major n x n
  std::vector<char> lower_nz, upper_nz;
  std::vector<PivotEvent> log;

  double lower_at(Index i, Index j) const { return lower[static_cast<std::size_t>(i * n + j)]; }
  double upper_at(Index i, Index j) const { return upper[static_cast<std::size_t>(i * n + j)]; }
  Index nnz_lower() const;
  Index nnz_upper() const;
  Index zero_pivot_count() const;
  Index swap_count() const;
};

/// Dense LU for the evaluation harness. mode == complete searches the whole
/// remaining block for the largest pivot; mode == none never swaps and skips
/// elimination steps with an exactly zero pivot (logged). A partial bound
/// m' < n stops the factorization after column m'.
Factors lu_complete_pivot(const SparseMatrix& a, PivotMode mode, Index partial_bound = -1);

/// LU on an already permuted matrix with threshold row pivoting confined to
/// the pivot scope containing each diagonal position (diagonal blocks and
/// separator blocks of the ordering). Throws SingularBlockError when a scope
/// offers no nonzero pivot.
Factors lu_restricted(const SparseMatrix& a_permuted, std::span<const Index> scope_end, double u);
Factors lu_restricted(const SparseMatrix& a_permuted, const OrderingTree& tree, double u);

/// scope_end[k] = end of the pivot scope containing position k.
std::vector<Index> pivot_scopes_from_report(const std::vector<BlockReportRow>& rows, Index n);
std::vector<Index> pivot_scopes(const OrderingTree& tree);

/// (nz(L) + nz(U) - nz(I)) / nz(A), structural counts.
double fill_in(const SparseMatrix& a, const Factors& f);

struct SolveResult {
  std::vector<double> x;
  double backward_error = 0.0;
};

/// Solves A x = b through the factors and reports
/// |Ax - b|_inf / (|A|_inf |x|_inf + |b|_inf).
SolveResult solve_and_backward_error(const SparseMatrix& a, const Factors& f,
                                     std::span<const double> b);

double determinant(const SparseMatrix& a);

/// Rank by Gaussian elimination with full pivoting; pivots below
/// rel_tol * (largest pivot) end the elimination.
Index rank_full_pivot(const SparseMatrix& a, double rel_tol = 1e-10);

struct BlockRanks {
  Index a = 0, b = 0, c = 0, d = 0;  // d = a - (b + c) >= 0
  Index rank_b = 0, rank_c = 0;
};

enum class RankVerdict { holds, violated, vacuous };

struct RankCheckResult {
  RankVerdict verdict = RankVerdict::vacuous;
  bool tight = false;  // rank(B) + rank(C) == b + c - d
};

RankCheckResult rank_bound_check(const BlockRanks& blocks, bool det_nonzero);

struct CutMetrics {
  Index max_cut_rows = 0;
  Index max_cut_cols = 0;
  struct SplitCut {
    int level;
    Index cut_rows, cut_cols;
  };
  std::vector<SplitCut> per_split;
};

CutMetrics cut_metrics(const OrderingTree& tree);

/// n x n row-major mask of the positions where factors of the permuted matrix
/// may hold nonzeros: descending the tree, positions pairing part-1 rows with
/// part-2 columns (or vice versa) are forbidden, everything touching a
/// separator is permitted.
std::vector<char> fill_region_mask(const OrderingTree& tree);

}  // namespace vmo
