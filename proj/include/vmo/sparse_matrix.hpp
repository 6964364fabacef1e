#pragma once

#include <span>
#include <vector>

#include "vmo/common.hpp"

namespace vmo {

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

/// Sparse matrix in coordinate form, kept sorted row-major with unique
/// (row, col) pairs, plus a compressed row index.
class SparseMatrix {
public:
  SparseMatrix() = default;

  /// Duplicate (row, col) pairs are summed. Explicit zeros are kept as
  /// structural entries.
  static SparseMatrix from_triplets(Index nrows, Index ncols, std::vector<Triplet> entries);

  static SparseMatrix identity(Index n);
  static SparseMatrix from_dense(Index nrows, Index ncols, std::span<const double> values);

  Index nrows() const { return nrows_; }
  Index ncols() const { return ncols_; }
  Index nnz() const { return static_cast<Index>(entries_.size()); }
  bool square() const { return nrows_ == ncols_; }

  const std::vector<Triplet>& entries() const { return entries_; }

  /// Entries of row i (sorted by column).
  std::span<const Triplet> row(Index i) const;

  /// Value at (i, j); 0.0 when the position is structurally zero.
  double at(Index i, Index j) const;
  bool has_entry(Index i, Index j) const;

  bool structurally_symmetric() const;

  /// B(i, j) = A(row_new_to_old[i], col_new_to_old[j]).
  SparseMatrix permuted(const std::vector<Index>& row_new_to_old,
                        const std::vector<Index>& col_new_to_old) const;

  std::vector<double> to_dense() const;  // row-major nrows x ncols

  /// y = A * x.
  std::vector<double> multiply(std::span<const double> x) const;

private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Triplet> entries_;   // sorted by (row, col), unique
  std::vector<Index> row_ptr_;     // size nrows_ + 1
};

}  // namespace vmo
