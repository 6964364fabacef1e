#include "vmo/sparse_matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace vmo {

bool is_permutation_vector(const std::vector<Index>& perm) {
  const Index n = static_cast<Index>(perm.size());
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (Index v : perm) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = 1;
  }
  return true;
}

std::vector<Index> invert_permutation(const std::vector<Index>& perm) {
  std::vector<Index> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[static_cast<std::size_t>(perm[i])] = static_cast<Index>(i);
  return inv;
}

SparseMatrix SparseMatrix::from_triplets(Index nrows, Index ncols, std::vector<Triplet> entries) {
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
      throw std::out_of_range("triplet index out of range");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  // sum duplicates
  std::vector<Triplet> merged;
  merged.reserve(entries.size());
  for (const Triplet& t : entries) {
    if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col)
      merged.back().value += t.value;
    else
      merged.push_back(t);
  }
  SparseMatrix m;
  m.nrows_ = nrows;
  m.ncols_ = ncols;
  m.entries_ = std::move(merged);
  m.row_ptr_.assign(static_cast<std::size_t>(nrows) + 1, 0);
  for (const Triplet& t : m.entries_) ++m.row_ptr_[static_cast<std::size_t>(t.row) + 1];
  for (Index i = 0; i < nrows; ++i)
    m.row_ptr_[static_cast<std::size_t>(i) + 1] += m.row_ptr_[static_cast<std::size_t>(i)];
  return m;
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(t));
}

SparseMatrix SparseMatrix::from_dense(Index nrows, Index ncols, std::span<const double> values) {
  if (static_cast<Index>(values.size()) != nrows * ncols)
    throw std::invalid_argument("dense size mismatch");
  std::vector<Triplet> t;
  for (Index i = 0; i < nrows; ++i)
    for (Index j = 0; j < ncols; ++j) {
      double v = values[static_cast<std::size_t>(i * ncols + j)];
      if (v != 0.0) t.push_back({i, j, v});
    }
  return from_triplets(nrows, ncols, std::move(t));
}

std::span<const Triplet> SparseMatrix::row(Index i) const {
  const Index b = row_ptr_[static_cast<std::size_t>(i)];
  const Index e = row_ptr_[static_cast<std::size_t>(i) + 1];
  return {entries_.data() + b, static_cast<std::size_t>(e - b)};
}

double SparseMatrix::at(Index i, Index j) const {
  for (const Triplet& t : row(i))
    if (t.col == j) return t.value;
  return 0.0;
}

bool SparseMatrix::has_entry(Index i, Index j) const {
  auto r = row(i);
  auto it = std::lower_bound(r.begin(), r.end(), j,
                             [](const Triplet& t, Index c) { return t.col < c; });
  return it != r.end() && it->col == j;
}

bool SparseMatrix::structurally_symmetric() const {
  if (nrows_ != ncols_) return false;
  for (const Triplet& t : entries_)
    if (!has_entry(t.col, t.row)) return false;
  return true;
}

SparseMatrix SparseMatrix::permuted(const std::vector<Index>& row_new_to_old,
                                    const std::vector<Index>& col_new_to_old) const {
  if (static_cast<Index>(row_new_to_old.size()) != nrows_ ||
      static_cast<Index>(col_new_to_old.size()) != ncols_)
    throw std::invalid_argument("permutation length mismatch");
  const std::vector<Index> row_old_to_new = invert_permutation(row_new_to_old);
  const std::vector<Index> col_old_to_new = invert_permutation(col_new_to_old);
  std::vector<Triplet> t;
  t.reserve(entries_.size());
  for (const Triplet& e : entries_)
    t.push_back({row_old_to_new[static_cast<std::size_t>(e.row)],
                 col_old_to_new[static_cast<std::size_t>(e.col)], e.value});
  return from_triplets(nrows_, ncols_, std::move(t));
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> d(static_cast<std::size_t>(nrows_ * ncols_), 0.0);
  for (const Triplet& t : entries_) d[static_cast<std::size_t>(t.row * ncols_ + t.col)] += t.value;
  return d;
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  if (static_cast<Index>(x.size()) != ncols_) throw std::invalid_argument("multiply size mismatch");
  std::vector<double> y(static_cast<std::size_t>(nrows_), 0.0);
  for (const Triplet& t : entries_)
    y[static_cast<std::size_t>(t.row)] += t.value * x[static_cast<std::size_t>(t.col)];
  return y;
}

}  // namespace vmo
