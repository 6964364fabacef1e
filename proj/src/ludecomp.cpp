#include "vmo/ludecomp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace vmo {

namespace {

struct DenseWork {
  Index n = 0;
  std::vector<double> a;
  std::vector<char> nz;

  explicit DenseWork(const SparseMatrix& m)
      : n(m.nrows()),
        a(static_cast<std::size_t>(n * n), 0.0),
        nz(static_cast<std::size_t>(n * n), 0) {
    for (const Triplet& t : m.entries()) {
      a[static_cast<std::size_t>(t.row * n + t.col)] = t.value;
      nz[static_cast<std::size_t>(t.row * n + t.col)] = 1;
    }
  }

  double& at(Index i, Index j) { return a[static_cast<std::size_t>(i * n + j)]; }
  double at(Index i, Index j) const { return a[static_cast<std::size_t>(i * n + j)]; }
  bool is_nz(Index i, Index j) const { return nz[static_cast<std::size_t>(i * n + j)] != 0; }
  void set_nz(Index i, Index j) { nz[static_cast<std::size_t>(i * n + j)] = 1; }

  void swap_rows(Index i, Index k) {
    for (Index j = 0; j < n; ++j) {
      std::swap(at(i, j), at(k, j));
      std::swap(nz[static_cast<std::size_t>(i * n + j)], nz[static_cast<std::size_t>(k * n + j)]);
    }
  }
  void swap_cols(Index j, Index k) {
    for (Index i = 0; i < n; ++i) {
      std::swap(at(i, j), at(i, k));
      std::swap(nz[static_cast<std::size_t>(i * n + j)], nz[static_cast<std::size_t>(i * n + k)]);
    }
  }

  // one rank-1 elimination step with structural tracking
  void eliminate(Index k) {
    for (Index i = k + 1; i < n; ++i) {
      if (!is_nz(i, k)) continue;
      at(i, k) /= at(k, k);
      const double lik = at(i, k);
      for (Index j = k + 1; j < n; ++j) {
        if (!is_nz(k, j)) continue;
        at(i, j) -= lik * at(k, j);
        set_nz(i, j);
      }
    }
  }
};

Factors extract_factors(const DenseWork& w, std::vector<Index> row_perm,
                        std::vector<Index> col_perm, std::vector<PivotEvent> log) {
  const Index n = w.n;
  Factors f;
  f.n = n;
  f.row_perm = std::move(row_perm);
  f.col_perm = std::move(col_perm);
  f.log = std::move(log);
  f.lower.assign(static_cast<std::size_t>(n * n), 0.0);
  f.upper.assign(static_cast<std::size_t>(n * n), 0.0);
  f.lower_nz.assign(static_cast<std::size_t>(n * n), 0);
  f.upper_nz.assign(static_cast<std::size_t>(n * n), 0);
  for (Index i = 0; i < n; ++i) {
    f.lower[static_cast<std::size_t>(i * n + i)] = 1.0;
    f.lower_nz[static_cast<std::size_t>(i * n + i)] = 1;
    for (Index j = 0; j < n; ++j) {
      if (i > j) {
        f.lower[static_cast<std::size_t>(i * n + j)] = w.at(i, j);
        f.lower_nz[static_cast<std::size_t>(i * n + j)] = w.is_nz(i, j);
      } else {
        f.upper[static_cast<std::size_t>(i * n + j)] = w.at(i, j);
        f.upper_nz[static_cast<std::size_t>(i * n + j)] = w.is_nz(i, j);
      }
    }
  }
  return f;
}

}  // namespace

Index Factors::nnz_lower() const {
  return std::count(lower_nz.begin(), lower_nz.end(), char(1));
}
Index Factors::nnz_upper() const {
  return std::count(upper_nz.begin(), upper_nz.end(), char(1));
}
Index Factors::zero_pivot_count() const {
  Index c = 0;
  for (const PivotEvent& e : log)
    if (e.kind == PivotEvent::Kind::zero_pivot_skip) ++c;
  return c;
}
Index Factors::swap_count() const {
  Index c = 0;
  for (const PivotEvent& e : log)
    if (e.kind != PivotEvent::Kind::zero_pivot_skip) ++c;
  return c;
}

Factors lu_complete_pivot(const SparseMatrix& a, PivotMode mode, Index partial_bound) {
  if (!a.square()) throw std::invalid_argument("lu_complete_pivot requires a square matrix");
  const Index n = a.nrows();
  const Index bound = partial_bound < 0 ? n : std::min(partial_bound, n);
  DenseWork w(a);
  std::vector<Index> row_perm(static_cast<std::size_t>(n)), col_perm(static_cast<std::size_t>(n));
  std::iota(row_perm.begin(), row_perm.end(), Index(0));
  std::iota(col_perm.begin(), col_perm.end(), Index(0));
  std::vector<PivotEvent> log;

  for (Index k = 0; k < bound; ++k) {
    if (mode == PivotMode::complete) {
      Index pi = k, pj = k;
      double best = -1.0;
      for (Index i = k; i < bound; ++i)
        for (Index j = k; j < bound; ++j)
          if (std::abs(w.at(i, j)) > best) {
            best = std::abs(w.at(i, j));
            pi = i;
            pj = j;
          }
      if (pi != k) {
        w.swap_rows(pi, k);
        std::swap(row_perm[static_cast<std::size_t>(pi)], row_perm[static_cast<std::size_t>(k)]);
        log.push_back({PivotEvent::Kind::row_swap, k, k, pi, best});
      }
      if (pj != k) {
        w.swap_cols(pj, k);
        std::swap(col_perm[static_cast<std::size_t>(pj)], col_perm[static_cast<std::size_t>(k)]);
        log.push_back({PivotEvent::Kind::col_swap, k, k, pj, best});
      }
    }
    if (w.at(k, k) != 0.0)
      w.eliminate(k);
    else
      log.push_back({PivotEvent::Kind::zero_pivot_skip, k, k, k, 0.0});
  }
  return extract_factors(w, std::move(row_perm), std::move(col_perm), std::move(log));
}

std::vector<Index> pivot_scopes_from_report(const std::vector<BlockReportRow>& rows, Index n) {
  // Children cover parts of a parent's row range; every maximal uncovered run
  // of a node is one pivot scope. Reconstruct the forest from the pre-order
  // level sequence.
  struct Item {
    BlockReportRow row;
    std::vector<std::size_t> children;
  };
  std::vector<Item> items;
  items.reserve(rows.size());
  std::vector<std::size_t> stack;  // indices of current ancestors
  for (const BlockReportRow& r : rows) {
    while (!stack.empty() && items[stack.back()].row.level >= r.level) stack.pop_back();
    items.push_back({r, {}});
    if (!stack.empty()) items[stack.back()].children.push_back(items.size() - 1);
    stack.push_back(items.size() - 1);
  }

  std::vector<Index> scope_end(static_cast<std::size_t>(n), 0);
  std::vector<char> assigned(static_cast<std::size_t>(n), 0);

  auto mark_run = [&](Index b, Index e) {
    for (Index k = b; k < e; ++k) {
      scope_end[static_cast<std::size_t>(k)] = e;
      assigned[static_cast<std::size_t>(k)] = 1;
    }
  };

  std::function<void(std::size_t)> walk = [&](std::size_t id) {
    const Item& it = items[id];
    std::vector<std::pair<Index, Index>> covered;
    for (std::size_t c : it.children) {
      walk(c);
      covered.emplace_back(items[c].row.row_begin, items[c].row.row_end);
    }
    std::sort(covered.begin(), covered.end());
    Index pos = it.row.row_begin;
    for (auto [b, e] : covered) {
      if (b > pos) mark_run(pos, b);
      pos = std::max(pos, e);
    }
    if (pos < it.row.row_end) mark_run(pos, it.row.row_end);
  };
  for (std::size_t i = 0; i < items.size(); ++i) {
    bool top = true;
    for (const Item& it : items)
      for (std::size_t c : it.children)
        if (c == i) top = false;
    if (top) walk(i);
  }
  for (Index k = 0; k < n; ++k)
    if (!assigned[static_cast<std::size_t>(k)])
      throw std::invalid_argument("block report does not cover position " + std::to_string(k));
  return scope_end;
}

std::vector<Index> pivot_scopes(const OrderingTree& tree) {
  return pivot_scopes_from_report(block_report(tree), tree.nrows);
}

Factors lu_restricted(const SparseMatrix& a_permuted, std::span<const Index> scope_end, double u) {
  if (!a_permuted.square()) throw std::invalid_argument("lu_restricted requires a square matrix");
  const Index n = a_permuted.nrows();
  if (static_cast<Index>(scope_end.size()) != n)
    throw std::invalid_argument("scope vector length mismatch");
  if (u < 0.0 || u > 1.0) throw std::invalid_argument("threshold u must lie in [0,1]");

  DenseWork w(a_permuted);
  std::vector<Index> row_perm(static_cast<std::size_t>(n)), col_perm(static_cast<std::size_t>(n));
  std::iota(row_perm.begin(), row_perm.end(), Index(0));
  std::iota(col_perm.begin(), col_perm.end(), Index(0));
  std::vector<PivotEvent> log;

  for (Index k = 0; k < n; ++k) {
    const Index end = scope_end[static_cast<std::size_t>(k)];
    Index rmax = k;
    double cmax = std::abs(w.at(k, k));
    for (Index i = k; i < end; ++i)
      if (std::abs(w.at(i, k)) > cmax) {
        cmax = std::abs(w.at(i, k));
        rmax = i;
      }
    if (cmax == 0.0) {
      Index begin = k;
      while (begin > 0 && scope_end[static_cast<std::size_t>(begin - 1)] == end) --begin;
      throw SingularBlockError(begin, end, k);
    }
    const double diag = std::abs(w.at(k, k));
    if (!(diag != 0.0 && diag >= u * cmax)) {
      w.swap_rows(rmax, k);
      std::swap(row_perm[static_cast<std::size_t>(rmax)], row_perm[static_cast<std::size_t>(k)]);
      log.push_back({PivotEvent::Kind::threshold_row_swap, k, k, rmax, w.at(k, k)});
    }
    w.eliminate(k);
  }
  return extract_factors(w, std::move(row_perm), std::move(col_perm), std::move(log));
}

Factors lu_restricted(const SparseMatrix& a_permuted, const OrderingTree& tree, double u) {
  return lu_restricted(a_permuted, pivot_scopes(tree), u);
}

double fill_in(const SparseMatrix& a, const Factors& f) {
  return static_cast<double>(f.nnz_lower() + f.nnz_upper() - f.n) / static_cast<double>(a.nnz());
}

SolveResult solve_and_backward_error(const SparseMatrix& a, const Factors& f,
                                     std::span<const double> b) {
  const Index n = f.n;
  if (static_cast<Index>(b.size()) != n) throw std::invalid_argument("rhs length mismatch");
  for (Index k = 0; k < n; ++k)
    if (f.upper_at(k, k) == 0.0) throw std::domain_error("solve: exactly zero diagonal in U");

  // P A Q = L U; solve L z = P b, U y = z, x = Q y
  std::vector<double> z(static_cast<std::size_t>(n), 0.0);
  for (Index i = 0; i < n; ++i) {
    double s = b[static_cast<std::size_t>(f.row_perm[static_cast<std::size_t>(i)])];
    for (Index j = 0; j < i; ++j) s -= f.lower_at(i, j) * z[static_cast<std::size_t>(j)];
    z[static_cast<std::size_t>(i)] = s;
  }
  std::vector<double> y(static_cast<std::size_t>(n), 0.0);
  for (Index i = n; i-- > 0;) {
    double s = z[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < n; ++j) s -= f.upper_at(i, j) * y[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s / f.upper_at(i, i);
  }
  SolveResult out;
  out.x.assign(static_cast<std::size_t>(n), 0.0);
  for (Index j = 0; j < n; ++j)
    out.x[static_cast<std::size_t>(f.col_perm[static_cast<std::size_t>(j)])] =
        y[static_cast<std::size_t>(j)];

  const std::vector<double> ax = a.multiply(out.x);
  double rnorm = 0.0, bnorm = 0.0, xnorm = 0.0;
  for (Index i = 0; i < n; ++i) {
    rnorm = std::max(rnorm, std::abs(ax[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]));
    bnorm = std::max(bnorm, std::abs(b[static_cast<std::size_t>(i)]));
  }
  for (double v : out.x) xnorm = std::max(xnorm, std::abs(v));
  std::vector<double> row_sums(static_cast<std::size_t>(n), 0.0);
  for (const Triplet& t : a.entries()) row_sums[static_cast<std::size_t>(t.row)] += std::abs(t.value);
  const double anorm = row_sums.empty() ? 0.0 : *std::max_element(row_sums.begin(), row_sums.end());
  const double denom = anorm * xnorm + bnorm;
  out.backward_error = denom == 0.0 ? 0.0 : rnorm / denom;
  return out;
}

double determinant(const SparseMatrix& a) {
  const Factors f = lu_complete_pivot(a, PivotMode::complete);
  double det = 1.0;
  for (Index k = 0; k < f.n; ++k) det *= f.upper_at(k, k);
  int sign = 1;
  for (const PivotEvent& e : f.log)
    if (e.kind == PivotEvent::Kind::row_swap || e.kind == PivotEvent::Kind::col_swap) sign = -sign;
  return sign * det;
}

Index rank_full_pivot(const SparseMatrix& a, double rel_tol) {
  std::vector<double> d = a.to_dense();
  const Index nr = a.nrows();
  const Index nc = a.ncols();
  auto at = [&](Index i, Index j) -> double& { return d[static_cast<std::size_t>(i * nc + j)]; };
  Index rank = 0;
  double max_pivot = 0.0;
  std::vector<Index> rows(static_cast<std::size_t>(nr)), cols(static_cast<std::size_t>(nc));
  std::iota(rows.begin(), rows.end(), Index(0));
  std::iota(cols.begin(), cols.end(), Index(0));
  for (Index k = 0; k < std::min(nr, nc); ++k) {
    Index pi = k, pj = k;
    double best = 0.0;
    for (Index i = k; i < nr; ++i)
      for (Index j = k; j < nc; ++j)
        if (std::abs(at(i, j)) > best) {
          best = std::abs(at(i, j));
          pi = i;
          pj = j;
        }
    max_pivot = std::max(max_pivot, best);
    if (best == 0.0 || best <= rel_tol * max_pivot) break;
    if (pi != k)
      for (Index j = 0; j < nc; ++j) std::swap(at(pi, j), at(k, j));
    if (pj != k)
      for (Index i = 0; i < nr; ++i) std::swap(at(i, pj), at(i, k));
    for (Index i = k + 1; i < nr; ++i) {
      const double lik = at(i, k) / at(k, k);
      for (Index j = k; j < nc; ++j) at(i, j) -= lik * at(k, j);
    }
    ++rank;
  }
  return rank;
}

RankCheckResult rank_bound_check(const BlockRanks& blocks, bool det_nonzero) {
  if (blocks.d != blocks.a - (blocks.b + blocks.c) || blocks.d < 0)
    throw std::invalid_argument("inconsistent block sizes: d must equal a - (b + c) >= 0");
  if (blocks.rank_b > blocks.b || blocks.rank_c > blocks.c)
    throw std::invalid_argument("rank exceeds block size");
  RankCheckResult r;
  if (!det_nonzero) {
    r.verdict = RankVerdict::vacuous;
    return r;
  }
  const Index sum = blocks.rank_b + blocks.rank_c;
  const Index lo = blocks.b + blocks.c - blocks.d;
  const Index hi = blocks.b + blocks.c;
  r.verdict = (sum >= lo && sum <= hi) ? RankVerdict::holds : RankVerdict::violated;
  r.tight = sum == lo;
  return r;
}

namespace {

void collect_cuts(const OrderNode& node, CutMetrics& m) {
  if (node.has_split) {
    m.per_split.push_back({node.level, node.sep_rows, node.sep_cols});
    m.max_cut_rows = std::max(m.max_cut_rows, node.sep_rows);
    m.max_cut_cols = std::max(m.max_cut_cols, node.sep_cols);
  }
  if (node.child1) collect_cuts(*node.child1, m);
  if (node.child2) collect_cuts(*node.child2, m);
  if (node.child3) collect_cuts(*node.child3, m);
}

}  // namespace

CutMetrics cut_metrics(const OrderingTree& tree) {
  CutMetrics m;
  for (const auto& c : tree.components) collect_cuts(*c, m);
  return m;
}

std::vector<char> fill_region_mask(const OrderingTree& tree) {
  const Index n = tree.nrows;
  std::vector<char> mask(static_cast<std::size_t>(n * n), 0);

  // zone of a position among a split node's children: 1, 2, or 0 (separator)
  auto row_zone = [](const OrderNode& nd, Index i) {
    if (nd.child1 && i >= nd.child1->row_begin && i < nd.child1->row_end) return 1;
    if (nd.child2 && i >= nd.child2->row_begin && i < nd.child2->row_end) return 2;
    return 0;
  };
  auto col_zone = [](const OrderNode& nd, Index j) {
    if (nd.child1 && j >= nd.child1->col_begin && j < nd.child1->col_end) return 1;
    if (nd.child2 && j >= nd.child2->col_begin && j < nd.child2->col_end) return 2;
    return 0;
  };

  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < tree.ncols; ++j) {
      const OrderNode* node = nullptr;
      for (const auto& c : tree.components)
        if (i >= c->row_begin && i < c->row_end) node = c.get();
      if (!node || j < node->col_begin || j >= node->col_end) continue;  // cross-component
      bool allowed = true;
      while (node->has_split) {
        const int zr = row_zone(*node, i);
        const int zc = col_zone(*node, j);
        if (zr == 0 || zc == 0) break;  // separator row or column: permitted
        if (zr != zc) {
          allowed = false;
          break;
        }
        node = zr == 1 ? node->child1.get() : node->child2.get();
      }
      if (allowed) mask[static_cast<std::size_t>(i * n + j)] = 1;
    }
  }
  return mask;
}

}  // namespace vmo
