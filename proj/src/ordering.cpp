#include "vmo/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace vmo {

BipartiteGraph BipartiteGraph::from_matrix(const SparseMatrix& m) {
  BipartiteGraph g;
  g.nrows = m.nrows();
  g.ncols = m.ncols();
  g.edges.reserve(static_cast<std::size_t>(m.nnz()));
  for (const Triplet& t : m.entries()) g.edges.emplace_back(t.row, m.nrows() + t.col);
  return g;
}

HopcroftKarpResult hopcroft_karp(Index m_rows, Index m_cols,
                                 const std::vector<std::vector<Index>>& row_adj,
                                 const std::vector<Index>* initial_row_to_col) {
  if (m_rows != m_cols) throw std::invalid_argument("hopcroft_karp requires a square bipartite graph");
  const Index m = m_rows;
  HopcroftKarpResult r;
  r.row_to_col.assign(static_cast<std::size_t>(m), -1);
  r.col_to_row.assign(static_cast<std::size_t>(m), -1);
  if (initial_row_to_col) {
    for (Index i = 0; i < m; ++i) {
      const Index j = (*initial_row_to_col)[static_cast<std::size_t>(i)];
      if (j >= 0) {
        r.row_to_col[static_cast<std::size_t>(i)] = j;
        r.col_to_row[static_cast<std::size_t>(j)] = i;
      }
    }
  }

  const Index inf = std::numeric_limits<Index>::max();
  std::vector<Index> dist(static_cast<std::size_t>(m));
  std::deque<Index> queue;

  auto bfs = [&]() {
    bool found = false;
    queue.clear();
    for (Index i = 0; i < m; ++i) {
      if (r.row_to_col[static_cast<std::size_t>(i)] == -1) {
        dist[static_cast<std::size_t>(i)] = 0;
        queue.push_back(i);
      } else {
        dist[static_cast<std::size_t>(i)] = inf;
      }
    }
    while (!queue.empty()) {
      const Index i = queue.front();
      queue.pop_front();
      for (Index j : row_adj[static_cast<std::size_t>(i)]) {
        const Index next = r.col_to_row[static_cast<std::size_t>(j)];
        if (next == -1) {
          found = true;
        } else if (dist[static_cast<std::size_t>(next)] == inf) {
          dist[static_cast<std::size_t>(next)] = dist[static_cast<std::size_t>(i)] + 1;
          queue.push_back(next);
        }
      }
    }
    return found;
  };

  std::function<bool(Index)> dfs = [&](Index i) {
    for (Index j : row_adj[static_cast<std::size_t>(i)]) {
      const Index next = r.col_to_row[static_cast<std::size_t>(j)];
      if (next == -1 ||
          (dist[static_cast<std::size_t>(next)] == dist[static_cast<std::size_t>(i)] + 1 && dfs(next))) {
        r.row_to_col[static_cast<std::size_t>(i)] = j;
        r.col_to_row[static_cast<std::size_t>(j)] = i;
        return true;
      }
    }
    dist[static_cast<std::size_t>(i)] = inf;
    return false;
  };

  while (bfs()) {
    for (Index i = 0; i < m; ++i)
      if (r.row_to_col[static_cast<std::size_t>(i)] == -1) dfs(i);
  }

  for (Index i = 0; i < m; ++i)
    if (r.row_to_col[static_cast<std::size_t>(i)] == -1) r.unmatched_rows.push_back(i);
  for (Index j = 0; j < m; ++j)
    if (r.col_to_row[static_cast<std::size_t>(j)] == -1) r.unmatched_cols.push_back(j);
  r.perfect = r.unmatched_rows.empty();
  return r;
}

Matching strengthen_diagonal(const SparseMatrix& m) {
  if (!m.square()) throw std::invalid_argument("strengthen_diagonal requires a square matrix");
  const Index n = m.nrows();

  std::vector<Index> order(static_cast<std::size_t>(m.nnz()));
  std::iota(order.begin(), order.end(), Index(0));
  const auto& entries = m.entries();
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(entries[static_cast<std::size_t>(a)].value) >
           std::abs(entries[static_cast<std::size_t>(b)].value);
  });

  std::vector<Index> row_to_col(static_cast<std::size_t>(n), -1);
  std::vector<char> col_used(static_cast<std::size_t>(n), 0);
  for (Index id : order) {
    const Triplet& t = entries[static_cast<std::size_t>(id)];
    if (row_to_col[static_cast<std::size_t>(t.row)] == -1 && !col_used[static_cast<std::size_t>(t.col)]) {
      row_to_col[static_cast<std::size_t>(t.row)] = t.col;
      col_used[static_cast<std::size_t>(t.col)] = 1;
    }
  }

  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
  for (const Triplet& t : entries) adj[static_cast<std::size_t>(t.row)].push_back(t.col);
  HopcroftKarpResult hk = hopcroft_karp(n, n, adj, &row_to_col);
  if (!hk.perfect) throw StructuralSingularError(hk.unmatched_rows, hk.unmatched_cols);

  Matching mu;
  mu.m = n;
  mu.row_to_col = std::move(hk.row_to_col);
  mu.col_to_row = std::move(hk.col_to_row);
  return mu;
}

Split split_once(const BipartiteGraph& g, std::span<const Index> verts,
                 std::span<const Index> edge_ids, const PointSet& points, const Matching* mu,
                 const SplitParams& sp) {
  if (verts.size() < 2) throw DegenerateSplitError("fewer than two vertices");
  const PointSet local = points.gather(verts);
  {
    std::set<std::vector<double>> distinct;
    for (Index i = 0; i < local.size(); ++i) {
      auto p = local[i];
      distinct.emplace(p.begin(), p.end());
      if (distinct.size() >= 2) break;
    }
    if (distinct.size() < 2) throw DegenerateSplitError("fewer than two distinct points");
  }

  const Clustering clusters = kmeans_pp(local, 2, sp.lloyd_iters, sp.seed);
  auto z1 = clusters.centers[0];
  auto z2 = clusters.centers[1];
  const int d = points.dim();

  Split out;
  out.plane.normal.assign(z2.begin(), z2.end());
  for (int m = 0; m < d; ++m) out.plane.normal[static_cast<std::size_t>(m)] -= z1[m];
  out.plane.offset = 0.0;
  for (int m = 0; m < d; ++m)
    out.plane.offset += 0.5 * (z1[m] + z2[m]) * out.plane.normal[static_cast<std::size_t>(m)];

  std::unordered_map<Index, int> part;
  part.reserve(verts.size() * 2);
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const double d1 = squared_distance(local[static_cast<Index>(i)], z1);
    const double d2 = squared_distance(local[static_cast<Index>(i)], z2);
    part[verts[i]] = d1 <= d2 ? 1 : 2;
  }

  auto plane_dist = [&](Index v) {
    auto x = points[v];
    double s = -out.plane.offset;
    for (int m = 0; m < d; ++m) s += x[m] * out.plane.normal[static_cast<std::size_t>(m)];
    return std::abs(s);
  };

  // cut-edge loop; sequential, input edge order
  for (Index e : edge_ids) {
    const auto [v, w] = g.edges[static_cast<std::size_t>(e)];
    const int pv = part[v], pw = part[w];
    if (std::min(pv, pw) == 1 && std::max(pv, pw) == 2) {
      const Index closer = plane_dist(v) <= plane_dist(w) ? v : w;
      part[closer] = 3;
      if (mu) part[mu->mu(closer)] = 3;
    }
  }

  // group vertices (pairs when matched) and edges by part
  if (mu) {
    for (Index v : verts) {
      if (v >= g.nrows) continue;
      const int p = part[v];
      auto& dst = p == 1 ? out.v1 : p == 2 ? out.v2 : out.v3;
      dst.push_back(v);
      dst.push_back(mu->mu(v));
    }
  } else {
    for (Index v : verts) {
      const int p = part[v];
      (p == 1 ? out.v1 : p == 2 ? out.v2 : out.v3).push_back(v);
    }
  }
  for (Index e : edge_ids) {
    const auto [v, w] = g.edges[static_cast<std::size_t>(e)];
    const int q = std::max(part[v], part[w]);
    (q == 1 ? out.e1 : q == 2 ? out.e2 : out.e3).push_back(e);
  }
  return out;
}

namespace {

Index count_rows(std::span<const Index> verts, Index nrows) {
  Index c = 0;
  for (Index v : verts)
    if (v < nrows) ++c;
  return c;
}

struct TreeBuilder {
  const OrderingTree& tree;
  const OrderOptions& opts;

  std::unique_ptr<OrderNode> build(std::vector<Index> verts, std::vector<Index> edge_ids,
                                   int level, std::uint64_t seed) {
    auto node = std::make_unique<OrderNode>();
    node->level = level;
    node->verts = std::move(verts);
    const Index rows = count_rows(node->verts, tree.nrows);
    if (rows <= opts.min_block || level >= opts.max_depth || node->verts.size() < 2) return node;

    Split split;
    try {
      SplitParams sp;
      sp.seed = seed;
      sp.lloyd_iters = opts.lloyd_iters;
      split = split_once(tree.graph, node->verts, edge_ids, tree.points,
                         tree.matching ? &*tree.matching : nullptr, sp);
    } catch (const DegenerateSplitError&) {
      return node;
    }
    node->has_split = true;
    node->sep_rows = count_rows(split.v3, tree.nrows);
    node->sep_cols = static_cast<Index>(split.v3.size()) - node->sep_rows;
    node->split = std::move(split);

    if (!node->split.v1.empty())
      node->child1 = build(node->split.v1, node->split.e1, level + 1, mix_seed(seed, 1));
    if (!node->split.v2.empty())
      node->child2 = build(node->split.v2, node->split.e2, level + 1, mix_seed(seed, 2));
    if (opts.cut == CutStrategy::schur && !node->split.v3.empty() &&
        node->split.v3.size() < node->verts.size()) {
      std::unordered_set<Index> in_v3(node->split.v3.begin(), node->split.v3.end());
      std::vector<Index> e3_inner;
      for (Index e : node->split.e3) {
        const auto [v, w] = tree.graph.edges[static_cast<std::size_t>(e)];
        if (in_v3.count(v) && in_v3.count(w)) e3_inner.push_back(e);
      }
      node->child3 = build(node->split.v3, e3_inner, level + 1, mix_seed(seed, 3));
    }
    return node;
  }
};

struct Emitter {
  const OrderingTree& tree;
  Form form;
  std::vector<Index> row_perm, col_perm;

  void emit_verts(std::span<const Index> verts) {
    for (Index v : verts) {
      if (v < tree.nrows)
        row_perm.push_back(v);
      else
        col_perm.push_back(v - tree.nrows);
    }
  }

  void emit(OrderNode& node) {
    node.row_begin = static_cast<Index>(row_perm.size());
    node.col_begin = static_cast<Index>(col_perm.size());
    if (!node.has_split) {
      emit_verts(node.verts);
    } else {
      auto emit_child = [&](std::unique_ptr<OrderNode>& c) {
        if (c) emit(*c);
      };
      auto emit_sep = [&] {
        if (node.child3)
          emit(*node.child3);
        else
          emit_verts(node.split.v3);
      };
      if (form == Form::bbd) {
        emit_child(node.child1);
        emit_child(node.child2);
        emit_sep();
      } else {
        emit_child(node.child1);
        emit_sep();
        emit_child(node.child2);
      }
    }
    node.row_end = static_cast<Index>(row_perm.size());
    node.col_end = static_cast<Index>(col_perm.size());
  }
};

}  // namespace

void finalize_tree(OrderingTree& tree) {
  Emitter em{tree, tree.form, {}, {}};
  em.row_perm.reserve(static_cast<std::size_t>(tree.nrows));
  em.col_perm.reserve(static_cast<std::size_t>(tree.ncols));
  for (auto& c : tree.components) em.emit(*c);
  tree.row_perm = std::move(em.row_perm);
  tree.col_perm = std::move(em.col_perm);
}

OrderingTree recursive_order(const SparseMatrix& m, const OrderOptions& opts) {
  if (!m.square()) throw std::invalid_argument("recursive_order requires a square matrix");
  if (opts.min_block < 1) throw std::invalid_argument("min_block must be >= 1");

  OrderingTree tree;
  tree.form = opts.form;
  tree.cut = opts.cut;
  tree.nrows = m.nrows();
  tree.ncols = m.ncols();
  tree.graph = BipartiteGraph::from_matrix(m);
  if (opts.use_matching) tree.matching = strengthen_diagonal(m);

  Hypergraph hg = from_matrix(m, Representation::bipartite);
  if (opts.edge_costs_from_values) {
    double vmax = 0.0;
    for (const Triplet& t : m.entries()) vmax = std::max(vmax, std::abs(t.value));
    if (vmax > 0.0) {
      std::size_t j = 0;
      for (const Triplet& t : m.entries())
        hg.hyperedge_costs[j++] = std::max(std::abs(t.value), 1e-12 * vmax);
    }
  }

  const ComponentLabels labels = connected_components(hg);
  std::vector<std::vector<Index>> groups = labels.groups();
  std::stable_partition(groups.begin(), groups.end(),
                        [](const std::vector<Index>& g) { return g.size() > 1; });

  // one layout per connected component, bypassed when geometry is supplied
  if (opts.given_geometry) {
    if (opts.given_geometry->size() != tree.graph.num_vertices())
      throw std::invalid_argument("geometry point count mismatch");
    tree.points = *opts.given_geometry;
  } else {
    LayoutParams lp = opts.layout;
    tree.points = PointSet(lp.dim, tree.graph.num_vertices());
    double offset = 0.0;
    for (std::size_t ci = 0; ci < groups.size(); ++ci) {
      const auto& comp = groups[ci];
      lp.seed = mix_seed(opts.seed, 0x10000 + static_cast<std::uint64_t>(ci));
      Hypergraph sub = induced_component(hg, comp);
      PointSet local = multilevel_layout(sub, lp);
      // shift components apart along the first axis so the global picture
      // stays readable; splits never cross components
      auto [lo, hi] = local.bounding_box();
      const double shift = offset - lo[0];
      for (std::size_t i = 0; i < comp.size(); ++i) {
        auto dst = tree.points[comp[i]];
        auto src = local[static_cast<Index>(i)];
        for (int mm = 0; mm < lp.dim; ++mm) dst[mm] = src[mm];
        dst[0] += shift;
      }
      offset += (hi[0] - lo[0]) + std::max(1.0, 0.25 * (hi[0] - lo[0]));
    }
  }

  // per-component edge lists
  std::unordered_map<Index, std::size_t> group_of;
  for (std::size_t ci = 0; ci < groups.size(); ++ci)
    for (Index v : groups[ci]) group_of[v] = ci;
  std::vector<std::vector<Index>> comp_edges(groups.size());
  for (std::size_t e = 0; e < tree.graph.edges.size(); ++e)
    comp_edges[group_of[tree.graph.edges[e].first]].push_back(static_cast<Index>(e));

  TreeBuilder builder{tree, opts};
  for (std::size_t ci = 0; ci < groups.size(); ++ci) {
    std::vector<Index> verts;
    verts.reserve(groups[ci].size());
    if (tree.matching) {
      for (Index v : groups[ci])
        if (v < tree.nrows) {
          verts.push_back(v);
          verts.push_back(tree.matching->mu(v));
        }
    } else {
      verts = groups[ci];
    }
    tree.components.push_back(builder.build(std::move(verts), std::move(comp_edges[ci]), 0,
                                            mix_seed(opts.seed, static_cast<std::uint64_t>(ci))));
  }

  finalize_tree(tree);
  if (opts.cut == CutStrategy::twobit) refine_cut_twobit(tree, opts.twobit_levels);
  return tree;
}

namespace {

// part of vertex v in node's split: 1, 2, 3, or 0 when absent
struct PartLookup {
  std::unordered_map<const OrderNode*, std::unordered_map<Index, int>> cache;

  int part(const OrderNode& node, Index v) {
    auto& map = cache[&node];
    if (map.empty() && node.has_split) {
      for (Index x : node.split.v1) map[x] = 1;
      for (Index x : node.split.v2) map[x] = 2;
      for (Index x : node.split.v3) map[x] = 3;
    }
    auto it = map.find(v);
    return it == map.end() ? 0 : it->second;
  }
};

void refine_node(OrderingTree& tree, OrderNode& node, int levels, PartLookup& lookup) {
  if (node.child1) refine_node(tree, *node.child1, levels, lookup);
  if (node.child2) refine_node(tree, *node.child2, levels, lookup);
  if (node.child3) refine_node(tree, *node.child3, levels, lookup);
  if (!node.has_split || node.split.v3.empty()) return;

  std::unordered_set<Index> in_sep(node.split.v3.begin(), node.split.v3.end());
  std::unordered_map<Index, std::uint64_t> key;
  for (Index v : node.split.v3) key[v] = 0;

  for (Index e : node.split.e3) {
    const auto [a, b] = tree.graph.edges[static_cast<std::size_t>(e)];
    Index sep_v, other;
    if (in_sep.count(a) && !in_sep.count(b)) {
      sep_v = a;
      other = b;
    } else if (in_sep.count(b) && !in_sep.count(a)) {
      sep_v = b;
      other = a;
    } else {
      continue;  // both endpoints in the separator
    }
    const OrderNode* cur = &node;
    for (int lvl = 1; lvl <= levels; ++lvl) {
      const int p = lookup.part(*cur, other);
      const OrderNode* next =
          p == 1 ? cur->child1.get() : p == 2 ? cur->child2.get() : nullptr;
      if (!next || !next->has_split) break;
      const int cp = lookup.part(*next, other);
      const int shift = 2 * (levels - lvl);
      if (cp == 1)
        key[sep_v] |= std::uint64_t(0b10) << shift;
      else if (cp == 2)
        key[sep_v] |= std::uint64_t(0b01) << shift;
      else
        break;  // entered a deeper separator; no further bits
      cur = next;
    }
  }

  // stable sort by key; matched pairs move as units
  const std::size_t unit = tree.matching ? 2 : 1;
  std::vector<std::size_t> units(node.split.v3.size() / unit);
  std::iota(units.begin(), units.end(), std::size_t(0));
  auto unit_key = [&](std::size_t u) {
    std::uint64_t k = key[node.split.v3[u * unit]];
    if (unit == 2) k |= key[node.split.v3[u * unit + 1]];
    return k;
  };
  std::stable_sort(units.begin(), units.end(),
                   [&](std::size_t a, std::size_t b) { return unit_key(a) < unit_key(b); });
  std::vector<Index> reordered;
  reordered.reserve(node.split.v3.size());
  for (std::size_t u : units)
    for (std::size_t i = 0; i < unit; ++i) reordered.push_back(node.split.v3[u * unit + i]);
  node.split.v3 = std::move(reordered);
}

}  // namespace

void refine_cut_twobit(OrderingTree& tree, int levels) {
  if (levels <= 0) return;
  if (tree.cut != CutStrategy::twobit)
    throw std::invalid_argument("two-bit refinement requires a tree built with the twobit strategy");
  PartLookup lookup;
  for (auto& c : tree.components) refine_node(tree, *c, levels, lookup);
  finalize_tree(tree);
}

namespace {

void report_node(const OrderNode& node, std::vector<BlockReportRow>& rows) {
  rows.push_back({node.level, node.row_begin, node.row_end, node.col_begin, node.col_end,
                  node.sep_rows, node.sep_cols});
  if (node.child1) report_node(*node.child1, rows);
  if (node.child2) report_node(*node.child2, rows);
  if (node.child3) report_node(*node.child3, rows);
}

}  // namespace

std::vector<BlockReportRow> block_report(const OrderingTree& tree) {
  std::vector<BlockReportRow> rows;
  for (const auto& c : tree.components) report_node(*c, rows);
  return rows;
}

}  // namespace vmo
