#include "vmo/hypergraph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace vmo {

Hypergraph Hypergraph::with_unit_weights(Index num_vertices,
                                         std::vector<std::vector<Index>> hyperedges) {
  Hypergraph g;
  g.num_vertices = num_vertices;
  g.vertex_weights.assign(static_cast<std::size_t>(num_vertices), 1.0);
  for (auto& e : hyperedges) {
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
  }
  g.hyperedges = std::move(hyperedges);
  g.hyperedge_costs.assign(g.hyperedges.size(), 1.0);
  return g;
}

std::vector<std::vector<Index>> Hypergraph::incidence() const {
  std::vector<std::vector<Index>> inc(static_cast<std::size_t>(num_vertices));
  for (std::size_t j = 0; j < hyperedges.size(); ++j)
    for (Index v : hyperedges[j]) inc[static_cast<std::size_t>(v)].push_back(static_cast<Index>(j));
  return inc;
}

void Hypergraph::validate() const {
  if (static_cast<Index>(vertex_weights.size()) != num_vertices)
    throw std::logic_error("vertex weight count mismatch");
  if (hyperedge_costs.size() != hyperedges.size())
    throw std::logic_error("hyperedge cost count mismatch");
  for (double w : vertex_weights)
    if (!(w > 0.0)) throw std::logic_error("vertex weight must be positive");
  for (double c : hyperedge_costs)
    if (!(c > 0.0)) throw std::logic_error("hyperedge cost must be positive");
  for (const auto& e : hyperedges) {
    for (Index v : e)
      if (v < 0 || v >= num_vertices) throw std::logic_error("hyperedge member out of range");
    if (!std::is_sorted(e.begin(), e.end()) ||
        std::adjacent_find(e.begin(), e.end()) != e.end())
      throw std::logic_error("hyperedge members must be sorted and unique");
  }
}

Hypergraph from_matrix(const SparseMatrix& m, Representation kind) {
  const Index nr = m.nrows(), nc = m.ncols();
  std::vector<std::vector<Index>> edges;
  Index k = 0;
  switch (kind) {
    case Representation::symmetric: {
      if (!m.structurally_symmetric())
        throw RepresentationError("symmetric representation requires a structurally symmetric matrix");
      k = nr;
      for (const Triplet& t : m.entries())
        if (t.row <= t.col) edges.push_back(t.row == t.col
                                                ? std::vector<Index>{t.row}
                                                : std::vector<Index>{t.row, t.col});
      break;
    }
    case Representation::bipartite: {
      k = nr + nc;
      for (const Triplet& t : m.entries()) edges.push_back({t.row, nr + t.col});
      break;
    }
    case Representation::column_net: {
      k = nr;
      edges.assign(static_cast<std::size_t>(nc), {});
      for (const Triplet& t : m.entries()) edges[static_cast<std::size_t>(t.col)].push_back(t.row);
      break;
    }
    case Representation::row_net: {
      k = nc;
      edges.assign(static_cast<std::size_t>(nr), {});
      for (const Triplet& t : m.entries()) edges[static_cast<std::size_t>(t.row)].push_back(t.col);
      break;
    }
    case Representation::finegrain: {
      // one vertex per nonzero, in row-major entry order; column nets first,
      // then row nets
      k = m.nnz();
      std::vector<std::vector<Index>> col_nets(static_cast<std::size_t>(nc));
      std::vector<std::vector<Index>> row_nets(static_cast<std::size_t>(nr));
      Index id = 0;
      for (const Triplet& t : m.entries()) {
        col_nets[static_cast<std::size_t>(t.col)].push_back(id);
        row_nets[static_cast<std::size_t>(t.row)].push_back(id);
        ++id;
      }
      edges.reserve(static_cast<std::size_t>(nr + nc));
      for (auto& e : col_nets) edges.push_back(std::move(e));
      for (auto& e : row_nets) edges.push_back(std::move(e));
      break;
    }
  }
  return Hypergraph::with_unit_weights(k, std::move(edges));
}

Hypergraph dual(const Hypergraph& g) {
  Hypergraph d;
  d.num_vertices = g.num_hyperedges();
  d.vertex_weights = g.hyperedge_costs;
  d.hyperedges = g.incidence();  // one hyperedge per original vertex, naturally sorted
  d.hyperedge_costs = g.vertex_weights;
  return d;
}

ComponentLabels connected_components(const Hypergraph& g) {
  std::vector<Index> p(static_cast<std::size_t>(g.num_vertices));
  std::iota(p.begin(), p.end(), Index(0));
  auto compress = [&](Index v) {
    while (p[static_cast<std::size_t>(v)] !=
           p[static_cast<std::size_t>(p[static_cast<std::size_t>(v)])])
      p[static_cast<std::size_t>(v)] = p[static_cast<std::size_t>(p[static_cast<std::size_t>(v)])];
  };
  for (const auto& e : g.hyperedges) {
    if (e.empty()) continue;
    Index root = g.num_vertices;
    for (Index v : e) {
      compress(v);
      root = std::min(root, p[static_cast<std::size_t>(v)]);
    }
    for (Index v : e) p[static_cast<std::size_t>(p[static_cast<std::size_t>(v)])] = root;
  }
  for (Index v = 0; v < g.num_vertices; ++v) compress(v);
  ComponentLabels out;
  out.label.resize(static_cast<std::size_t>(g.num_vertices));
  for (Index v = 0; v < g.num_vertices; ++v)
    out.label[static_cast<std::size_t>(v)] = p[static_cast<std::size_t>(v)];
  return out;
}

Index ComponentLabels::component_count() const {
  Index n = 0;
  for (std::size_t v = 0; v < label.size(); ++v)
    if (label[v] == static_cast<Index>(v)) ++n;
  return n;
}

std::vector<std::vector<Index>> ComponentLabels::groups() const {
  std::map<Index, std::vector<Index>> by_label;
  for (std::size_t v = 0; v < label.size(); ++v)
    by_label[label[v]].push_back(static_cast<Index>(v));
  std::vector<std::vector<Index>> out;
  out.reserve(by_label.size());
  for (auto& [l, verts] : by_label) out.push_back(std::move(verts));
  return out;
}

std::pair<Hypergraph, CoarseningMap> coarsen(const Hypergraph& g) {
  const Index k = g.num_vertices;
  std::vector<Index> mate(static_cast<std::size_t>(k), -1);

  // neighbor sets (distinct vertices sharing a hyperedge)
  std::vector<std::vector<Index>> nbr(static_cast<std::size_t>(k));
  for (const auto& e : g.hyperedges)
    for (Index v : e)
      for (Index w : e)
        if (w != v) nbr[static_cast<std::size_t>(v)].push_back(w);
  for (auto& ns : nbr) {
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  }

  // single-neighbor vertices match their neighbor; when that neighbor is
  // taken, pair them with a sibling leaf of the same neighbor so star-shaped
  // hypergraphs still shrink
  std::vector<Index> pending_leaf(static_cast<std::size_t>(k), -1);
  for (Index v = 0; v < k; ++v) {
    if (mate[static_cast<std::size_t>(v)] != -1) continue;
    if (nbr[static_cast<std::size_t>(v)].size() != 1) continue;
    const Index u = nbr[static_cast<std::size_t>(v)][0];
    if (mate[static_cast<std::size_t>(u)] == -1) {
      mate[static_cast<std::size_t>(v)] = u;
      mate[static_cast<std::size_t>(u)] = v;
    } else if (pending_leaf[static_cast<std::size_t>(u)] != -1) {
      const Index w = pending_leaf[static_cast<std::size_t>(u)];
      mate[static_cast<std::size_t>(v)] = w;
      mate[static_cast<std::size_t>(w)] = v;
      pending_leaf[static_cast<std::size_t>(u)] = -1;
    } else {
      pending_leaf[static_cast<std::size_t>(u)] = v;
    }
  }

  // greedy pass over hyperedges in descending cost (ties in list order)
  std::vector<Index> order(g.hyperedges.size());
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return g.hyperedge_costs[static_cast<std::size_t>(a)] >
           g.hyperedge_costs[static_cast<std::size_t>(b)];
  });
  for (Index j : order) {
    const auto& e = g.hyperedges[static_cast<std::size_t>(j)];
    if (e.size() < 2) continue;
    Index first = -1;
    for (Index v : e) {
      if (mate[static_cast<std::size_t>(v)] != -1) continue;
      if (first == -1) {
        first = v;
      } else {
        mate[static_cast<std::size_t>(first)] = v;
        mate[static_cast<std::size_t>(v)] = first;
        first = -1;
      }
    }
  }

  // coarse ids in order of each group's smallest member
  CoarseningMap cm;
  cm.fine_to_coarse.assign(static_cast<std::size_t>(k), -1);
  Index next = 0;
  for (Index v = 0; v < k; ++v) {
    if (cm.fine_to_coarse[static_cast<std::size_t>(v)] != -1) continue;
    cm.fine_to_coarse[static_cast<std::size_t>(v)] = next;
    const Index m = mate[static_cast<std::size_t>(v)];
    if (m != -1 && m > v) cm.fine_to_coarse[static_cast<std::size_t>(m)] = next;
    ++next;
  }
  cm.coarse_count = next;

  Hypergraph h;
  h.num_vertices = next;
  h.vertex_weights.assign(static_cast<std::size_t>(next), 0.0);
  for (Index v = 0; v < k; ++v)
    h.vertex_weights[static_cast<std::size_t>(cm.fine_to_coarse[static_cast<std::size_t>(v)])] +=
        g.vertex_weights[static_cast<std::size_t>(v)];

  // project hyperedges, drop those collapsing to <= 1 member, merge duplicates
  // summing costs (first-occurrence order)
  std::map<std::vector<Index>, std::size_t> seen;
  for (std::size_t j = 0; j < g.hyperedges.size(); ++j) {
    std::vector<Index> e;
    e.reserve(g.hyperedges[j].size());
    for (Index v : g.hyperedges[j])
      e.push_back(cm.fine_to_coarse[static_cast<std::size_t>(v)]);
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    if (e.size() < 2) continue;
    auto it = seen.find(e);
    if (it != seen.end()) {
      h.hyperedge_costs[it->second] += g.hyperedge_costs[j];
    } else {
      seen.emplace(e, h.hyperedges.size());
      h.hyperedges.push_back(std::move(e));
      h.hyperedge_costs.push_back(g.hyperedge_costs[j]);
    }
  }
  return {std::move(h), std::move(cm)};
}

Hypergraph induced_component(const Hypergraph& g, std::span<const Index> verts,
                             std::vector<Index>* local_of) {
  std::vector<Index> local(static_cast<std::size_t>(g.num_vertices), -1);
  for (std::size_t i = 0; i < verts.size(); ++i)
    local[static_cast<std::size_t>(verts[i])] = static_cast<Index>(i);
  Hypergraph h;
  h.num_vertices = static_cast<Index>(verts.size());
  h.vertex_weights.reserve(verts.size());
  for (Index v : verts) h.vertex_weights.push_back(g.vertex_weights[static_cast<std::size_t>(v)]);
  for (std::size_t j = 0; j < g.hyperedges.size(); ++j) {
    const auto& e = g.hyperedges[j];
    if (e.empty()) continue;
    if (local[static_cast<std::size_t>(e[0])] == -1) continue;
    std::vector<Index> le;
    le.reserve(e.size());
    for (Index v : e) {
      const Index lv = local[static_cast<std::size_t>(v)];
      if (lv == -1) throw std::logic_error("hyperedge crosses component boundary");
      le.push_back(lv);
    }
    std::sort(le.begin(), le.end());
    h.hyperedges.push_back(std::move(le));
    h.hyperedge_costs.push_back(g.hyperedge_costs[j]);
  }
  if (local_of) *local_of = std::move(local);
  return h;
}

}  // namespace vmo
