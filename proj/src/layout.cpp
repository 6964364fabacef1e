#include "vmo/layout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vmo {

namespace {

void check_preconditions(const Hypergraph& g, const PointSet& x, const LayoutParams& p) {
  p.validate();
  if (x.dim() != p.dim) throw std::invalid_argument("layout dimension mismatch");
  if (x.size() != g.num_vertices) throw std::invalid_argument("layout size mismatch");
  if (g.num_vertices < 1) throw std::invalid_argument("empty hypergraph");
  for (const auto& e : g.hyperedges)
    if (e.empty()) throw std::invalid_argument("empty hyperedge in layout input");
}

void check_distinct(const PointSet& x) {
  if (!x.pairwise_distinct()) throw std::domain_error("coincident layout points");
}

// centers z_j of all hyperedges
PointSet edge_centers(const Hypergraph& g, const PointSet& x) {
  PointSet z(x.dim(), g.num_hyperedges());
  for (Index j = 0; j < g.num_hyperedges(); ++j) {
    const auto& e = g.hyperedges[static_cast<std::size_t>(j)];
    auto zj = z[j];
    for (Index v : e) {
      auto xv = x[v];
      for (int m = 0; m < x.dim(); ++m) zj[m] += xv[m];
    }
    for (int m = 0; m < x.dim(); ++m) zj[m] /= static_cast<double>(e.size());
  }
  return z;
}

void add_rubber_gradient(const Hypergraph& g, const PointSet& x, PointSet& y) {
  const PointSet z = edge_centers(g, x);
  for (Index j = 0; j < g.num_hyperedges(); ++j) {
    const double c = g.hyperedge_costs[static_cast<std::size_t>(j)];
    auto zj = z[j];
    for (Index v : g.hyperedges[static_cast<std::size_t>(j)]) {
      auto xv = x[v];
      auto yv = y[v];
      for (int m = 0; m < x.dim(); ++m) yv[m] += c * (xv[m] - zj[m]);
    }
  }
}

}  // namespace

void LayoutParams::validate() const {
  if (dim < 3) throw std::invalid_argument("layout dimension must be at least 3");
  if (!(step_decay > 0.0 && step_decay < 1.0)) throw std::invalid_argument("step_decay in (0,1)");
  if (opening_threshold < 0.0) throw std::invalid_argument("opening_threshold must be >= 0");
  if (coarsest_size < 1) throw std::invalid_argument("coarsest_size must be >= 1");
  if (leaf_capacity < 1) throw std::invalid_argument("leaf_capacity must be >= 1");
}

double energy(const Hypergraph& g, const PointSet& x, const LayoutParams& p) {
  check_preconditions(g, x, p);
  const int d = p.dim;
  const double delta = p.repulsion_exponent();

  double rubber = 0.0;
  const PointSet z = edge_centers(g, x);
  for (Index j = 0; j < g.num_hyperedges(); ++j) {
    const double c = g.hyperedge_costs[static_cast<std::size_t>(j)];
    double s = 0.0;
    for (Index v : g.hyperedges[static_cast<std::size_t>(j)]) s += squared_distance(x[v], z[j]);
    rubber += c * s;
  }

  double repulsion = 0.0;
  const Index k = g.num_vertices;
  for (Index i = 0; i < k; ++i)
    for (Index j = i + 1; j < k; ++j) {
      const double r2 = x.distance2(i, j);
      if (r2 == 0.0) throw std::domain_error("coincident layout points");
      const double wiwj = g.vertex_weights[static_cast<std::size_t>(i)] *
                          g.vertex_weights[static_cast<std::size_t>(j)];
      repulsion += wiwj / std::pow(r2, 0.5 * delta);
    }
  (void)d;
  return 0.5 * rubber + repulsion;  // unordered pairs counted once = the half double sum
}

PointSet gradient_exact(const Hypergraph& g, const PointSet& x, const LayoutParams& p) {
  check_preconditions(g, x, p);
  const int d = p.dim;
  const double delta = p.repulsion_exponent();
  PointSet y(d, g.num_vertices);
  add_rubber_gradient(g, x, y);
  const Index k = g.num_vertices;
  for (Index n = 0; n < k; ++n) {
    auto xn = x[n];
    auto yn = y[n];
    const double wn = g.vertex_weights[static_cast<std::size_t>(n)];
    for (Index i = 0; i < k; ++i) {
      if (i == n) continue;
      auto xi = x[i];
      const double r2 = squared_distance(xi, xn);
      if (r2 == 0.0) throw std::domain_error("coincident layout points");
      const double coeff =
          delta * g.vertex_weights[static_cast<std::size_t>(i)] * wn / std::pow(r2, 0.5 * d);
      for (int m = 0; m < d; ++m) yn[m] += coeff * (xi[m] - xn[m]);
    }
  }
  return y;
}

PointSet gradient_approx(const Hypergraph& g, const PointSet& x, const SpatialTree& tree,
                         const LayoutParams& p) {
  check_preconditions(g, x, p);
  const int d = p.dim;
  const double delta = p.repulsion_exponent();
  const double theta = p.opening_threshold;
  PointSet y(d, g.num_vertices);
  add_rubber_gradient(g, x, y);

  const Index k = g.num_vertices;
  for (Index n = 0; n < k; ++n) {
    auto xn = x[n];
    auto yn = y[n];
    const double wn = g.vertex_weights[static_cast<std::size_t>(n)];
    Index t = tree.root();
    while (t != SpatialTree::kDummy) {
      const SpatialTree::Node& node = tree.node(t);
      auto xt = tree.centroid(t);
      const double r2 = squared_distance(xt, xn);
      const double dist = std::sqrt(r2);
      const bool far = dist > 0.0 && node.cell_diameter < theta * dist;
      if (far) {
        const double coeff = delta * node.weight * wn / std::pow(r2, 0.5 * d);
        for (int m = 0; m < d; ++m) yn[m] += coeff * (xt[m] - xn[m]);
        t = node.next;
      } else if (node.first_child != SpatialTree::kDummy) {
        t = node.first_child;
      } else {
        for (Index i : tree.leaf_points(t)) {
          if (i == n) continue;
          auto xi = x[i];
          const double s2 = squared_distance(xi, xn);
          if (s2 == 0.0) throw std::domain_error("coincident layout points");
          const double coeff =
              delta * g.vertex_weights[static_cast<std::size_t>(i)] * wn / std::pow(s2, 0.5 * d);
          for (int m = 0; m < d; ++m) yn[m] += coeff * (xi[m] - xn[m]);
        }
        t = node.next;
      }
    }
  }
  return y;
}

PointSet descend(const Hypergraph& g, PointSet x, const LayoutParams& p, int iters) {
  check_preconditions(g, x, p);
  check_distinct(x);
  if (connected_components(g).component_count() > 1)
    throw std::invalid_argument("descend requires a connected hypergraph (no minimum exists otherwise)");
  if (g.num_vertices == 1) return x;

  const int d = p.dim;
  double current_energy = energy(g, x, p);
  double step = -1.0;
  PointSet candidate(d, g.num_vertices);

  for (int it = 0; it < iters; ++it) {
    const SpatialTree tree = SpatialTree::build(x, g.vertex_weights, p.leaf_capacity);
    const PointSet y = gradient_approx(g, x, tree, p);

    double gmax = 0.0;
    for (Index n = 0; n < g.num_vertices; ++n) {
      double s = 0.0;
      auto yn = y[n];
      for (int m = 0; m < d; ++m) s += yn[m] * yn[m];
      gmax = std::max(gmax, s);
    }
    gmax = std::sqrt(gmax);
    if (gmax == 0.0) break;
    // no point may travel further than the bounding-box diagonal in one step
    const double cap = x.bounding_box_diagonal() / gmax;
    if (step < 0.0) step = 0.1 * cap;
    step = std::min(step, cap);
    if (!(step > 0.0)) break;

    bool accepted = false;
    double s = step;
    double new_energy = 0.0;
    for (int attempt = 0; attempt < 30; ++attempt) {
      for (Index n = 0; n < g.num_vertices; ++n) {
        auto xn = x[n];
        auto yn = y[n];
        auto cn = candidate[n];
        for (int m = 0; m < d; ++m) cn[m] = xn[m] - s * yn[m];
      }
      if (candidate.pairwise_distinct()) {
        new_energy = energy(g, candidate, p);
        if (new_energy <= current_energy) {
          accepted = true;
          break;
        }
      }
      s *= 0.5;
    }
    if (!accepted) break;
    std::swap(x, candidate);
    current_energy = new_energy;
    // adaptive schedule: accepted steps grow by 1/step_decay, rejected ones
    // were already halved; the cap above prevents blowup
    step = s / p.step_decay;
  }
  return x;
}

namespace {

PointSet random_unit_cube(Index k, int d, std::mt19937_64& eng) {
  PointSet x(d, k);
  for (Index v = 0; v < k; ++v) {
    auto p = x[v];
    for (int m = 0; m < d; ++m) p[m] = uniform01(eng);
  }
  // duplicates are essentially impossible; redraw to guarantee membership in U
  for (int guard = 0; guard < 64 && !x.pairwise_distinct(); ++guard)
    for (Index v = 1; v < k; ++v)
      for (Index w = 0; w < v; ++w)
        if (x.distance2(v, w) == 0.0) {
          auto pv = x[v];
          for (int m = 0; m < d; ++m) pv[m] = uniform01(eng);
        }
  return x;
}

Hypergraph drop_empty_edges(const Hypergraph& g) {
  Hypergraph h = g;
  std::vector<std::vector<Index>> edges;
  std::vector<double> costs;
  for (std::size_t j = 0; j < g.hyperedges.size(); ++j) {
    if (g.hyperedges[j].empty()) continue;
    edges.push_back(g.hyperedges[j]);
    costs.push_back(g.hyperedge_costs[j]);
  }
  h.hyperedges = std::move(edges);
  h.hyperedge_costs = std::move(costs);
  return h;
}

}  // namespace

PointSet multilevel_layout(const Hypergraph& g_in, const LayoutParams& p) {
  p.validate();
  if (g_in.num_vertices < 1) throw std::invalid_argument("empty hypergraph");
  const Hypergraph g0 = drop_empty_edges(g_in);
  if (connected_components(g0).component_count() > 1)
    throw std::invalid_argument("multilevel_layout requires a connected hypergraph");

  std::vector<Hypergraph> levels{g0};
  std::vector<CoarseningMap> maps;
  while (levels.back().num_vertices > p.coarsest_size) {
    auto [coarse, cm] = coarsen(levels.back());
    if (coarse.num_vertices >= levels.back().num_vertices) break;
    levels.push_back(std::move(coarse));
    maps.push_back(std::move(cm));
  }

  std::mt19937_64 eng(p.seed);
  PointSet x = random_unit_cube(levels.back().num_vertices, p.dim, eng);
  x = descend(levels.back(), std::move(x), p, p.descent_iters);

  for (std::size_t level = maps.size(); level-- > 0;) {
    const Hypergraph& fine = levels[level];
    const CoarseningMap& cm = maps[level];
    double spacing = x.mean_nearest_neighbor_distance();
    if (!(spacing > 0.0)) spacing = 1.0;
    const double jitter = p.jitter_magnitude * spacing;
    PointSet xf(p.dim, fine.num_vertices);
    for (Index v = 0; v < fine.num_vertices; ++v) {
      auto src = x[cm.fine_to_coarse[static_cast<std::size_t>(v)]];
      auto dst = xf[v];
      for (int m = 0; m < p.dim; ++m)
        dst[m] = p.prolong_scale * src[m] + jitter * (2.0 * uniform01(eng) - 1.0);
    }
    // prolonged points of the same coarse vertex may still coincide
    for (int guard = 0; guard < 64 && !xf.pairwise_distinct(); ++guard)
      for (Index v = 0; v < fine.num_vertices; ++v)
        for (Index w = 0; w < v; ++w)
          if (xf.distance2(v, w) == 0.0) {
            auto pv = xf[v];
            for (int m = 0; m < p.dim; ++m) pv[m] += jitter * (2.0 * uniform01(eng) - 1.0);
          }
    x = descend(fine, std::move(xf), p, p.descent_iters);
  }
  return x;
}

PointSet finegrain_points(const PointSet& bipartite_layout, const SparseMatrix& m) {
  if (bipartite_layout.size() != m.nrows() + m.ncols())
    throw std::invalid_argument("bipartite layout size mismatch");
  PointSet out(bipartite_layout.dim(), m.nnz());
  Index id = 0;
  for (const Triplet& t : m.entries()) {
    auto r = bipartite_layout[t.row];
    auto c = bipartite_layout[m.nrows() + t.col];
    auto dst = out[id++];
    for (int mm = 0; mm < bipartite_layout.dim(); ++mm) dst[mm] = 0.5 * (r[mm] + c[mm]);
  }
  return out;
}

}  // namespace vmo
