#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "vmo/layout.hpp"

using namespace vmo;

namespace {

LayoutParams params_for(int dim) {
  LayoutParams p;
  p.dim = dim;
  return p;
}

PointSet two_points_d4() {
  PointSet x(4, 2);
  x[1][0] = 2.0;
  return x;
}

Hypergraph k2() { return Hypergraph::with_unit_weights(2, {{0, 1}}); }

// spanning tree plus extra hyperedges; always connected
Hypergraph random_connected_hypergraph(std::mt19937_64& eng, Index max_k) {
  const Index k = 2 + uniform_index(eng, max_k - 1);
  std::vector<std::vector<Index>> edges;
  for (Index v = 1; v < k; ++v) edges.push_back({uniform_index(eng, v), v});
  const Index extra = uniform_index(eng, k);
  for (Index t = 0; t < extra; ++t) {
    std::vector<Index> e;
    const Index sz = 2 + uniform_index(eng, std::min<Index>(k, 4) - 1);
    for (Index s = 0; s < sz; ++s) e.push_back(uniform_index(eng, k));
    edges.push_back(std::move(e));
  }
  Hypergraph g = Hypergraph::with_unit_weights(k, std::move(edges));
  for (auto& w : g.vertex_weights) w = 0.5 + uniform01(eng);
  for (auto& c : g.hyperedge_costs) c = 0.5 + uniform01(eng);
  return g;
}

PointSet random_points(std::mt19937_64& eng, Index k, int dim, double scale = 1.0) {
  PointSet x(dim, k);
  for (Index v = 0; v < k; ++v)
    for (int m = 0; m < dim; ++m) x[v][m] = scale * (2.0 * uniform01(eng) - 1.0);
  return x;
}

// central finite differences of the energy
PointSet fd_gradient(const Hypergraph& g, PointSet x, const LayoutParams& p, double h) {
  PointSet grad(p.dim, g.num_vertices);
  for (Index v = 0; v < g.num_vertices; ++v)
    for (int m = 0; m < p.dim; ++m) {
      const double orig = x[v][m];
      x[v][m] = orig + h;
      const double fp = energy(g, x, p);
      x[v][m] = orig - h;
      const double fm = energy(g, x, p);
      x[v][m] = orig;
      grad[v][m] = (fp - fm) / (2.0 * h);
    }
  return grad;
}

double rel_error(const PointSet& a, const PointSet& b) {
  double num = 0.0, den = 0.0;
  for (Index v = 0; v < a.size(); ++v)
    for (int m = 0; m < a.dim(); ++m) {
      num += (a[v][m] - b[v][m]) * (a[v][m] - b[v][m]);
      den += b[v][m] * b[v][m];
    }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-30);
}

}  // namespace

TEST_CASE("energy of a single vertex is zero") {
  Hypergraph g = Hypergraph::with_unit_weights(1, {});
  PointSet x(4, 1);
  CHECK(energy(g, x, params_for(4)) == 0.0);
}

TEST_CASE("energy of the two-point configuration") {
  // rubber 1, repulsion 1/4
  CHECK(energy(k2(), two_points_d4(), params_for(4)) == doctest::Approx(1.25).epsilon(1e-14));
}

TEST_CASE("energy scales as theta^2 rubber + theta^(2-d) repulsion") {
  std::mt19937_64 eng(3);
  for (int dim : {3, 4, 5}) {
    LayoutParams p = params_for(dim);
    Hypergraph g = random_connected_hypergraph(eng, 8);
    PointSet x = random_points(eng, g.num_vertices, dim, 2.0);
    if (!x.pairwise_distinct()) continue;
    // f(x) = R + S, f(tx) = t^2 R + t^(2-d) S; solve for R,S at t=2 and
    // verify the prediction at t=3
    const double f1 = energy(g, x, p);
    PointSet tx = x;
    for (double& c : tx.data()) c *= 2.0;
    const double f2 = energy(g, tx, p);
    const double a = 4.0;
    const double b = std::pow(2.0, -(double)(dim - 2));
    const double S = (f2 - a * f1) / (b - a);
    const double R = f1 - S;
    CHECK(R >= -1e-9 * f1);
    CHECK(S >= -1e-9 * f1);
    PointSet sx = x;
    for (double& c : sx.data()) c *= 3.0;
    CHECK(energy(g, sx, p) ==
          doctest::Approx(9.0 * R + std::pow(3.0, -(double)(dim - 2)) * S).epsilon(1e-9));
  }
}

TEST_CASE("energy invariance under translation and rotation") {
  std::mt19937_64 eng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 3 + static_cast<int>(uniform_index(eng, 3));
    LayoutParams p = params_for(dim);
    Hypergraph g = random_connected_hypergraph(eng, 10);
    PointSet x = random_points(eng, g.num_vertices, dim, 2.0);
    if (!x.pairwise_distinct()) continue;
    const double f0 = energy(g, x, p);

    // random rotation via Gram-Schmidt on a random matrix
    std::vector<std::vector<double>> r(static_cast<std::size_t>(dim),
                                       std::vector<double>(static_cast<std::size_t>(dim)));
    for (auto& row : r)
      for (double& v : row) v = 2.0 * uniform01(eng) - 1.0;
    for (int i = 0; i < dim; ++i) {
      auto& ri = r[static_cast<std::size_t>(i)];
      for (int j = 0; j < i; ++j) {
        const auto& rj = r[static_cast<std::size_t>(j)];
        double dot = 0;
        for (int t = 0; t < dim; ++t) dot += ri[static_cast<std::size_t>(t)] * rj[static_cast<std::size_t>(t)];
        for (int t = 0; t < dim; ++t) ri[static_cast<std::size_t>(t)] -= dot * rj[static_cast<std::size_t>(t)];
      }
      double norm = 0;
      for (int t = 0; t < dim; ++t) norm += ri[static_cast<std::size_t>(t)] * ri[static_cast<std::size_t>(t)];
      norm = std::sqrt(norm);
      for (int t = 0; t < dim; ++t) ri[static_cast<std::size_t>(t)] /= norm;
    }
    std::vector<double> shift(static_cast<std::size_t>(dim));
    for (double& v : shift) v = 4.0 * uniform01(eng) - 2.0;

    PointSet y(dim, g.num_vertices);
    for (Index v = 0; v < g.num_vertices; ++v)
      for (int i = 0; i < dim; ++i) {
        double s = shift[static_cast<std::size_t>(i)];
        for (int t = 0; t < dim; ++t) s += r[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] * x[v][t];
        y[v][i] = s;
      }
    CHECK(std::abs(energy(g, y, p) - f0) < 1e-9 * f0);
  }
}

TEST_CASE("coincident points raise a domain error") {
  Hypergraph g = k2();
  PointSet x(4, 2);  // both at the origin
  CHECK_THROWS_AS(energy(g, x, params_for(4)), std::domain_error);
  CHECK_THROWS_AS(gradient_exact(g, x, params_for(4)), std::domain_error);
}

TEST_CASE("gradient of the two-point configuration") {
  PointSet y = gradient_exact(k2(), two_points_d4(), params_for(4));
  CHECK(y[0][0] == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(y[1][0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(y[0][1] == doctest::Approx(0.0));
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 eng(31);
  int done = 0;
  while (done < 50) {
    const int dim = 3 + static_cast<int>(uniform_index(eng, 3));
    LayoutParams p = params_for(dim);
    Hypergraph g = random_connected_hypergraph(eng, 20);
    PointSet x = random_points(eng, g.num_vertices, dim, 3.0);
    if (!x.pairwise_distinct()) continue;
    // keep away from singularities so the differences stay stable
    double dmin = 1e9;
    for (Index i = 0; i < x.size(); ++i)
      for (Index j = i + 1; j < x.size(); ++j) dmin = std::min(dmin, x.distance(i, j));
    if (dmin < 0.05) continue;
    const PointSet analytic = gradient_exact(g, x, p);
    const PointSet numeric = fd_gradient(g, x, p, 1e-4);
    CHECK(rel_error(analytic, numeric) < 1e-5);
    ++done;
  }
}

TEST_CASE("gradient components sum to zero") {
  std::mt19937_64 eng(37);
  for (int trial = 0; trial < 20; ++trial) {
    LayoutParams p = params_for(4);
    Hypergraph g = random_connected_hypergraph(eng, 15);
    PointSet x = random_points(eng, g.num_vertices, 4, 2.0);
    if (!x.pairwise_distinct()) continue;
    PointSet y = gradient_exact(g, x, p);
    for (int m = 0; m < 4; ++m) {
      double s = 0.0;
      double scale = 0.0;
      for (Index v = 0; v < y.size(); ++v) {
        s += y[v][m];
        scale += std::abs(y[v][m]);
      }
      CHECK(std::abs(s) < 1e-12 * std::max(scale, 1.0));
    }
  }
}

TEST_CASE("spatial tree aggregates") {
  SUBCASE("single point") {
    PointSet x(4, 1);
    x[0][2] = 3.0;
    std::vector<double> w{2.5};
    SpatialTree t = SpatialTree::build(x, w);
    CHECK(t.total_weight() == 2.5);
    CHECK(t.node(t.root()).first_child == SpatialTree::kDummy);
    CHECK(t.centroid(t.root())[2] == 3.0);
  }
  SUBCASE("mass and centroid of random point sets") {
    std::mt19937_64 eng(43);
    for (int trial = 0; trial < 10; ++trial) {
      PointSet x = random_points(eng, 100, 4, 5.0);
      std::vector<double> w(100);
      for (double& v : w) v = 0.5 + uniform01(eng);
      SpatialTree t = SpatialTree::build(x, w);
      double total = 0.0;
      std::vector<double> centroid(4, 0.0);
      for (Index i = 0; i < 100; ++i) {
        total += w[static_cast<std::size_t>(i)];
        for (int m = 0; m < 4; ++m)
          centroid[static_cast<std::size_t>(m)] += w[static_cast<std::size_t>(i)] * x[i][m];
      }
      CHECK(t.total_weight() == doctest::Approx(total).epsilon(1e-12));
      for (int m = 0; m < 4; ++m)
        CHECK(t.centroid(t.root())[m] ==
              doctest::Approx(centroid[static_cast<std::size_t>(m)] / total).epsilon(1e-12));
    }
  }
}

TEST_CASE("tree gradient with theta 0 equals the exact gradient") {
  std::mt19937_64 eng(47);
  for (int trial = 0; trial < 10; ++trial) {
    LayoutParams p = params_for(4);
    p.opening_threshold = 0.0;
    Hypergraph g = random_connected_hypergraph(eng, 25);
    PointSet x = random_points(eng, g.num_vertices, 4, 3.0);
    if (!x.pairwise_distinct()) continue;
    SpatialTree t = SpatialTree::build(x, g.vertex_weights, p.leaf_capacity);
    PointSet approx = gradient_approx(g, x, t, p);
    PointSet exact = gradient_exact(g, x, p);
    for (Index v = 0; v < x.size(); ++v)
      for (int m = 0; m < 4; ++m)
        CHECK(approx[v][m] == doctest::Approx(exact[v][m]).epsilon(1e-12));
  }
}

TEST_CASE("tree gradient error at theta 0.5 on 500 uniform points") {
  std::mt19937_64 eng(53);
  LayoutParams p = params_for(4);
  Hypergraph g = Hypergraph::with_unit_weights(500, {{0, 1}});
  PointSet x(4, 500);
  for (Index v = 0; v < 500; ++v)
    for (int m = 0; m < 4; ++m) x[v][m] = uniform01(eng);
  REQUIRE(x.pairwise_distinct());

  const PointSet exact = gradient_exact(g, x, p);
  SpatialTree t = SpatialTree::build(x, g.vertex_weights, p.leaf_capacity);
  const PointSet approx = gradient_approx(g, x, t, p);

  std::vector<double> rel(static_cast<std::size_t>(x.size()), 0.0);
  for (Index v = 0; v < x.size(); ++v) {
    double errn = 0.0, refn = 0.0;
    for (int m = 0; m < 4; ++m) {
      const double d = approx[v][m] - exact[v][m];
      errn += d * d;
      refn += exact[v][m] * exact[v][m];
    }
    rel[static_cast<std::size_t>(v)] = std::sqrt(errn) / std::max(std::sqrt(refn), 1e-30);
  }
  std::sort(rel.begin(), rel.end());
  const double p95 = rel[static_cast<std::size_t>(std::floor(0.95 * (rel.size() - 1)))];
  CHECK(p95 < 0.01);
}

TEST_CASE("far-away cluster acts like one aggregated charge") {
  // two tight clusters separated by 100x their diameter
  std::mt19937_64 eng(59);
  const Index per = 20;
  PointSet x(4, 2 * per);
  for (Index v = 0; v < per; ++v)
    for (int m = 0; m < 4; ++m) x[v][m] = 0.01 * uniform01(eng);
  for (Index v = per; v < 2 * per; ++v)
    for (int m = 0; m < 4; ++m) x[v][m] = (m == 0 ? 2.0 : 0.0) + 0.01 * uniform01(eng);
  Hypergraph g = Hypergraph::with_unit_weights(2 * per, {{0, per}});
  LayoutParams p = params_for(4);

  SpatialTree t = SpatialTree::build(x, g.vertex_weights, p.leaf_capacity);
  const PointSet approx = gradient_approx(g, x, t, p);
  const PointSet exact = gradient_exact(g, x, p);

  for (Index v = 0; v < x.size(); ++v) {
    double err = 0.0, ref = 0.0;
    for (int m = 0; m < 4; ++m) {
      err += (approx[v][m] - exact[v][m]) * (approx[v][m] - exact[v][m]);
      ref += exact[v][m] * exact[v][m];
    }
    CHECK(std::sqrt(err) <= 0.001 * std::max(std::sqrt(ref), 1e-30));
  }
}

TEST_CASE("descent finds the two-point equilibrium") {
  std::mt19937_64 eng(61);
  LayoutParams p = params_for(4);
  for (int trial = 0; trial < 5; ++trial) {
    PointSet x(4, 2);
    for (int m = 0; m < 4; ++m) {
      x[0][m] = uniform01(eng);
      x[1][m] = uniform01(eng);
    }
    PointSet r = descend(k2(), x, p, p.descent_iters);
    CHECK(r.distance(0, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(0.01 / std::sqrt(2.0)));
  }
}

TEST_CASE("descent leaves a single vertex untouched") {
  Hypergraph g = Hypergraph::with_unit_weights(1, {});
  PointSet x(4, 1);
  x[0][0] = 7.0;
  PointSet r = descend(g, x, params_for(4), 50);
  CHECK(r[0][0] == 7.0);
}

TEST_CASE("descent never increases the energy") {
  std::mt19937_64 eng(67);
  LayoutParams p = params_for(4);
  Hypergraph g = random_connected_hypergraph(eng, 50);
  PointSet x = random_points(eng, g.num_vertices, 4, 1.0);
  REQUIRE(x.pairwise_distinct());
  const double before = energy(g, x, p);
  PointSet r = descend(g, x, p, 60);
  CHECK(energy(g, r, p) <= before);
}

TEST_CASE("descent rejects disconnected hypergraphs") {
  Hypergraph g = Hypergraph::with_unit_weights(4, {{0, 1}, {2, 3}});
  std::mt19937_64 eng(71);
  PointSet x = random_points(eng, 4, 4, 1.0);
  CHECK_THROWS_AS(descend(g, x, params_for(4), 10), std::invalid_argument);
  CHECK_THROWS_AS(multilevel_layout(g, params_for(4)), std::invalid_argument);
}

TEST_CASE("multilevel layout of K2 reaches the equilibrium separation") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    LayoutParams p = params_for(4);
    p.seed = seed;
    PointSet x = multilevel_layout(k2(), p);
    CHECK(x.distance(0, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(0.05 / std::sqrt(2.0)));
  }
}

TEST_CASE("multilevel layout of a path is elongated") {
  Hypergraph p3 = Hypergraph::with_unit_weights(3, {{0, 1}, {1, 2}});
  LayoutParams p = params_for(4);
  p.seed = 5;
  PointSet x = multilevel_layout(p3, p);
  REQUIRE(x.pairwise_distinct());
  for (Index v = 0; v < 3; ++v)
    for (int m = 0; m < 4; ++m) CHECK(std::isfinite(x[v][m]));
  // middle vertex close to the midpoint of the outer two
  double mid_dist = 0.0;
  for (int m = 0; m < 4; ++m) {
    const double mid = 0.5 * (x[0][m] + x[2][m]);
    mid_dist += (x[1][m] - mid) * (x[1][m] - mid);
  }
  CHECK(std::sqrt(mid_dist) < x.distance(0, 2));
}

TEST_CASE("multilevel layout is deterministic for a fixed seed") {
  std::mt19937_64 eng(73);
  Hypergraph g = random_connected_hypergraph(eng, 40);
  LayoutParams p = params_for(4);
  p.seed = 99;
  PointSet a = multilevel_layout(g, p);
  PointSet b = multilevel_layout(g, p);
  CHECK(a.data() == b.data());
  CHECK(a.pairwise_distinct());
}

TEST_CASE("multilevel layout coarsens large graphs") {
  const Index k = 150;
  std::vector<std::vector<Index>> edges;
  for (Index v = 1; v < k; ++v) edges.push_back({v - 1, v});
  Hypergraph g = Hypergraph::with_unit_weights(k, std::move(edges));
  LayoutParams p = params_for(4);
  p.seed = 17;
  PointSet x = multilevel_layout(g, p);
  CHECK(x.size() == k);
  CHECK(x.pairwise_distinct());
}

TEST_CASE("finegrain points are midpoints") {
  SparseMatrix m = SparseMatrix::identity(2);
  PointSet bip(4, 4);
  bip[2][0] = 2.0;  // c0 at (2,0,0,0); r0 at origin
  bip[1][1] = 4.0;  // r1 at (0,4,0,0)
  bip[3][1] = 6.0;  // c1 at (0,6,0,0)
  PointSet fg = finegrain_points(bip, m);
  REQUIRE(fg.size() == m.nnz());
  CHECK(fg[0][0] == 1.0);  // nonzero (0,0) between r0 and c0
  CHECK(fg[0][1] == 0.0);
  CHECK(fg[1][1] == 5.0);  // nonzero (1,1) between r1 and c1
}

TEST_CASE("finegrain point count equals nnz") {
  std::mt19937_64 eng(83);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Triplet> t;
    for (Index i = 0; i < 6; ++i)
      for (Index j = 0; j < 6; ++j)
        if (uniform01(eng) < 0.3) t.push_back({i, j, 1.0});
    SparseMatrix m = SparseMatrix::from_triplets(6, 6, std::move(t));
    PointSet bip = random_points(eng, 12, 4, 1.0);
    CHECK(finegrain_points(bip, m).size() == m.nnz());
  }
}
