#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <queue>
#include <random>

#include "vmo/hypergraph.hpp"

using namespace vmo;

namespace {

bool same_structure(const Hypergraph& a, const Hypergraph& b) {
  return a.num_vertices == b.num_vertices && a.hyperedges == b.hyperedges &&
         a.vertex_weights == b.vertex_weights && a.hyperedge_costs == b.hyperedge_costs;
}

// breadth-first search oracle for connectivity
std::vector<Index> bfs_labels(const Hypergraph& g) {
  std::vector<std::vector<Index>> inc = g.incidence();
  std::vector<Index> label(static_cast<std::size_t>(g.num_vertices), -1);
  for (Index s = 0; s < g.num_vertices; ++s) {
    if (label[static_cast<std::size_t>(s)] != -1) continue;
    std::queue<Index> q;
    q.push(s);
    label[static_cast<std::size_t>(s)] = s;
    while (!q.empty()) {
      const Index v = q.front();
      q.pop();
      for (Index e : inc[static_cast<std::size_t>(v)])
        for (Index w : g.hyperedges[static_cast<std::size_t>(e)])
          if (label[static_cast<std::size_t>(w)] == -1) {
            label[static_cast<std::size_t>(w)] = s;
            q.push(w);
          }
    }
  }
  return label;
}

Hypergraph random_hypergraph(std::mt19937_64& eng, Index max_k) {
  const Index k = 1 + uniform_index(eng, max_k);
  const Index l = uniform_index(eng, 2 * max_k);
  std::vector<std::vector<Index>> edges;
  for (Index j = 0; j < l; ++j) {
    std::vector<Index> e;
    const Index sz = uniform_index(eng, std::min<Index>(k, 5) + 1);
    for (Index t = 0; t < sz; ++t) e.push_back(uniform_index(eng, k));
    edges.push_back(std::move(e));
  }
  return Hypergraph::with_unit_weights(k, std::move(edges));
}

// the running example: V = {0..4}, E = [{0},{0,1},{1,2,3},{2,3}]
Hypergraph example_hypergraph() {
  return Hypergraph::with_unit_weights(5, {{0}, {0, 1}, {1, 2, 3}, {2, 3}});
}

}  // namespace

TEST_CASE("representations of small matrices") {
  SUBCASE("row-net of the 2x2 identity") {
    Hypergraph g = from_matrix(SparseMatrix::identity(2), Representation::row_net);
    CHECK(g.num_vertices == 2);
    REQUIRE(g.num_hyperedges() == 2);
    CHECK(g.hyperedges[0] == std::vector<Index>{0});
    CHECK(g.hyperedges[1] == std::vector<Index>{1});
  }
  SUBCASE("column-net of [[1,1],[0,1]]") {
    SparseMatrix m = SparseMatrix::from_triplets(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 1, 1}});
    Hypergraph g = from_matrix(m, Representation::column_net);
    CHECK(g.num_vertices == 2);
    REQUIRE(g.num_hyperedges() == 2);
    CHECK(g.hyperedges[0] == std::vector<Index>{0});     // col 0 = {r0}
    CHECK(g.hyperedges[1] == std::vector<Index>{0, 1});  // col 1 = {r0, r1}
  }
  SUBCASE("finegrain of the 2x2 identity") {
    Hypergraph g = from_matrix(SparseMatrix::identity(2), Representation::finegrain);
    CHECK(g.num_vertices == 2);  // v00, v11
    REQUIRE(g.num_hyperedges() == 4);
    Index singletons_v0 = 0, singletons_v1 = 0;
    for (const auto& e : g.hyperedges) {
      REQUIRE(e.size() == 1);
      (e[0] == 0 ? singletons_v0 : singletons_v1) += 1;
    }
    CHECK(singletons_v0 == 2);  // one row net + one column net each
    CHECK(singletons_v1 == 2);
  }
  SUBCASE("bipartite vertex order is rows then columns") {
    SparseMatrix m = SparseMatrix::from_triplets(2, 3, {{0, 2, 1}, {1, 0, 1}});
    Hypergraph g = from_matrix(m, Representation::bipartite);
    CHECK(g.num_vertices == 5);
    CHECK(g.hyperedges[0] == std::vector<Index>{0, 4});  // (0,2) -> {r0, c2}
    CHECK(g.hyperedges[1] == std::vector<Index>{1, 2});  // (1,0) -> {r1, c0}
  }
  SUBCASE("symmetric requires a symmetric pattern") {
    SparseMatrix bad = SparseMatrix::from_triplets(2, 2, {{0, 1, 1}});
    CHECK_THROWS_AS(from_matrix(bad, Representation::symmetric), RepresentationError);
    SparseMatrix ok = SparseMatrix::from_triplets(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}});
    Hypergraph g = from_matrix(ok, Representation::symmetric);
    CHECK(g.num_vertices == 2);
    REQUIRE(g.num_hyperedges() == 2);  // {0} and {0,1} once
    CHECK(g.hyperedges[0] == std::vector<Index>{0});
    CHECK(g.hyperedges[1] == std::vector<Index>{0, 1});
  }
}

TEST_CASE("dual of the running example") {
  Hypergraph d = dual(example_hypergraph());
  CHECK(d.num_vertices == 4);
  REQUIRE(d.num_hyperedges() == 5);
  CHECK(d.hyperedges[0] == std::vector<Index>{0, 1});
  CHECK(d.hyperedges[1] == std::vector<Index>{1, 2});
  CHECK(d.hyperedges[2] == std::vector<Index>{2, 3});
  CHECK(d.hyperedges[3] == std::vector<Index>{2, 3});
  CHECK(d.hyperedges[4].empty());
}

TEST_CASE("dual is an involution") {
  std::mt19937_64 eng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Hypergraph g = random_hypergraph(eng, 12);
    CHECK(same_structure(dual(dual(g)), g));
  }
}

TEST_CASE("dual of column-net equals row-net") {
  std::mt19937_64 eng(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Triplet> t;
    for (Index i = 0; i < 5; ++i)
      for (Index j = 0; j < 5; ++j)
        if (uniform01(eng) < 0.45) t.push_back({i, j, 1.0});
    SparseMatrix m = SparseMatrix::from_triplets(5, 5, std::move(t));
    CHECK(same_structure(dual(from_matrix(m, Representation::column_net)),
                         from_matrix(m, Representation::row_net)));
  }
}

TEST_CASE("connected components of the running example") {
  ComponentLabels labels = connected_components(example_hypergraph());
  CHECK(labels.label == std::vector<Index>{0, 0, 0, 0, 4});
  CHECK(labels.component_count() == 2);
}

TEST_CASE("components without hyperedges are singletons") {
  Hypergraph g = Hypergraph::with_unit_weights(4, {});
  CHECK(connected_components(g).component_count() == 4);
}

TEST_CASE("one covering hyperedge makes one component") {
  Hypergraph g = Hypergraph::with_unit_weights(6, {{0, 1, 2, 3, 4, 5}});
  ComponentLabels labels = connected_components(g);
  CHECK(labels.component_count() == 1);
  for (Index v : labels.label) CHECK(v == 0);
}

TEST_CASE("components agree with the BFS oracle") {
  std::mt19937_64 eng(29);
  for (int trial = 0; trial < 1000; ++trial) {
    Hypergraph g = random_hypergraph(eng, 30);
    CHECK(connected_components(g).label == bfs_labels(g));
  }
}

TEST_CASE("coarsening a path") {
  Hypergraph g = Hypergraph::with_unit_weights(4, {{0, 1}, {1, 2}, {2, 3}});
  auto [h, cm] = coarsen(g);
  CHECK(h.num_vertices == 2);
  REQUIRE(h.num_hyperedges() == 1);
  CHECK(h.hyperedges[0] == std::vector<Index>{0, 1});
  CHECK(h.hyperedge_costs[0] == 1.0);
  CHECK(cm.fine_to_coarse == std::vector<Index>{0, 0, 1, 1});
}

TEST_CASE("coarsening a star pairs sibling leaves") {
  Hypergraph g = Hypergraph::with_unit_weights(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  auto [h, cm] = coarsen(g);
  CHECK(h.num_vertices <= 3);
  CHECK(connected_components(h).component_count() == 1);
}

TEST_CASE("coarsening conserves weight and components") {
  std::mt19937_64 eng(41);
  for (int trial = 0; trial < 200; ++trial) {
    Hypergraph g = random_hypergraph(eng, 20);
    auto [h, cm] = coarsen(g);
    h.validate();

    double wf = 0, wc = 0;
    for (double w : g.vertex_weights) wf += w;
    for (double w : h.vertex_weights) wc += w;
    CHECK(wf == doctest::Approx(wc).epsilon(1e-12));

    // surjectivity
    std::vector<char> hit(static_cast<std::size_t>(h.num_vertices), 0);
    for (Index c : cm.fine_to_coarse) {
      REQUIRE(c >= 0);
      REQUIRE(c < h.num_vertices);
      hit[static_cast<std::size_t>(c)] = 1;
    }
    CHECK(std::count(hit.begin(), hit.end(), char(1)) == h.num_vertices);

    // component count preserved
    CHECK(connected_components(g).component_count() ==
          connected_components(h).component_count());
  }
}

TEST_CASE("coarsening a matchable graph makes progress") {
  Hypergraph g = Hypergraph::with_unit_weights(6, {{0, 1}, {2, 3}, {4, 5}, {1, 2}, {3, 4}});
  auto [h, cm] = coarsen(g);
  CHECK(h.num_vertices < g.num_vertices);
}

TEST_CASE("self-loop edges do not match") {
  Hypergraph g = Hypergraph::with_unit_weights(2, {{0}, {1}});
  auto [h, cm] = coarsen(g);
  CHECK(h.num_vertices == 2);      // nothing to pair
  CHECK(h.num_hyperedges() == 0);  // singletons dropped
}
