#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "vmo/partition.hpp"

using namespace vmo;

namespace {

PointSet points_1d(std::initializer_list<double> xs) {
  PointSet p(4, static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) p[i++][0] = x;
  return p;
}

// exhaustive k-means optimum: every assignment of k points to m parts, with
// centroid centers
double brute_force_opt(const PointSet& pts, Index m) {
  const Index k = pts.size();
  const int d = pts.dim();
  std::vector<Index> assign(static_cast<std::size_t>(k), 0);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    std::vector<std::vector<double>> centroid(static_cast<std::size_t>(m),
                                              std::vector<double>(static_cast<std::size_t>(d), 0.0));
    std::vector<Index> count(static_cast<std::size_t>(m), 0);
    for (Index i = 0; i < k; ++i) {
      auto p = pts[i];
      auto& c = centroid[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
      for (int t = 0; t < d; ++t) c[static_cast<std::size_t>(t)] += p[t];
      ++count[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
    }
    double cost = 0.0;
    for (Index i = 0; i < k; ++i) {
      auto p = pts[i];
      const Index j = assign[static_cast<std::size_t>(i)];
      for (int t = 0; t < d; ++t) {
        const double diff = p[t] - centroid[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] /
                                       static_cast<double>(count[static_cast<std::size_t>(j)]);
        cost += diff * diff;
      }
    }
    best = std::min(best, cost);
    // next assignment
    Index i = 0;
    while (i < k) {
      if (++assign[static_cast<std::size_t>(i)] < m) break;
      assign[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == k) break;
  }
  return best;
}

}  // namespace

TEST_CASE("objective examples") {
  CHECK(kmeans_objective(points_1d({0, 10}), points_1d({0, 10})) == 0.0);
  CHECK(kmeans_objective(points_1d({0, 2}), points_1d({1})) == doctest::Approx(2.0));
  // duplicate centers change nothing
  CHECK(kmeans_objective(points_1d({0, 2, 5}), points_1d({1, 1})) ==
        doctest::Approx(kmeans_objective(points_1d({0, 2, 5}), points_1d({1}))));
}

TEST_CASE("one cluster converges to the centroid") {
  PointSet pts = points_1d({0, 1, 2, 7});
  Clustering c = kmeans_pp(pts, 1, 3, 42);
  CHECK(c.centers[0][0] == doctest::Approx(2.5));
  CHECK(c.clusters[0].size() == 4);
}

TEST_CASE("as many clusters as distinct points gives objective zero") {
  PointSet pts = points_1d({0, 3, 9, 11});
  Clustering c = kmeans_pp(pts, 4, 5, 1);
  CHECK(kmeans_objective(pts, c.centers) == doctest::Approx(0.0));
}

TEST_CASE("cluster count validation") {
  PointSet pts = points_1d({0, 0, 1});  // two distinct points
  CHECK_THROWS_AS(kmeans_pp(pts, 3, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(kmeans_pp(pts, 0, 1, 1), std::invalid_argument);
  CHECK_NOTHROW(kmeans_pp(pts, 2, 1, 1));
}

TEST_CASE("well separated clusters reach the brute-force optimum") {
  std::mt19937_64 eng(7);
  PointSet pts(4, 10);
  for (Index i = 0; i < 5; ++i)
    for (int m = 0; m < 4; ++m) pts[i][m] = 0.01 * uniform01(eng);
  for (Index i = 5; i < 10; ++i)
    for (int m = 0; m < 4; ++m) pts[i][m] = (m == 0 ? 1.0 : 0.0) + 0.01 * uniform01(eng);
  const double opt = brute_force_opt(pts, 2);
  Clustering c = kmeans_pp(pts, 2, 20, 5);
  CHECK(kmeans_objective(pts, c.centers) == doctest::Approx(opt).epsilon(1e-9));
}

TEST_CASE("assignments hold the argmin invariant with low-index ties") {
  std::mt19937_64 eng(13);
  PointSet pts(4, 30);
  for (Index i = 0; i < 30; ++i)
    for (int m = 0; m < 4; ++m) pts[i][m] = uniform01(eng);
  Clustering c = kmeans_pp(pts, 4, 10, 3);
  for (Index i = 0; i < 30; ++i) {
    double best = std::numeric_limits<double>::infinity();
    Index bj = 0;
    for (Index j = 0; j < 4; ++j) {
      const double d = squared_distance(pts[i], c.centers[j]);
      if (d < best) {
        best = d;
        bj = j;
      }
    }
    CHECK(c.assignment[static_cast<std::size_t>(i)] == bj);
  }
}

TEST_CASE("Lloyd rounds never increase the objective") {
  std::mt19937_64 eng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const Index k = 4 + uniform_index(eng, 30);
    PointSet pts(4, k);
    for (Index i = 0; i < k; ++i)
      for (int m = 0; m < 4; ++m) pts[i][m] = uniform01(eng);
    Clustering c = kmeans_pp(pts, std::min<Index>(k, 1 + uniform_index(eng, 5)), 15,
                             splitmix64(static_cast<std::uint64_t>(trial)));
    REQUIRE(c.round_objectives.size() >= 2);
    for (std::size_t r = 1; r < c.round_objectives.size(); ++r)
      CHECK(c.round_objectives[r] <= c.round_objectives[r - 1] * (1.0 + 1e-10) + 1e-12);
  }
}

TEST_CASE("empty clusters are reseeded at the farthest point") {
  // three centers fight over two tight clusters; one goes empty and must land
  // on the isolated far point
  PointSet pts(4, 7);
  for (Index i = 0; i < 3; ++i) pts[i][0] = 0.0 + 0.001 * static_cast<double>(i);
  for (Index i = 3; i < 6; ++i) pts[i][0] = 1.0 + 0.001 * static_cast<double>(i);
  pts[6][0] = 50.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Clustering c = kmeans_pp(pts, 3, 10, seed);
    for (const auto& cluster : c.clusters) CHECK(!cluster.empty());
    // the far point always ends alone
    bool found_single = false;
    for (const auto& cluster : c.clusters)
      if (cluster.size() == 1 && cluster[0] == 6) found_single = true;
    CHECK(found_single);
  }
}

TEST_CASE("deterministic for a fixed seed") {
  std::mt19937_64 eng(19);
  PointSet pts(4, 50);
  for (Index i = 0; i < 50; ++i)
    for (int m = 0; m < 4; ++m) pts[i][m] = uniform01(eng);
  Clustering a = kmeans_pp(pts, 5, 10, 77);
  Clustering b = kmeans_pp(pts, 5, 10, 77);
  CHECK(a.centers.data() == b.centers.data());
  CHECK(a.assignment == b.assignment);
}

TEST_CASE("seeding quality stays within the expectation bound") {
  // fixed 12-point instance; mean seeded objective over 200 runs must be
  // within 8(ln m + 2) of the optimum
  std::mt19937_64 eng(23);
  PointSet pts(4, 12);
  for (Index i = 0; i < 12; ++i)
    for (int m = 0; m < 4; ++m)
      pts[i][m] = (i % 3 == 0 ? 0.0 : i % 3 == 1 ? 4.0 : 9.0) + uniform01(eng);
  for (Index m = 2; m <= 3; ++m) {
    const double opt = brute_force_opt(pts, m);
    double mean = 0.0;
    const int runs = 200;
    for (int r = 0; r < runs; ++r) {
      Clustering c = kmeans_pp(pts, m, 0, static_cast<std::uint64_t>(1000 + r));
      mean += c.round_objectives.front();
    }
    mean /= runs;
    const double bound = 8.0 * (std::log(static_cast<double>(m)) + 2.0) * opt;
    CHECK(mean <= bound);
  }
}
