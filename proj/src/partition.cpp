#include "vmo/partition.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace vmo {

double kmeans_objective(const PointSet& points, const PointSet& centers) {
  if (centers.size() < 1) throw std::invalid_argument("need at least one center");
  double total = 0.0;
  for (Index i = 0; i < points.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < centers.size(); ++j)
      best = std::min(best, squared_distance(points[i], centers[j]));
    total += best;
  }
  return total;
}

namespace {

Index count_distinct(const PointSet& points) {
  std::set<std::vector<double>> seen;
  for (Index i = 0; i < points.size(); ++i) {
    auto p = points[i];
    seen.emplace(p.begin(), p.end());
  }
  return static_cast<Index>(seen.size());
}

void copy_point(std::span<const double> src, std::span<double> dst) {
  std::copy(src.begin(), src.end(), dst.begin());
}

// distance to the nearest of the first `nc` centers, per point
void nearest_dist2(const PointSet& points, const PointSet& centers, Index nc,
                   std::vector<double>& d) {
  d.assign(static_cast<std::size_t>(points.size()), 0.0);
  for (Index i = 0; i < points.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < nc; ++j)
      best = std::min(best, squared_distance(points[i], centers[j]));
    d[static_cast<std::size_t>(i)] = best;
  }
}

}  // namespace

PointSet kmeans_seed(const PointSet& points, Index m, std::mt19937_64& eng) {
  const Index k = points.size();
  PointSet centers(points.dim(), m);
  copy_point(points[uniform_index(eng, k)], centers[0]);
  std::vector<double> d;
  for (Index n = 1; n < m; ++n) {
    nearest_dist2(points, centers, n, d);
    double total = 0.0;
    for (double v : d) total += v;
    const double target = uniform01(eng) * total;
    double cum = 0.0;
    Index chosen = -1;
    for (Index i = 0; i < k; ++i) {
      const double di = d[static_cast<std::size_t>(i)];
      if (di <= 0.0) continue;
      cum += di;
      chosen = i;
      if (target < cum) break;
    }
    if (chosen < 0) throw std::invalid_argument("fewer distinct points than centers");
    copy_point(points[chosen], centers[n]);
  }
  return centers;
}

Clustering kmeans_pp(const PointSet& points, Index m, int lloyd_iters, std::uint64_t seed) {
  const Index k = points.size();
  if (m < 1) throw std::invalid_argument("need at least one cluster");
  if (m > count_distinct(points)) throw std::invalid_argument("more clusters than distinct points");

  std::mt19937_64 eng(seed);
  Clustering out;
  out.centers = kmeans_seed(points, m, eng);
  out.assignment.assign(static_cast<std::size_t>(k), 0);

  auto assign_all = [&]() {
    for (Index i = 0; i < k; ++i) {
      double best = std::numeric_limits<double>::infinity();
      Index bj = 0;
      for (Index j = 0; j < m; ++j) {
        const double dist = squared_distance(points[i], out.centers[j]);
        if (dist < best) {
          best = dist;
          bj = j;
        }
      }
      out.assignment[static_cast<std::size_t>(i)] = bj;
    }
  };
  auto rebuild_clusters = [&]() {
    out.clusters.assign(static_cast<std::size_t>(m), {});
    for (Index i = 0; i < k; ++i)
      out.clusters[static_cast<std::size_t>(out.assignment[static_cast<std::size_t>(i)])].push_back(i);
  };

  out.round_objectives.push_back(kmeans_objective(points, out.centers));

  std::vector<double> d;
  for (int round = 0; round < lloyd_iters; ++round) {
    assign_all();
    rebuild_clusters();
    // re-seed empty clusters at the point farthest from its nearest center
    for (Index j = 0; j < m; ++j) {
      if (!out.clusters[static_cast<std::size_t>(j)].empty()) continue;
      nearest_dist2(points, out.centers, m, d);
      Index far = 0;
      for (Index i = 1; i < k; ++i)
        if (d[static_cast<std::size_t>(i)] > d[static_cast<std::size_t>(far)]) far = i;
      copy_point(points[far], out.centers[j]);
      const Index old = out.assignment[static_cast<std::size_t>(far)];
      auto& oldc = out.clusters[static_cast<std::size_t>(old)];
      oldc.erase(std::find(oldc.begin(), oldc.end(), far));
      out.assignment[static_cast<std::size_t>(far)] = j;
      out.clusters[static_cast<std::size_t>(j)].push_back(far);
    }
    for (Index j = 0; j < m; ++j) {
      const auto& members = out.clusters[static_cast<std::size_t>(j)];
      if (members.empty()) continue;
      auto zj = out.centers[j];
      std::fill(zj.begin(), zj.end(), 0.0);
      for (Index i : members) {
        auto xi = points[i];
        for (int mm = 0; mm < points.dim(); ++mm) zj[mm] += xi[mm];
      }
      for (int mm = 0; mm < points.dim(); ++mm) zj[mm] /= static_cast<double>(members.size());
    }
    const double obj = kmeans_objective(points, out.centers);
    const double prev = out.round_objectives.back();
    if (obj > prev + 1e-10 * (1.0 + prev))
      throw std::logic_error("Lloyd round increased the k-means objective");
    out.round_objectives.push_back(obj);
  }

  // restore the argmin invariant against the final centers
  assign_all();
  rebuild_clusters();
  return out;
}

}  // namespace vmo
