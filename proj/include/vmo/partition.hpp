#pragma once

#include <cstdint>
#include <vector>

#include "vmo/pointset.hpp"

namespace vmo {

struct Clustering {
  PointSet centers;                       // m points
  std::vector<Index> assignment;          // per point, argmin with lowest-index ties
  std::vector<std::vector<Index>> clusters;
  std::vector<double> round_objectives;   // objective after seeding and after each Lloyd round
};

/// Sum of squared distances to the nearest center.
double kmeans_objective(const PointSet& points, const PointSet& centers);

/// Seeding only: first center uniform over the points, each further center
/// drawn with probability proportional to the squared distance to the nearest
/// chosen center.
PointSet kmeans_seed(const PointSet& points, Index m, std::mt19937_64& eng);

/// Seeding followed by `lloyd_iters` rounds of assignment + centroid update.
/// A cluster that empties is re-seeded at the point farthest from its nearest
/// center. The objective never increases between rounds. Deterministic for a
/// fixed seed. Requires 1 <= m <= number of distinct points.
Clustering kmeans_pp(const PointSet& points, Index m, int lloyd_iters, std::uint64_t seed);

}  // namespace vmo
