#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "lifeprof/matrix.hpp"

namespace lifeprof {

struct MultiviewOptions {
  std::size_t k = 7;
  std::uint64_t seed = 1;
  std::size_t max_iter = 100;
  double tol = 1e-6;
};

struct ClusterModel {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  Matrix centroids_st;
  Matrix centroids_sem;
  std::vector<std::size_t> assignments;      // consensus
  std::vector<std::size_t> assignments_st;   // last E step in each view
  std::vector<std::size_t> assignments_sem;
  std::size_t iterations = 0;
  std::vector<double> objective_st;
  std::vector<double> objective_sem;
  double variance_st = 1.0;
  double variance_sem = 1.0;

  void write(const std::filesystem::path& path) const;
  static ClusterModel read(const std::filesystem::path& path);
};

/// Two-view k-means by co-EM. Centroids are seeded in the semantic view;
/// each iteration assigns in one view and re-estimates the other view's
/// centroids from that assignment, alternating. Iteration stops once the
/// spatiotemporal assignment repeats. The consensus label minimizes the sum
/// of both views' squared centroid distances, each scaled by that view's
/// mean within-cluster variance.
ClusterModel multiview_kmeans(const Matrix& st, const Matrix& sem, const MultiviewOptions& options);

/// Consensus labels for given centroids and per-view variances.
std::vector<std::size_t> consensus_assignments(const Matrix& st, const Matrix& sem, const Matrix& centroids_st,
                                               const Matrix& centroids_sem, double variance_st,
                                               double variance_sem);

}  // namespace lifeprof
