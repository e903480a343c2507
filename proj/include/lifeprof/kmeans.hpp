#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lifeprof/matrix.hpp"
#include "lifeprof/rng.hpp"

namespace lifeprof {

struct KMeansOptions {
  std::size_t k = 2;
  std::uint64_t seed = 1;
  std::size_t max_iter = 300;
  double tol = 1e-6;
};

struct KMeansResult {
  Matrix centroids;
  std::vector<std::size_t> assignments;
  std::vector<double> objective_history;  // within-cluster sum of squares per iteration
  std::size_t iterations = 0;
};

/// k-means++ seeding followed by Lloyd iterations until the largest centroid
/// shift drops below `tol`. Throws when k is 0 or exceeds the row count.
KMeansResult kmeans(const Matrix& data, const KMeansOptions& options);

// Building blocks shared with the multi-view variant.

Matrix kmeanspp_init(const Matrix& data, std::size_t k, Rng& rng);

/// Nearest centroid per row; ties go to the lower cluster id.
std::vector<std::size_t> assign_nearest(const Matrix& data, const Matrix& centroids);

/// Cluster means, accumulated in row order. Empty clusters keep a zero row.
Matrix compute_centroids(const Matrix& data, std::span<const std::size_t> assignments, std::size_t k);

/// Fills each empty cluster with the member of the largest cluster farthest
/// from its centroid, which also becomes the empty cluster's centroid.
void repair_empty_clusters(const Matrix& data, std::vector<std::size_t>& assignments, Matrix& centroids);

double within_cluster_ss(const Matrix& data, std::span<const std::size_t> assignments, const Matrix& centroids);

}  // namespace lifeprof
