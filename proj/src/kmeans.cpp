#include "lifeprof/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lifeprof/error.hpp"

namespace lifeprof {

Matrix kmeanspp_init(const Matrix& data, std::size_t k, Rng& rng) {
  const std::size_t n = data.rows();
  Matrix centroids(k, data.cols());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t pick = rng.below(n);
  for (std::size_t c = 0; c < k; ++c) {
    std::copy_n(data.row(pick).begin(), data.cols(), centroids.row(c).begin());
    if (c + 1 == k) {
      break;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(data.row(i), centroids.row(c)));
      total += d2[i];
    }
    if (total <= 0.0) {
      pick = rng.below(n);  // every row coincides with a chosen center
      continue;
    }
    const double u = rng.uniform() * total;
    double acc = 0.0;
    pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      acc += d2[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
  }
  return centroids;
}

std::vector<std::size_t> assign_nearest(const Matrix& data, const Matrix& centroids) {
  std::vector<std::size_t> labels(data.rows(), 0);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
      const double d = squared_distance(data.row(i), centroids.row(c));
      if (d < best) {
        best = d;
        labels[i] = c;
      }
    }
  }
  return labels;
}

Matrix compute_centroids(const Matrix& data, std::span<const std::size_t> assignments, std::size_t k) {
  Matrix centroids(k, data.cols(), 0.0);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    auto c = centroids.row(assignments[i]);
    const auto x = data.row(i);
    for (std::size_t d = 0; d < c.size(); ++d) {
      c[d] += x[d];
    }
    ++counts[assignments[i]];
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] > 0) {
      for (double& v : centroids.row(j)) {
        v /= static_cast<double>(counts[j]);
      }
    }
  }
  return centroids;
}

void repair_empty_clusters(const Matrix& data, std::vector<std::size_t>& assignments, Matrix& centroids) {
  const std::size_t k = centroids.rows();
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t a : assignments) {
    ++counts[a];
  }
  for (std::size_t empty = 0; empty < k; ++empty) {
    if (counts[empty] > 0) {
      continue;
    }
    const auto largest = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    if (counts[largest] < 2) {
      throw Error("cannot repair empty cluster: too few rows");
    }
    std::size_t farthest = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < data.rows(); ++i) {
      if (assignments[i] != largest) {
        continue;
      }
      const double d = squared_distance(data.row(i), centroids.row(largest));
      if (d > best) {
        best = d;
        farthest = i;
      }
    }
    assignments[farthest] = empty;
    --counts[largest];
    ++counts[empty];
    std::copy_n(data.row(farthest).begin(), data.cols(), centroids.row(empty).begin());
  }
}

double within_cluster_ss(const Matrix& data, std::span<const std::size_t> assignments, const Matrix& centroids) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    total += squared_distance(data.row(i), centroids.row(assignments[i]));
  }
  return total;
}

KMeansResult kmeans(const Matrix& data, const KMeansOptions& options) {
  if (options.k == 0 || options.k > data.rows()) {
    throw Error("k must be between 1 and the number of rows");
  }
  Rng rng(options.seed);
  KMeansResult result;
  Matrix centroids = kmeanspp_init(data, options.k, rng);
  for (std::size_t it = 1; it <= std::max<std::size_t>(options.max_iter, 1); ++it) {
    auto labels = assign_nearest(data, centroids);
    repair_empty_clusters(data, labels, centroids);
    result.objective_history.push_back(within_cluster_ss(data, labels, centroids));
    Matrix updated = compute_centroids(data, labels, options.k);
    double shift = 0.0;
    for (std::size_t c = 0; c < options.k; ++c) {
      shift = std::max(shift, std::sqrt(squared_distance(updated.row(c), centroids.row(c))));
    }
    centroids = std::move(updated);
    result.assignments = std::move(labels);
    result.iterations = it;
    if (shift < options.tol) {
      break;
    }
  }
  result.centroids = std::move(centroids);
  return result;
}

}  // namespace lifeprof
