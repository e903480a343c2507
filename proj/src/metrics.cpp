#include "lifeprof/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "lifeprof/error.hpp"

namespace lifeprof {

namespace {

double pairs(double n) { return n * (n - 1.0) / 2.0; }

std::vector<std::size_t> dense(std::span<const std::size_t> labels, std::size_t& count) {
  std::map<std::size_t, std::size_t> ids;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (std::size_t l : labels) {
    out.push_back(ids.emplace(l, ids.size()).first->second);
  }
  count = ids.size();
  return out;
}

}  // namespace

double adjusted_rand_index(std::span<const std::size_t> labels_a, std::span<const std::size_t> labels_b) {
  if (labels_a.size() != labels_b.size()) {
    throw Error("adjusted_rand_index: label vectors differ in length");
  }
  if (labels_a.size() < 2) {
    throw Error("adjusted_rand_index: need at least two items");
  }
  std::size_t ka = 0;
  std::size_t kb = 0;
  const auto a = dense(labels_a, ka);
  const auto b = dense(labels_b, kb);
  std::vector<double> table(ka * kb, 0.0);
  std::vector<double> rows(ka, 0.0);
  std::vector<double> cols(kb, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    table[a[i] * kb + b[i]] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  double index = 0.0;
  for (double nij : table) {
    index += pairs(nij);
  }
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (double r : rows) {
    sum_a += pairs(r);
  }
  for (double c : cols) {
    sum_b += pairs(c);
  }
  const double expected = sum_a * sum_b / pairs(static_cast<double>(a.size()));
  const double maximum = (sum_a + sum_b) / 2.0;
  if (maximum == expected) {
    // Both partitions trivial (one cluster, or all singletons) in the same way.
    return 1.0;
  }
  return (index - expected) / (maximum - expected);
}

double silhouette(const Matrix& data, std::span<const std::size_t> assignments) {
  const std::size_t n = data.rows();
  if (assignments.size() != n) {
    throw Error("silhouette: assignment count differs from row count");
  }
  std::size_t k = 0;
  const auto labels = dense(assignments, k);
  if (k < 2) {
    throw Error("silhouette: need at least two non-empty clusters");
  }
  std::vector<double> sizes(k, 0.0);
  for (std::size_t l : labels) {
    sizes[l] += 1.0;
  }
  double total = 0.0;
  std::vector<double> dist_sum(k);
  for (std::size_t i = 0; i < n; ++i) {
    if (sizes[labels[i]] < 2.0) {
      continue;  // singleton: s = 0
    }
    std::fill(dist_sum.begin(), dist_sum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) {
        dist_sum[labels[j]] += std::sqrt(squared_distance(data.row(i), data.row(j)));
      }
    }
    const double a = dist_sum[labels[i]] / (sizes[labels[i]] - 1.0);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != labels[i]) {
        b = std::min(b, dist_sum[c] / sizes[c]);
      }
    }
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

}  // namespace lifeprof
