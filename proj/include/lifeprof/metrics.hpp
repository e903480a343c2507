#pragma once

#include <cstddef>
#include <span>

#include "lifeprof/matrix.hpp"

namespace lifeprof {

/// Pair-counting adjusted Rand index. Throws on length mismatch or fewer
/// than two items.
double adjusted_rand_index(std::span<const std::size_t> labels_a, std::span<const std::size_t> labels_b);

/// Mean silhouette coefficient (Euclidean). Points in singleton clusters
/// score 0; a point with a = b = 0 scores 0. Throws unless at least two
/// clusters are non-empty.
double silhouette(const Matrix& data, std::span<const std::size_t> assignments);

}  // namespace lifeprof
