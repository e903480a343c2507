#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lifeprof/stays.hpp"

namespace lifeprof {

/// Directed graph over a user's distinct stay cells.
struct MotifGraph {
  std::size_t n = 0;
  std::vector<std::uint8_t> adjacency;  // n*n, row-major, zero diagonal

  bool edge(std::size_t from, std::size_t to) const { return adjacency[from * n + to] != 0; }
  void set_edge(std::size_t from, std::size_t to) { adjacency[from * n + to] = 1; }

  static MotifGraph empty(std::size_t n) { return {n, std::vector<std::uint8_t>(n * n, 0)}; }
};

/// Byte 0 holds the node count; the rest is the row-major adjacency bit
/// string, MSB first, so byte-wise comparison orders codes of equal size the
/// same way as their bit strings.
using CanonicalCode = std::string;

inline constexpr std::size_t kDefaultMotifNodeLimit = 10;
inline constexpr std::size_t kMaxMotifNodeLimit = 11;  // n*n bits must fit 128

/// Nodes are distinct stay cells in order of first visit; u->v is an edge
/// when some consecutive stay pair moves from u to v. Throws on an empty list.
MotifGraph build_motif(const StayList& stays);

/// Minimum code over all node relabelings. Graphs with more than
/// `node_limit` nodes get the oversize sentinel.
CanonicalCode canonical_code(const MotifGraph& graph, std::size_t node_limit = kDefaultMotifNodeLimit);

CanonicalCode oversize_code();
bool is_oversize(const CanonicalCode& code);
std::size_t code_node_count(const CanonicalCode& code);
std::string to_hex(const CanonicalCode& code);

inline constexpr std::size_t kMotifSlots = 5;  // top four classes + "others"
using MotifFeature = std::array<double, kMotifSlots>;

/// Position i is set when `code` equals top4[i]; otherwise the last slot.
MotifFeature motif_one_hot(const CanonicalCode& code, std::span<const CanonicalCode> top4);

/// Cohort-level motif statistics: class counts, frequency ranks, and the
/// four most frequent classes used for one-hot coding.
class MotifCatalog {
 public:
  struct Entry {
    CanonicalCode code;
    std::size_t nodes = 0;
    std::string label;  // "MT {n}-{rank}"
    std::size_t count = 0;
  };

  static MotifCatalog build(std::span<const CanonicalCode> cohort_codes);

  /// Entries ordered by node count, then rank.
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const std::vector<CanonicalCode>& top4() const noexcept { return top4_; }
  std::string label(const CanonicalCode& code) const;
  /// Share of users whose class is among the top four.
  double top4_coverage() const;

  /// Rows `canonical_code_hex,n,label,count`.
  void write(std::ostream& out) const;

 private:
  std::vector<Entry> entries_;
  std::vector<CanonicalCode> top4_;
  std::size_t total_ = 0;
};

}  // namespace lifeprof
