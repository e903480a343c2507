#include "lifeprof/motif.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "lifeprof/error.hpp"

namespace lifeprof {

MotifGraph build_motif(const StayList& stays) {
  if (stays.stays.empty()) {
    throw Error("no stays");
  }
  std::vector<GridCell> nodes;
  std::vector<std::size_t> sequence;
  for (const auto& stay : stays.stays) {
    auto it = std::find(nodes.begin(), nodes.end(), stay.cell);
    if (it == nodes.end()) {
      nodes.push_back(stay.cell);
      it = nodes.end() - 1;
    }
    sequence.push_back(static_cast<std::size_t>(it - nodes.begin()));
  }
  MotifGraph graph = MotifGraph::empty(nodes.size());
  for (std::size_t i = 0; i + 1 < sequence.size(); ++i) {
    if (sequence[i] != sequence[i + 1]) {
      graph.set_edge(sequence[i], sequence[i + 1]);
    }
  }
  return graph;
}

CanonicalCode oversize_code() { return CanonicalCode(1, static_cast<char>(0xFF)); }

bool is_oversize(const CanonicalCode& code) { return code == oversize_code(); }

std::size_t code_node_count(const CanonicalCode& code) {
  return code.empty() || is_oversize(code) ? 0 : static_cast<unsigned char>(code[0]);
}

__extension__ typedef unsigned __int128 Bits;

CanonicalCode canonical_code(const MotifGraph& graph, std::size_t node_limit) {
  const std::size_t n = graph.n;
  if (n == 0) {
    throw Error("motif graph has no nodes");
  }
  if (n > std::min(node_limit, kMaxMotifNodeLimit)) {
    return oversize_code();
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (graph.edge(u, v)) {
        edges.emplace_back(u, v);
      }
    }
  }
  // position[node] = relabeled index. Bit (i, j) sits at significance
  // n*n-1-(i*n+j), so numeric order equals row-major lexicographic order.
  const std::size_t bits = n * n;
  std::vector<std::size_t> position(n);
  std::iota(position.begin(), position.end(), 0);
  Bits best = ~static_cast<Bits>(0);
  do {
    Bits code = 0;
    for (const auto& [u, v] : edges) {
      code |= static_cast<Bits>(1) << (bits - 1 - (position[u] * n + position[v]));
    }
    best = std::min(best, code);
  } while (std::next_permutation(position.begin(), position.end()));

  CanonicalCode out(1 + (bits + 7) / 8, '\0');
  out[0] = static_cast<char>(n);
  for (std::size_t b = 0; b < bits; ++b) {
    if ((best >> (bits - 1 - b)) & 1) {
      out[1 + b / 8] = static_cast<char>(static_cast<unsigned char>(out[1 + b / 8]) | (0x80u >> (b % 8)));
    }
  }
  return out;
}

std::string to_hex(const CanonicalCode& code) {
  std::string s;
  s.reserve(code.size() * 2);
  for (unsigned char c : code) {
    s += fmt::format("{:02x}", c);
  }
  return s;
}

MotifFeature motif_one_hot(const CanonicalCode& code, std::span<const CanonicalCode> top4) {
  MotifFeature feature{};
  for (std::size_t i = 0; i < top4.size() && i + 1 < kMotifSlots; ++i) {
    if (top4[i] == code) {
      feature[i] = 1.0;
      return feature;
    }
  }
  feature[kMotifSlots - 1] = 1.0;
  return feature;
}

MotifCatalog MotifCatalog::build(std::span<const CanonicalCode> cohort_codes) {
  std::map<CanonicalCode, std::size_t> counts;
  for (const auto& code : cohort_codes) {
    ++counts[code];
  }
  MotifCatalog catalog;
  catalog.total_ = cohort_codes.size();

  std::vector<Entry> ranked;
  for (const auto& [code, count] : counts) {
    ranked.push_back({code, code_node_count(code), "", count});
  }
  // frequency first, code bytes break ties
  std::sort(ranked.begin(), ranked.end(), [](const Entry& a, const Entry& b) {
    return a.count != b.count ? a.count > b.count : a.code < b.code;
  });
  for (const auto& e : ranked) {
    if (!is_oversize(e.code) && catalog.top4_.size() < 4) {
      catalog.top4_.push_back(e.code);
    }
  }
  std::map<std::size_t, std::size_t> next_rank;
  for (auto& e : ranked) {
    e.label = is_oversize(e.code) ? "MT oversize" : fmt::format("MT {}-{}", e.nodes, next_rank[e.nodes]++);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const Entry& a, const Entry& b) {
    const std::size_t na = is_oversize(a.code) ? SIZE_MAX : a.nodes;
    const std::size_t nb = is_oversize(b.code) ? SIZE_MAX : b.nodes;
    return na < nb;
  });
  catalog.entries_ = std::move(ranked);
  return catalog;
}

std::string MotifCatalog::label(const CanonicalCode& code) const {
  for (const auto& e : entries_) {
    if (e.code == code) {
      return e.label;
    }
  }
  return "MT unseen";
}

double MotifCatalog::top4_coverage() const {
  if (total_ == 0) {
    return 0.0;
  }
  std::size_t covered = 0;
  for (const auto& e : entries_) {
    if (std::find(top4_.begin(), top4_.end(), e.code) != top4_.end()) {
      covered += e.count;
    }
  }
  return static_cast<double>(covered) / static_cast<double>(total_);
}

void MotifCatalog::write(std::ostream& out) const {
  out << "canonical_code_hex,n,label,count\n";
  for (const auto& e : entries_) {
    out << to_hex(e.code) << ',' << e.nodes << ',' << e.label << ',' << e.count << '\n';
  }
}

}  // namespace lifeprof
