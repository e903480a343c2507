#include "lifeprof/topic_report.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "lifeprof/error.hpp"
#include "lifeprof/text_io.hpp"

namespace lifeprof {

ClusterTopicReport cluster_topic_report(const TopicModel& model, std::span<const std::size_t> assignments,
                                        std::size_t n_clusters, const std::vector<std::string>& topic_labels,
                                        std::size_t top_n) {
  if (assignments.size() != model.doc_topic.rows()) {
    throw Error("topic report: assignments are not aligned with documents");
  }
  const std::size_t k = model.doc_topic.cols();
  const auto labels = topic_labels.empty() ? model.default_labels() : topic_labels;
  if (labels.size() != k) {
    throw Error(fmt::format("topic report: expected {} topic labels, got {}", k, labels.size()));
  }
  for (std::size_t a : assignments) {
    n_clusters = std::max(n_clusters, a + 1);
  }

  std::vector<std::vector<double>> sums(n_clusters, std::vector<double>(k, 0.0));
  std::vector<std::size_t> members(n_clusters, 0);
  for (std::size_t d = 0; d < assignments.size(); ++d) {
    const std::size_t c = assignments[d];
    ++members[c];
    for (std::size_t t = 0; t < k; ++t) {
      sums[c][t] += model.doc_topic(d, t);
    }
  }

  ClusterTopicReport report;
  for (std::size_t c = 0; c < n_clusters; ++c) {
    ClusterTopicRow row;
    row.cluster = c;
    row.members = members[c];
    row.empty = members[c] == 0;
    if (!row.empty) {
      std::vector<std::size_t> order(k);
      std::iota(order.begin(), order.end(), 0);
      const auto& s = sums[c];
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
      for (std::size_t i = 0; i < std::min(top_n, k); ++i) {
        const double w = s[order[i]] / static_cast<double>(members[c]);
        row.top.push_back({order[i], labels[order[i]], w});
        row.aggregate += w;
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string ClusterTopicReport::table() const {
  std::ostringstream out;
  out << fmt::format("{:<8}| {:<7}| {} | {}\n", "cluster", "users", "top topics (weight)", "sum of top weights");
  for (const auto& row : rows) {
    if (row.empty) {
      out << fmt::format("{:<8}| {:<7}| (empty) | -\n", row.cluster, 0);
      continue;
    }
    std::string topics;
    for (const auto& t : row.top) {
      if (!topics.empty()) {
        topics += ", ";
      }
      topics += fmt::format("{} ({:.3f})", t.label, t.weight);
    }
    out << fmt::format("{:<8}| {:<7}| {} | {:.3f}\n", row.cluster, row.members, topics, row.aggregate);
  }
  return out.str();
}

std::string ClusterTopicReport::rows_csv() const {
  std::ostringstream out;
  out << "cluster,topic_label,weight\n";
  for (const auto& row : rows) {
    if (row.empty) {
      out << row.cluster << ",empty,0\n";
      continue;
    }
    for (const auto& t : row.top) {
      out << row.cluster << ',' << t.label << ',' << format_double(t.weight) << '\n';
    }
  }
  return out.str();
}

}  // namespace lifeprof
