#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lifeprof/lda.hpp"

namespace lifeprof {

struct TopicWeight {
  std::size_t topic = 0;
  std::string label;
  double weight = 0.0;
};

struct ClusterTopicRow {
  std::size_t cluster = 0;
  std::size_t members = 0;
  bool empty = true;
  std::vector<TopicWeight> top;  // up to 4, descending
  double aggregate = 0.0;        // sum of the listed weights
};

struct ClusterTopicReport {
  std::vector<ClusterTopicRow> rows;

  /// Human-readable table, e.g. `0  | residence (0.826), ... | 0.938`.
  std::string table() const;
  /// `cluster,topic_label,weight` rows; empty clusters get one `empty` row.
  std::string rows_csv() const;
};

/// Averages doc_topic over each cluster's members. `topic_labels` may be
/// empty, in which case each topic is named after its top tag.
ClusterTopicReport cluster_topic_report(const TopicModel& model, std::span<const std::size_t> assignments,
                                        std::size_t n_clusters, const std::vector<std::string>& topic_labels = {},
                                        std::size_t top_n = 4);

}  // namespace lifeprof
