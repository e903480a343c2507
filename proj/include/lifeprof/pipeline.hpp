#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "lifeprof/config.hpp"
#include "lifeprof/error.hpp"

namespace lifeprof {

/// An upstream artifact a stage needs is not there.
class MissingArtifact : public Error {
 public:
  explicit MissingArtifact(const std::filesystem::path& path)
      : Error("missing artifact: " + path.string()), path_(path) {}
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

enum class Stage { synth, ingest, features, cluster, topics, report, pipeline };

std::optional<Stage> parse_stage(std::string_view name);
std::string_view stage_name(Stage stage);

// File names inside the artifact directory.
namespace artifact {
inline constexpr const char* kConfig = "config.json";
inline constexpr const char* kTrajectories = "trajectories.csv";
inline constexpr const char* kPois = "pois.csv";
inline constexpr const char* kLabels = "labels.csv";
inline constexpr const char* kCleanTrajectories = "clean_trajectories.csv";
inline constexpr const char* kGrid = "grid.json";
inline constexpr const char* kFilterReport = "filter_report.json";
inline constexpr const char* kStays = "stays.csv";
inline constexpr const char* kTrips = "trips.csv";
inline constexpr const char* kSemantics = "semantics.csv";
inline constexpr const char* kEmbeddings = "embeddings.csv";
inline constexpr const char* kCbowLoss = "cbow_loss.csv";
inline constexpr const char* kMotifs = "motifs.csv";
inline constexpr const char* kTemporal = "temporal.csv";
inline constexpr const char* kRhythms = "rhythms.csv";
inline constexpr const char* kUserFeatures = "user_features.csv";
inline constexpr const char* kExclusions = "exclusions.csv";
inline constexpr const char* kUserIds = "user_ids.csv";
inline constexpr const char* kFeaturesSt = "features_st.csv";
inline constexpr const char* kFeaturesSem = "features_sem.csv";
inline constexpr const char* kViewSt = "view_st.csv";
inline constexpr const char* kViewSem = "view_sem.csv";
inline constexpr const char* kScalingSt = "scaling_st.csv";
inline constexpr const char* kScalingSem = "scaling_sem.csv";
inline constexpr const char* kClusterModel = "cluster_model.txt";
inline constexpr const char* kAssignments = "assignments.csv";
inline constexpr const char* kClusterDiagnostics = "cluster_diagnostics.csv";
inline constexpr const char* kSilhouette = "silhouette.csv";
inline constexpr const char* kTopicWord = "topic_word.csv";
inline constexpr const char* kDocTopic = "doc_topic.csv";
inline constexpr const char* kClusterTopics = "cluster_topics.csv";
inline constexpr const char* kClusterTopicsText = "cluster_topics.txt";
inline constexpr const char* kReportFeatureMeans = "report_feature_means.csv";
inline constexpr const char* kReportMotifs = "report_motifs.csv";
inline constexpr const char* kReportTopics = "report_topics.csv";
inline constexpr const char* kReportAri = "report_ari.csv";
inline constexpr const char* kReport = "report.txt";
}  // namespace artifact

/// Runs one stage (or all of them for Stage::pipeline) against the artifact
/// directory named in the config. Throws MissingArtifact when an input is
/// absent and ConfigError for bad parameters.
void run_stage(Stage stage, const Config& config);

}  // namespace lifeprof
