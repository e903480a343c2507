#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lifeprof/cbow.hpp"
#include "lifeprof/error.hpp"
#include "lifeprof/ingest.hpp"
#include "lifeprof/lda.hpp"
#include "lifeprof/multiview.hpp"
#include "lifeprof/semantic.hpp"
#include "lifeprof/stays.hpp"
#include "lifeprof/synth.hpp"

namespace lifeprof {

/// Unknown key, wrong value type, or out-of-range value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct PathsConfig {
  std::filesystem::path artifacts = "artifacts";
  // Inputs; empty means the synth outputs inside the artifact directory.
  std::filesystem::path trajectories;
  std::filesystem::path pois;
  std::filesystem::path labels;
};

struct IngestConfig {
  FormatDescriptor format;
  double grid_size_m = 150.0;
  FilterOptions filter;
};

struct FeatureConfig {
  StayOptions stays;
  std::size_t motif_node_limit = 10;
  std::size_t rhythm_bins = 12;
  std::int64_t utc_offset_s = 0;
  double search_radius_m = 200.0;
  SemanticDistance distance = SemanticDistance::euclidean;
  CbowOptions cbow;
};

struct ClusterConfig {
  MultiviewOptions multiview;
  bool silhouette_scan = false;  // k in [2, 12] on the spatiotemporal view
};

struct TopicConfig {
  LdaOptions lda;
  std::vector<std::string> labels;  // empty: top tag per topic
};

struct Config {
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  PathsConfig paths;
  CohortSpec synth;
  IngestConfig ingest;
  FeatureConfig features;
  ClusterConfig cluster;
  TopicConfig topics;

  /// JSON with every key and its effective value (seeds resolved).
  std::string dump() const { return effective_json; }

  std::string effective_json;
};

/// Defaults overlaid with `document` (JSON text, may be empty) and then with
/// `key.path=value` overrides. Values parse as JSON, falling back to a plain
/// string. Section seeds left unset follow the root seed.
Config load_config(const std::string& document, const std::vector<std::string>& overrides = {},
                   std::optional<std::uint64_t> seed_override = std::nullopt);
Config load_config_file(const std::filesystem::path& path, const std::vector<std::string>& overrides = {},
                        std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace lifeprof
