#include "lifeprof/config.hpp"

#include <fmt/format.h>

#include <nlohmann/json.hpp>

#include "lifeprof/motif.hpp"
#include "lifeprof/rhythm.hpp"
#include "lifeprof/text_io.hpp"

namespace lifeprof {

namespace {

using json = nlohmann::ordered_json;

json defaults() {
  const CohortSpec spec;
  json mix = json::object();
  for (const auto& [name, fraction] : CohortSpec::default_mix()) {
    mix[name] = fraction;
  }
  const FilterOptions filter;
  const StayOptions stays;
  const CbowOptions cbow;
  const MultiviewOptions mv;
  const LdaOptions lda;
  return json{
      {"seed", 1},
      {"threads", 1},
      {"paths", {{"artifacts", "artifacts"}, {"trajectories", ""}, {"pois", ""}, {"labels", ""}}},
      {"synth",
       {{"seed", nullptr},
        {"n_users", spec.n_users},
        {"extent_km", spec.extent_km},
        {"center_lon", spec.center.lon},
        {"center_lat", spec.center.lat},
        {"background_poi_density", spec.background_poi_density},
        {"leisure_venues", spec.leisure_venues},
        {"industrial_parks", spec.industrial_parks},
        {"park_side_km", spec.park_side_km},
        {"cadence_s", spec.cadence_s},
        {"record_probability", spec.record_probability},
        {"base_day", spec.base_day},
        {"mix", mix}}},
      {"ingest",
       {{"delimiter", ","},
        {"header", false},
        {"grid_size_m", 150.0},
        {"speed_quantile", filter.speed_quantile},
        {"duration_quantile", filter.duration_quantile},
        {"min_speed_cap_mps", filter.min_speed_cap_mps},
        {"min_span_floor_s", filter.min_span_floor_s}}},
      {"stays", {{"T_minutes", stays.min_duration_min}, {"max_gap_minutes", stays.max_gap_min}}},
      {"motif", {{"node_limit", kDefaultMotifNodeLimit}}},
      {"temporal", {{"bins", kDefaultRhythmBins}, {"utc_offset_hours", 0.0}}},
      {"semantic",
       {{"search_radius_m", 200.0},
        {"distance", "euclidean"},
        {"dim", cbow.dim},
        {"window", cbow.window},
        {"negatives", cbow.negatives},
        {"epochs", cbow.epochs},
        {"lr0", cbow.lr0},
        {"seed", nullptr}}},
      {"cluster",
       {{"k", mv.k}, {"seed", nullptr}, {"max_iter", mv.max_iter}, {"tol", mv.tol}, {"silhouette_scan", false}}},
      {"topics",
       {{"n_topics", lda.n_topics},
        {"alpha", nullptr},
        {"beta", lda.beta},
        {"iters", lda.iters},
        {"burn_in", lda.burn_in},
        {"sample_lag", lda.sample_lag},
        {"seed", nullptr},
        {"labels", json::array()}}},
  };
}

bool replaced_wholesale(const std::string& path) { return path == "synth.mix" || path == "topics.labels"; }

void merge(json& base, const json& patch, const std::string& prefix) {
  if (!patch.is_object()) {
    throw ConfigError(fmt::format("config section '{}' must be an object", prefix.empty() ? "<root>" : prefix));
  }
  for (const auto& [key, value] : patch.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) {
      throw ConfigError(fmt::format("unknown config key '{}'", path));
    }
    json& slot = base[key];
    if (slot.is_object() && !replaced_wholesale(path)) {
      merge(slot, value, path);
    } else {
      slot = value;
    }
  }
}

void apply_override(json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(fmt::format("override '{}' is not key=value", assignment));
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) {
    value = text;
  }
  json* node = &root;
  std::string path;
  const auto parts = split(key, '.');
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string part(parts[i]);
    const bool in_mix = path == "synth.mix";
    path = path.empty() ? part : path + "." + part;
    if (!node->is_object() || (!node->contains(part) && !in_mix)) {
      throw ConfigError(fmt::format("unknown config key '{}'", path));
    }
    node = &(*node)[part];
  }
  if (node->is_object() && !replaced_wholesale(path)) {
    merge(*node, value, path);
  } else {
    *node = value;
  }
}

// Typed readers with path-qualified errors.
class Reader {
 public:
  explicit Reader(const json& root) : root_(root) {}

  const json& at(const std::string& path) const {
    const json* node = &root_;
    for (auto part : split(path, '.')) {
      node = &node->at(std::string(part));
    }
    return *node;
  }

  double real(const std::string& path) const {
    const json& v = at(path);
    if (!v.is_number()) {
      throw ConfigError(fmt::format("config key '{}' must be a number", path));
    }
    return v.get<double>();
  }

  double positive(const std::string& path) const {
    const double v = real(path);
    if (!(v > 0.0)) {
      throw ConfigError(fmt::format("config key '{}' must be positive", path));
    }
    return v;
  }

  double unit(const std::string& path) const {
    const double v = real(path);
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError(fmt::format("config key '{}' must lie in [0, 1]", path));
    }
    return v;
  }

  std::uint64_t count(const std::string& path) const {
    const json& v = at(path);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw ConfigError(fmt::format("config key '{}' must be a non-negative integer", path));
    }
    return v.get<std::uint64_t>();
  }

  std::int64_t integer(const std::string& path) const {
    const json& v = at(path);
    if (!v.is_number_integer()) {
      throw ConfigError(fmt::format("config key '{}' must be an integer", path));
    }
    return v.get<std::int64_t>();
  }

  std::uint64_t seed(const std::string& path, std::uint64_t fallback) const {
    return at(path).is_null() ? fallback : count(path);
  }

  bool flag(const std::string& path) const {
    const json& v = at(path);
    if (!v.is_boolean()) {
      throw ConfigError(fmt::format("config key '{}' must be true or false", path));
    }
    return v.get<bool>();
  }

  std::string text(const std::string& path) const {
    const json& v = at(path);
    if (!v.is_string()) {
      throw ConfigError(fmt::format("config key '{}' must be a string", path));
    }
    return v.get<std::string>();
  }

 private:
  const json& root_;
};

Config build(json& root) {
  const Reader r(root);
  Config c;
  c.seed = r.count("seed");
  c.threads = r.count("threads");
  if (c.threads == 0) {
    throw ConfigError("config key 'threads' must be at least 1");
  }

  c.paths.artifacts = r.text("paths.artifacts");
  c.paths.trajectories = r.text("paths.trajectories");
  c.paths.pois = r.text("paths.pois");
  c.paths.labels = r.text("paths.labels");

  auto& s = c.synth;
  s.seed = r.seed("synth.seed", c.seed);
  s.n_users = r.count("synth.n_users");
  s.extent_km = r.positive("synth.extent_km");
  s.center = {r.real("synth.center_lon"), r.real("synth.center_lat")};
  s.background_poi_density = r.real("synth.background_poi_density");
  if (s.background_poi_density < 0.0) {
    throw ConfigError("config key 'synth.background_poi_density' must be non-negative");
  }
  s.leisure_venues = r.count("synth.leisure_venues");
  s.industrial_parks = r.count("synth.industrial_parks");
  s.park_side_km = r.positive("synth.park_side_km");
  s.cadence_s = r.positive("synth.cadence_s");
  s.record_probability = r.unit("synth.record_probability");
  s.base_day = r.integer("synth.base_day");
  const json& mix = r.at("synth.mix");
  if (!mix.is_object()) {
    throw ConfigError("config key 'synth.mix' must map archetype names to fractions");
  }
  s.mix.clear();
  for (const auto& [name, fraction] : mix.items()) {
    if (!fraction.is_number()) {
      throw ConfigError(fmt::format("config key 'synth.mix.{}' must be a number", name));
    }
    s.mix.emplace_back(name, fraction.get<double>());
  }
  try {
    validate(s);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }

  auto& in = c.ingest;
  const std::string delimiter = r.text("ingest.delimiter");
  if (delimiter.size() != 1) {
    throw ConfigError("config key 'ingest.delimiter' must be a single character");
  }
  in.format.delimiter = delimiter[0];
  in.format.has_header = r.flag("ingest.header");
  in.grid_size_m = r.positive("ingest.grid_size_m");
  in.filter.speed_quantile = r.unit("ingest.speed_quantile");
  in.filter.duration_quantile = r.unit("ingest.duration_quantile");
  in.filter.min_speed_cap_mps = r.real("ingest.min_speed_cap_mps");
  in.filter.min_span_floor_s = r.real("ingest.min_span_floor_s");

  auto& f = c.features;
  f.stays.min_duration_min = r.real("stays.T_minutes");
  f.stays.max_gap_min = r.positive("stays.max_gap_minutes");
  if (f.stays.min_duration_min < 0.0) {
    throw ConfigError("config key 'stays.T_minutes' must be non-negative");
  }
  f.motif_node_limit = r.count("motif.node_limit");
  if (f.motif_node_limit < 1 || f.motif_node_limit > kMaxMotifNodeLimit) {
    throw ConfigError(fmt::format("config key 'motif.node_limit' must lie in [1, {}]", kMaxMotifNodeLimit));
  }
  f.rhythm_bins = r.count("temporal.bins");
  if (f.rhythm_bins < 6 || f.rhythm_bins % 2 != 0) {
    throw ConfigError("config key 'temporal.bins' must be an even number of at least 6");
  }
  f.utc_offset_s = static_cast<std::int64_t>(std::llround(3600.0 * r.real("temporal.utc_offset_hours")));
  f.search_radius_m = r.positive("semantic.search_radius_m");
  const std::string distance = r.text("semantic.distance");
  if (distance == "euclidean") {
    f.distance = SemanticDistance::euclidean;
  } else if (distance == "cosine") {
    f.distance = SemanticDistance::cosine;
  } else {
    throw ConfigError("config key 'semantic.distance' must be 'euclidean' or 'cosine'");
  }
  f.cbow.dim = r.count("semantic.dim");
  f.cbow.window = r.count("semantic.window");
  f.cbow.negatives = r.count("semantic.negatives");
  f.cbow.epochs = r.count("semantic.epochs");
  f.cbow.lr0 = r.positive("semantic.lr0");
  f.cbow.seed = r.seed("semantic.seed", c.seed);
  if (f.cbow.dim == 0 || f.cbow.window == 0) {
    throw ConfigError("config keys 'semantic.dim' and 'semantic.window' must be positive");
  }

  auto& mv = c.cluster.multiview;
  mv.k = r.count("cluster.k");
  mv.seed = r.seed("cluster.seed", c.seed);
  mv.max_iter = r.count("cluster.max_iter");
  mv.tol = r.real("cluster.tol");
  if (mv.k == 0) {
    throw ConfigError("config key 'cluster.k' must be positive");
  }
  c.cluster.silhouette_scan = r.flag("cluster.silhouette_scan");

  auto& lda = c.topics.lda;
  lda.n_topics = r.count("topics.n_topics");
  if (lda.n_topics == 0) {
    throw ConfigError("config key 'topics.n_topics' must be positive");
  }
  if (!r.at("topics.alpha").is_null()) {
    lda.alpha = r.positive("topics.alpha");
  }
  lda.beta = r.positive("topics.beta");
  lda.iters = r.count("topics.iters");
  lda.burn_in = r.count("topics.burn_in");
  lda.sample_lag = r.count("topics.sample_lag");
  lda.seed = r.seed("topics.seed", c.seed);
  const json& labels = r.at("topics.labels");
  if (!labels.is_array()) {
    throw ConfigError("config key 'topics.labels' must be a list of strings");
  }
  for (const auto& l : labels) {
    if (!l.is_string()) {
      throw ConfigError("config key 'topics.labels' must be a list of strings");
    }
    c.topics.labels.push_back(l.get<std::string>());
  }
  if (!c.topics.labels.empty() && c.topics.labels.size() != lda.n_topics) {
    throw ConfigError("config key 'topics.labels' must name every topic");
  }

  // Record the resolved seeds.
  root["synth"]["seed"] = s.seed;
  root["semantic"]["seed"] = f.cbow.seed;
  root["cluster"]["seed"] = mv.seed;
  root["topics"]["seed"] = lda.seed;
  root["topics"]["alpha"] = lda.resolved_alpha();
  c.effective_json = root.dump(2) + "\n";
  return c;
}

}  // namespace

Config load_config(const std::string& document, const std::vector<std::string>& overrides,
                   std::optional<std::uint64_t> seed_override) {
  json root = defaults();
  if (!trim(document).empty()) {
    json patch = json::parse(document, nullptr, false);
    if (patch.is_discarded()) {
      throw ConfigError("config is not valid JSON");
    }
    merge(root, patch, "");
  }
  for (const auto& o : overrides) {
    apply_override(root, o);
  }
  if (seed_override) {
    root["seed"] = *seed_override;
  }
  return build(root);
}

Config load_config_file(const std::filesystem::path& path, const std::vector<std::string>& overrides,
                        std::optional<std::uint64_t> seed_override) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return load_config(text, overrides, seed_override);
}

}  // namespace lifeprof
