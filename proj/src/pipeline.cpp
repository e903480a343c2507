#include "lifeprof/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <nlohmann/json.hpp>

#include "lifeprof/gyration.hpp"
#include "lifeprof/metrics.hpp"
#include "lifeprof/motif.hpp"
#include "lifeprof/rhythm.hpp"
#include "lifeprof/text_io.hpp"
#include "lifeprof/topic_report.hpp"
#include "lifeprof/views.hpp"

namespace lifeprof {

namespace fs = std::filesystem;

std::optional<Stage> parse_stage(std::string_view name) {
  for (Stage s : {Stage::synth, Stage::ingest, Stage::features, Stage::cluster, Stage::topics, Stage::report,
                  Stage::pipeline}) {
    if (stage_name(s) == name) {
      return s;
    }
  }
  return std::nullopt;
}

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::synth: return "synth";
    case Stage::ingest: return "ingest";
    case Stage::features: return "features";
    case Stage::cluster: return "cluster";
    case Stage::topics: return "topics";
    case Stage::report: return "report";
    case Stage::pipeline: return "pipeline";
  }
  return "?";
}

namespace {

struct Dir {
  fs::path root;
  fs::path operator/(const char* name) const { return root / name; }
};

const fs::path& require(const fs::path& path) {
  if (!fs::exists(path)) {
    throw MissingArtifact(path);
  }
  return path;
}

std::string slurp(const fs::path& path) { return read_file(require(path)); }

fs::path input_or(const fs::path& configured, const fs::path& fallback) {
  return configured.empty() ? fallback : configured;
}

template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([=, &fn] {
      for (std::size_t i = w; i < n; i += threads) {
        fn(i);
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
}

Grid read_grid(const fs::path& path) {
  const auto j = nlohmann::json::parse(slurp(path), nullptr, false);
  if (j.is_discarded() || !j.contains("ref_lon") || !j.contains("ref_lat") || !j.contains("cell_m")) {
    throw Error(path.string() + ": malformed grid description");
  }
  return Grid({j["ref_lon"].get<double>(), j["ref_lat"].get<double>()}, j["cell_m"].get<double>());
}

std::vector<std::string> read_column(const fs::path& path, const char* header) {
  std::istringstream in(slurp(path));
  std::string line;
  std::vector<std::string> out;
  if (!read_line(in, line) || line != header) {
    throw ParseError(1, path.string() + ": expected header " + header);
  }
  while (read_line(in, line)) {
    if (!trim(line).empty()) {
      out.push_back(line);
    }
  }
  return out;
}

struct Assignments {
  std::vector<std::string> user_ids;
  std::vector<std::size_t> clusters;
};

Assignments read_assignments(const fs::path& path) {
  std::istringstream in(slurp(path));
  std::string line;
  Assignments a;
  std::size_t line_no = 1;
  if (!read_line(in, line) || line != "user_id,cluster") {
    throw ParseError(1, path.string() + ": expected header user_id,cluster");
  }
  while (read_line(in, line)) {
    ++line_no;
    const auto fields = split(line, ',');
    std::int64_t c = 0;
    if (fields.size() != 2 || !parse_int(fields[1], c) || c < 0) {
      throw ParseError(line_no, path.string() + ": expected user_id,cluster");
    }
    a.user_ids.emplace_back(fields[0]);
    a.clusters.push_back(static_cast<std::size_t>(c));
  }
  return a;
}

// ---------------------------------------------------------------- synth

void stage_synth(const Config& config, const Dir& dir) {
  spdlog::info("synth: generating {} users (seed {})", config.synth.n_users, config.synth.seed);
  const SyntheticCohort cohort = generate_cohort(config.synth);
  std::ostringstream traj;
  write_trajectories(traj, cohort.trajectories);
  write_file(dir / artifact::kTrajectories, traj.str());
  std::ostringstream pois;
  write_pois(pois, cohort.pois);
  write_file(dir / artifact::kPois, pois.str());
  std::ostringstream labels;
  write_labels(labels, cohort.labels);
  write_file(dir / artifact::kLabels, labels.str());
}

// ---------------------------------------------------------------- ingest

void stage_ingest(const Config& config, const Dir& dir) {
  const fs::path source = input_or(config.paths.trajectories, dir / artifact::kTrajectories);
  std::istringstream in(slurp(source));
  const RawTrajectorySet raw = parse_trajectories(in, config.ingest.format);
  if (raw.empty()) {
    throw Error(source.string() + ": no trajectory records");
  }
  const GeoPoint ref = reference_point(raw);
  const Grid grid(ref, config.ingest.grid_size_m);
  const FilterResult filtered = filter_cohort(snap_trajectories(raw, grid), config.ingest.filter);
  spdlog::info("ingest: {} of {} users retained, {} drift points removed", filtered.report.users_out,
               filtered.report.users_in, filtered.report.drift_points_removed);

  nlohmann::ordered_json g;
  g["ref_lon"] = ref.lon;
  g["ref_lat"] = ref.lat;
  g["cell_m"] = config.ingest.grid_size_m;
  write_file(dir / artifact::kGrid, g.dump(2) + "\n");
  write_file(dir / artifact::kFilterReport, filtered.report.to_json());
  std::ostringstream out;
  write_trajectories(out, filtered.retained);
  write_file(dir / artifact::kCleanTrajectories, out.str());
}

// ---------------------------------------------------------------- features

struct PerUser {
  StayList stays;
  std::vector<Trip> trips;
  MobilityRhythm rhythm;
  TemporalFeature temporal;
  double rog_km = 0.0;
  std::optional<CanonicalCode> code;
  ActivitySemantic semantic;
};

void stage_features(const Config& config, const Dir& dir) {
  const FeatureConfig& fc = config.features;
  const Grid grid = read_grid(dir / artifact::kGrid);
  std::istringstream in(slurp(dir / artifact::kCleanTrajectories));
  const TrajectorySet trajectories = snap_trajectories(parse_trajectories(in), grid);
  const fs::path poi_path = input_or(config.paths.pois, dir / artifact::kPois);
  std::istringstream poi_in(slurp(poi_path));
  const PoiIndex index(parse_pois(poi_in, config.ingest.format), grid.projection(), fc.search_radius_m);
  if (index.empty()) {
    spdlog::warn("features: POI set is empty; every stay is tagged '{}'", kUnknownTag);
  }

  std::vector<const CleanTrajectory*> users;
  for (const auto& [id, t] : trajectories) {
    users.push_back(&t);
  }
  std::vector<PerUser> per(users.size());
  parallel_for(users.size(), config.threads, [&](std::size_t i) {
    const CleanTrajectory& t = *users[i];
    PerUser& p = per[i];
    p.stays = detect_stays(t, fc.stays);
    p.trips = derive_trips(p.stays, t);
    p.rhythm = mobility_rhythm(t, fc.rhythm_bins, fc.utc_offset_s);
    p.temporal = temporal_feature(p.rhythm);
    p.rog_km = radius_of_gyration_km(t, grid.projection());
    if (!p.stays.stays.empty()) {
      p.code = canonical_code(build_motif(p.stays), fc.motif_node_limit);
    }
    p.semantic = match_semantics(p.stays, index);
  });

  std::vector<std::vector<std::string>> corpus;
  std::vector<CanonicalCode> codes;
  for (const auto& p : per) {
    if (p.code) {
      codes.push_back(*p.code);
      corpus.push_back(p.semantic.tags);
    }
  }
  if (codes.empty()) {
    throw Error("features: no user has any stay");
  }
  const MotifCatalog catalog = MotifCatalog::build(codes);
  spdlog::info("features: {} users with stays, {} motif classes, top-4 coverage {:.3f}", codes.size(),
               catalog.entries().size(), catalog.top4_coverage());
  const CbowResult cbow = train_cbow(corpus, fc.cbow);
  const EmbeddingTable& table = cbow.table;

  std::vector<UserFeatures> features(users.size());
  parallel_for(users.size(), config.threads, [&](std::size_t i) {
    UserFeatures& f = features[i];
    const PerUser& p = per[i];
    f.user_id = users[i]->user_id;
    f.rog_km = p.rog_km;
    f.temporal = p.temporal;
    if (p.code) {
      f.motif = motif_one_hot(*p.code, catalog.top4());
      f.semantic = semantic_features(p.semantic, table, fc.distance);
    }
  });

  const AssemblyResult assembled = assemble_views(features);
  const auto [scaled, scaling] = standardize(assembled.views);
  const std::size_t dim = table.dim();

  // Per-user tables.
  {
    std::vector<StayList> stays;
    std::vector<ActivitySemantic> semantics;
    std::ostringstream trips;
    std::ostringstream temporal;
    std::ostringstream rhythms;
    std::ostringstream user_features;
    trips << "user_id,from_index,to_index,depart,arrive,distance_km\n";
    temporal << "user_id,lfer,dcfr,stationary\n";
    rhythms << "user_id";
    for (std::size_t b = 0; b < fc.rhythm_bins; ++b) {
      rhythms << ",bin" << b;
    }
    rhythms << '\n';
    user_features << "user_id,stays,motif_code,motif_label,rog_km,lfer,dcfr,n_uas,m_sd\n";
    for (std::size_t i = 0; i < users.size(); ++i) {
      const PerUser& p = per[i];
      const std::string& id = users[i]->user_id;
      stays.push_back(p.stays);
      semantics.push_back(p.semantic);
      for (const auto& trip : p.trips) {
        trips << id << ',' << trip.from_index << ',' << trip.to_index << ',' << trip.depart << ',' << trip.arrive
              << ',' << format_double(trip.distance_km) << '\n';
      }
      temporal << id << ',' << format_double(p.temporal.lfer) << ',' << format_double(p.temporal.dcfr) << ','
               << (p.temporal.stationary ? 1 : 0) << '\n';
      rhythms << id;
      for (double v : p.rhythm.bins) {
        rhythms << ',' << format_double(v);
      }
      rhythms << '\n';
      const auto& f = features[i];
      user_features << id << ',' << p.stays.stays.size() << ',' << (p.code ? to_hex(*p.code) : "") << ','
                    << (p.code ? catalog.label(*p.code) : "") << ',' << format_double(p.rog_km) << ','
                    << format_double(p.temporal.lfer) << ',' << format_double(p.temporal.dcfr) << ','
                    << (f.semantic ? std::to_string(f.semantic->n_uas) : "") << ','
                    << (f.semantic ? format_double(f.semantic->m_sd) : "") << '\n';
    }
    std::ostringstream stays_out;
    write_stays(stays_out, stays);
    write_file(dir / artifact::kStays, stays_out.str());
    std::ostringstream sem_out;
    write_semantics(sem_out, semantics);
    write_file(dir / artifact::kSemantics, sem_out.str());
    write_file(dir / artifact::kTrips, trips.str());
    write_file(dir / artifact::kTemporal, temporal.str());
    write_file(dir / artifact::kRhythms, rhythms.str());
    write_file(dir / artifact::kUserFeatures, user_features.str());
  }
  {
    std::ostringstream emb;
    table.write(emb);
    write_file(dir / artifact::kEmbeddings, emb.str());
    std::ostringstream loss;
    loss << "epoch,loss\n";
    for (std::size_t e = 0; e < cbow.epoch_loss.size(); ++e) {
      loss << e + 1 << ',' << format_double(cbow.epoch_loss[e]) << '\n';
    }
    write_file(dir / artifact::kCbowLoss, loss.str());
    std::ostringstream motifs;
    catalog.write(motifs);
    write_file(dir / artifact::kMotifs, motifs.str());
    std::ostringstream excl;
    excl << "user_id,reason\n";
    for (const auto& e : assembled.excluded) {
      excl << e.user_id << ',' << e.reason << '\n';
    }
    write_file(dir / artifact::kExclusions, excl.str());
    std::ostringstream ids;
    ids << "user_id\n";
    for (const auto& id : assembled.views.user_ids) {
      ids << id << '\n';
    }
    write_file(dir / artifact::kUserIds, ids.str());
  }
  const auto st_cols = st_column_names();
  const auto sem_cols = sem_column_names(dim);
  write_matrix(dir / artifact::kFeaturesSt, assembled.views.st, st_cols);
  write_matrix(dir / artifact::kFeaturesSem, assembled.views.sem, sem_cols);
  write_matrix(dir / artifact::kViewSt, scaled.st, st_cols);
  write_matrix(dir / artifact::kViewSem, scaled.sem, sem_cols);
  write_scaling(dir / artifact::kScalingSt, scaling.st, st_cols);
  write_scaling(dir / artifact::kScalingSem, scaling.sem, sem_cols);
  spdlog::info("features: {} users assembled, {} excluded", assembled.views.user_ids.size(),
               assembled.excluded.size());
}

// ---------------------------------------------------------------- cluster

void stage_cluster(const Config& config, const Dir& dir) {
  const Matrix st = read_matrix(require(dir / artifact::kViewSt));
  const Matrix sem = read_matrix(require(dir / artifact::kViewSem));
  const auto ids = read_column(dir / artifact::kUserIds, "user_id");
  if (ids.size() != st.rows() || ids.size() != sem.rows()) {
    throw Error("cluster: views and user ids are not row-aligned");
  }
  if (config.cluster.multiview.k > st.rows()) {
    throw ConfigError(fmt::format("cluster.k = {} exceeds the {} clustered users", config.cluster.multiview.k,
                                  st.rows()));
  }
  const ClusterModel model = multiview_kmeans(st, sem, config.cluster.multiview);
  model.write(dir / artifact::kClusterModel);
  std::ostringstream out;
  out << "user_id,cluster\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << ids[i] << ',' << model.assignments[i] << '\n';
  }
  write_file(dir / artifact::kAssignments, out.str());

  std::ostringstream diag;
  diag << "iteration,objective_sem,objective_st\n";
  for (std::size_t i = 0; i < model.objective_st.size(); ++i) {
    diag << i + 1 << ',' << format_double(model.objective_sem[i]) << ',' << format_double(model.objective_st[i])
         << '\n';
  }
  write_file(dir / artifact::kClusterDiagnostics, diag.str());

  std::set<std::size_t> used(model.assignments.begin(), model.assignments.end());
  spdlog::info("cluster: {} iterations, {} non-empty clusters", model.iterations, used.size());

  if (config.cluster.silhouette_scan) {
    std::ostringstream sil;
    sil << "k,silhouette_st,silhouette_sem\n";
    for (std::size_t k = 2; k <= std::min<std::size_t>(12, st.rows() - 1); ++k) {
      MultiviewOptions o = config.cluster.multiview;
      o.k = k;
      const ClusterModel m = multiview_kmeans(st, sem, o);
      std::set<std::size_t> nonempty(m.assignments.begin(), m.assignments.end());
      if (nonempty.size() < 2) {
        continue;
      }
      sil << k << ',' << format_double(silhouette(st, m.assignments)) << ','
          << format_double(silhouette(sem, m.assignments)) << '\n';
    }
    write_file(dir / artifact::kSilhouette, sil.str());
  }
}

// ---------------------------------------------------------------- topics

void stage_topics(const Config& config, const Dir& dir) {
  const Assignments assigned = read_assignments(dir / artifact::kAssignments);
  std::istringstream sem_in(slurp(dir / artifact::kSemantics));
  std::map<std::string, std::vector<std::string>> tags;
  for (auto& s : read_semantics(sem_in)) {
    tags[s.user_id] = std::move(s.tags);
  }
  std::vector<std::vector<std::string>> corpus;
  for (const auto& id : assigned.user_ids) {
    const auto it = tags.find(id);
    if (it == tags.end()) {
      throw Error("topics: no activity semantics for user " + id);
    }
    corpus.push_back(it->second);
  }
  const TopicModel model = train_lda(corpus, config.topics.lda);
  model.write_topic_word(dir / artifact::kTopicWord);
  model.write_doc_topic(dir / artifact::kDocTopic, assigned.user_ids);
  const ClusterTopicReport report =
      cluster_topic_report(model, assigned.clusters, config.cluster.multiview.k, config.topics.labels);
  write_file(dir / artifact::kClusterTopics, report.rows_csv());
  write_file(dir / artifact::kClusterTopicsText, report.table());
  spdlog::info("topics: {} topics over {} documents", model.n_topics, corpus.size());
}

// ---------------------------------------------------------------- report

std::string mean_row(const std::vector<double>& sums, double n) {
  std::string row;
  for (double s : sums) {
    row += ',' + format_fixed(n > 0.0 ? s / n : 0.0, 4);
  }
  return row;
}

void stage_report(const Config& config, const Dir& dir) {
  const Assignments assigned = read_assignments(dir / artifact::kAssignments);
  const Matrix st = read_matrix(require(dir / artifact::kFeaturesSt));
  const Matrix sem = read_matrix(require(dir / artifact::kFeaturesSem));
  const std::string topics_csv = slurp(dir / artifact::kClusterTopics);
  const std::string topics_text = slurp(dir / artifact::kClusterTopicsText);
  if (st.rows() != assigned.clusters.size() || sem.rows() != assigned.clusters.size()) {
    throw Error("report: features and assignments are not row-aligned");
  }
  std::size_t k = config.cluster.multiview.k;
  for (std::size_t c : assigned.clusters) {
    k = std::max(k, c + 1);
  }
  std::ostringstream summary;
  summary << "Lifestyle profile report\n\n";

  // (a) per-cluster feature means on the unscaled features.
  {
    auto names = st_column_names();
    names.emplace_back("n_uas");
    names.emplace_back("m_sd");
    std::vector<std::vector<double>> sums(k, std::vector<double>(names.size(), 0.0));
    std::vector<double> sizes(k, 0.0);
    for (std::size_t i = 0; i < assigned.clusters.size(); ++i) {
      auto& s = sums[assigned.clusters[i]];
      sizes[assigned.clusters[i]] += 1.0;
      for (std::size_t c = 0; c < st.cols(); ++c) {
        s[c] += st(i, c);
      }
      s[st.cols()] += sem(i, sem.cols() - 2);
      s[st.cols() + 1] += sem(i, sem.cols() - 1);
    }
    std::ostringstream out;
    out << "cluster,users";
    for (const auto& n : names) {
      out << ',' << n;
    }
    out << '\n';
    std::size_t nonempty = 0;
    summary << "Cluster feature means\n";
    summary << fmt::format("{:<8}{:>7}{:>9}{:>8}{:>8}{:>8}{:>8}\n", "cluster", "users", "rog_km", "lfer", "dcfr",
                           "n_uas", "m_sd");
    for (std::size_t c = 0; c < k; ++c) {
      nonempty += sizes[c] > 0.0 ? 1 : 0;
      out << c << ',' << static_cast<std::size_t>(sizes[c]) << mean_row(sums[c], sizes[c]) << '\n';
      const double n = std::max(sizes[c], 1.0);
      const auto& s = sums[c];
      summary << fmt::format("{:<8}{:>7}{:>9.3f}{:>8.3f}{:>8.3f}{:>8.3f}{:>8.3f}\n", c,
                             static_cast<std::size_t>(sizes[c]), s[5] / n, s[6] / n, s[7] / n, s[8] / n, s[9] / n);
    }
    write_file(dir / artifact::kReportFeatureMeans, out.str());
    summary << fmt::format("non-empty clusters: {} of {}\n\n", nonempty, k);
  }

  // (b) motif classes with their mean rhythm.
  {
    std::istringstream uf(slurp(dir / artifact::kUserFeatures));
    std::istringstream rh(slurp(dir / artifact::kRhythms));
    std::map<std::string, std::string> label_of;
    std::string line;
    read_line(uf, line);
    while (read_line(uf, line)) {
      const auto f = split(line, ',');
      if (f.size() >= 4 && !f[3].empty()) {
        label_of[std::string(f[0])] = std::string(f[3]);
      }
    }
    std::map<std::string, std::vector<double>> rhythm_of;
    read_line(rh, line);
    std::size_t bins = 0;
    while (read_line(rh, line)) {
      const auto f = split(line, ',');
      std::vector<double> v;
      for (std::size_t i = 1; i < f.size(); ++i) {
        double x = 0.0;
        parse_double(f[i], x);
        v.push_back(x);
      }
      bins = v.size();
      rhythm_of[std::string(f[0])] = std::move(v);
    }
    std::istringstream mc(slurp(dir / artifact::kMotifs));
    struct Row {
      std::string hex;
      std::string n;
      std::size_t users = 0;
      std::size_t moving = 0;
      std::vector<double> rhythm;
    };
    std::vector<Row> rows;
    std::map<std::string, std::size_t> row_of;
    read_line(mc, line);
    while (read_line(mc, line)) {
      const auto f = split(line, ',');
      if (f.size() == 4) {
        row_of[std::string(f[2])] = rows.size();
        rows.push_back({std::string(f[0]), std::string(f[1]), 0, 0, std::vector<double>(bins, 0.0)});
      }
    }
    std::vector<std::string> labels(rows.size());
    for (const auto& [l, r] : row_of) {
      labels[r] = l;
    }
    for (const auto& id : assigned.user_ids) {
      const auto it = label_of.find(id);
      if (it == label_of.end() || !row_of.contains(it->second)) {
        continue;
      }
      Row& r = rows[row_of[it->second]];
      ++r.users;
      const auto& v = rhythm_of[id];
      double total = 0.0;
      for (double x : v) {
        total += x;
      }
      if (total > 0.0 && v.size() == bins) {
        ++r.moving;
        for (std::size_t b = 0; b < bins; ++b) {
          r.rhythm[b] += v[b];
        }
      }
    }
    std::ostringstream out;
    out << "label,n,users,share";
    for (std::size_t b = 0; b < bins; ++b) {
      out << ",rhythm_bin" << b;
    }
    out << '\n';
    summary << "Motif distribution\n";
    const double n_users = static_cast<double>(std::max<std::size_t>(assigned.user_ids.size(), 1));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Row& r = rows[i];
      const double share = static_cast<double>(r.users) / n_users;
      std::vector<double> mean = r.rhythm;
      out << labels[i] << ',' << r.n << ',' << r.users << ',' << format_fixed(share, 4)
          << mean_row(mean, static_cast<double>(r.moving)) << '\n';
      if (r.users > 0) {
        summary << fmt::format("  {:<14}{:>6} users ({:.1f}%)\n", labels[i], r.users, 100.0 * share);
      }
    }
    summary << '\n';
    write_file(dir / artifact::kReportMotifs, out.str());
  }

  // (c) topic table.
  write_file(dir / artifact::kReportTopics, topics_csv);
  summary << "Cluster topics\n" << topics_text << '\n';

  // (d) agreement with ground-truth labels, when present.
  const fs::path labels_path = input_or(config.paths.labels, dir / artifact::kLabels);
  if (fs::exists(labels_path)) {
    std::istringstream lin(read_file(labels_path));
    const auto labels = read_labels(lin);
    std::map<std::string, std::size_t> archetype_ids;
    for (const auto& [id, name] : labels) {
      archetype_ids.emplace(name, archetype_ids.size());
    }
    std::vector<std::size_t> truth;
    std::vector<std::size_t> predicted;
    for (std::size_t i = 0; i < assigned.user_ids.size(); ++i) {
      const auto it = labels.find(assigned.user_ids[i]);
      if (it != labels.end()) {
        truth.push_back(archetype_ids.at(it->second));
        predicted.push_back(assigned.clusters[i]);
      }
    }
    std::ostringstream out;
    out << "metric,value\n";
    if (truth.size() >= 2) {
      const double ari = adjusted_rand_index(predicted, truth);
      out << "ari," << format_double(ari) << '\n';
      out << "labeled_users," << truth.size() << '\n';
      summary << fmt::format("ARI vs ground-truth labels: {:.4f} ({} labeled users)\n", ari, truth.size());

      // Contingency of archetype by cluster.
      std::vector<std::vector<std::size_t>> table(archetype_ids.size(), std::vector<std::size_t>(k, 0));
      for (std::size_t i = 0; i < truth.size(); ++i) {
        ++table[truth[i]][predicted[i]];
      }
      summary << "\nArchetype by cluster\n" << fmt::format("{:<22}", "archetype");
      for (std::size_t c = 0; c < k; ++c) {
        summary << fmt::format("{:>6}", c);
      }
      summary << '\n';
      for (const auto& [name, a] : archetype_ids) {
        summary << fmt::format("{:<22}", name);
        for (std::size_t c = 0; c < k; ++c) {
          summary << fmt::format("{:>6}", table[a][c]);
        }
        summary << '\n';
      }
    } else {
      out << "labeled_users," << truth.size() << '\n';
    }
    write_file(dir / artifact::kReportAri, out.str());
  }
  write_file(dir / artifact::kReport, summary.str());
}

}  // namespace

void run_stage(Stage stage, const Config& config) {
  const Dir dir{config.paths.artifacts};
  fs::create_directories(dir.root);
  write_file(dir / artifact::kConfig, config.dump());
  switch (stage) {
    case Stage::synth: stage_synth(config, dir); break;
    case Stage::ingest: stage_ingest(config, dir); break;
    case Stage::features: stage_features(config, dir); break;
    case Stage::cluster: stage_cluster(config, dir); break;
    case Stage::topics: stage_topics(config, dir); break;
    case Stage::report: stage_report(config, dir); break;
    case Stage::pipeline:
      // External trajectories replace the synthetic cohort.
      if (config.paths.trajectories.empty()) {
        run_stage(Stage::synth, config);
      }
      for (Stage s : {Stage::ingest, Stage::features, Stage::cluster, Stage::topics, Stage::report}) {
        run_stage(s, config);
      }
      break;
  }
}

}  // namespace lifeprof
