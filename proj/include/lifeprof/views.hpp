#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lifeprof/matrix.hpp"
#include "lifeprof/motif.hpp"
#include "lifeprof/rhythm.hpp"
#include "lifeprof/semantic.hpp"

namespace lifeprof {

/// Everything extracted for one user. Optional parts are absent when the
/// user has no stays.
struct UserFeatures {
  std::string user_id;
  std::optional<MotifFeature> motif;
  double rog_km = 0.0;
  TemporalFeature temporal;
  std::optional<SemanticFeatures> semantic;
};

/// The two clustering views, row-aligned with `user_ids`.
/// Spatiotemporal columns: 5 motif slots, rog_km, lfer, dcfr.
/// Semantic columns: m_as (embedding dim), n_uas, m_sd.
struct FeatureViews {
  std::vector<std::string> user_ids;
  Matrix st;
  Matrix sem;
};

inline constexpr std::size_t kSpatiotemporalColumns = kMotifSlots + 3;

struct Exclusion {
  std::string user_id;
  std::string reason;
};

struct AssemblyResult {
  FeatureViews views;
  std::vector<Exclusion> excluded;
};

/// Users missing motif or semantic features are excluded and listed.
/// Throws when no user is complete.
AssemblyResult assemble_views(std::span<const UserFeatures> users);

std::vector<std::string> st_column_names();
std::vector<std::string> sem_column_names(std::size_t embedding_dim);

/// Per-column z-scoring; columns with `scaled == false` pass through.
struct ScalingParams {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<bool> scaled;

  Matrix apply(const Matrix& m) const;
  Matrix invert(const Matrix& m) const;
};

struct ViewScaling {
  ScalingParams st;
  ScalingParams sem;
};

/// Fits scaling on `columns_to_scale` (true = z-score with sample stddev).
/// Constant columns map to 0 with stddev recorded as 1.
ScalingParams fit_scaling(const Matrix& m, const std::vector<bool>& columns_to_scale);

/// Z-scores every continuous column; the motif one-hot block is untouched.
std::pair<FeatureViews, ViewScaling> standardize(const FeatureViews& views);

/// CSV with a header of column names.
void write_matrix(const std::filesystem::path& path, const Matrix& m, const std::vector<std::string>& columns);
Matrix read_matrix(const std::filesystem::path& path);
void write_scaling(const std::filesystem::path& path, const ScalingParams& params,
                   const std::vector<std::string>& columns);

}  // namespace lifeprof
