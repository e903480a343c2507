#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "lifeprof/geo.hpp"

namespace lifeprof {

struct RawPoint {
  std::string user_id;
  double lon = 0.0;
  double lat = 0.0;
  std::int64_t t = 0;  // UNIX seconds
};

struct TimedPosition {
  double lon = 0.0;
  double lat = 0.0;
  std::int64_t t = 0;

  GeoPoint position() const { return {lon, lat}; }
};

/// A user's records before grid snapping, strictly ascending in t.
struct RawTrajectory {
  std::string user_id;
  std::vector<TimedPosition> points;
};

struct TrackPoint {
  GridCell cell;
  std::int64_t t = 0;
};

/// Snapped records, strictly ascending in t and non-empty.
struct CleanTrajectory {
  std::string user_id;
  std::vector<TrackPoint> points;
};

using RawTrajectorySet = std::map<std::string, RawTrajectory>;
using TrajectorySet = std::map<std::string, CleanTrajectory>;

struct FormatDescriptor {
  char delimiter = ',';
  bool has_header = false;
};

/// Parses `user_id,lon,lat,t` rows. Records are grouped per user, sorted by t,
/// and duplicate (user, t) pairs collapse to the last occurrence in the input.
/// Throws ParseError naming the offending line.
RawTrajectorySet parse_trajectories(std::istream& in, const FormatDescriptor& format = {});

void write_trajectories(std::ostream& out, const RawTrajectorySet& trajectories,
                        const FormatDescriptor& format = {});

/// Writes snapped trajectories as `user_id,lon,lat,t` with cell-center coordinates.
void write_trajectories(std::ostream& out, const TrajectorySet& trajectories,
                        const FormatDescriptor& format = {});

/// Southwest corner of the bounding box of every record.
GeoPoint reference_point(const RawTrajectorySet& trajectories);

CleanTrajectory snap_trajectory(const RawTrajectory& trajectory, const Grid& grid);
TrajectorySet snap_trajectories(const RawTrajectorySet& trajectories, const Grid& grid);

/// Interpolated quantile (linear between order statistics) of `values`.
/// Sorts a copy, so the result does not depend on input order.
double quantile(std::vector<double> values, double q);

struct FilterOptions {
  double speed_quantile = 0.99;
  double duration_quantile = 0.01;
  // Percentile trimming only removes records that are also implausible in
  // absolute terms: faster than `min_speed_cap_mps` or shorter than
  // `min_span_floor_s`. A zero guard is disabled; zero for both gives pure
  // percentile trimming.
  double min_speed_cap_mps = 50.0;
  double min_span_floor_s = 3600.0;
};

struct FilterReport {
  std::size_t users_in = 0;
  std::size_t users_out = 0;
  std::size_t points_in = 0;
  std::size_t points_out = 0;
  std::size_t drift_points_removed = 0;
  std::size_t users_removed_duration = 0;
  std::size_t users_removed_speed = 0;
  // Raw cohort quantiles and the effective thresholds after the absolute guards.
  double point_speed_quantile_mps = 0.0;
  double point_speed_threshold_mps = 0.0;
  double span_quantile_s = 0.0;
  double span_threshold_s = 0.0;
  double user_speed_quantile_mps = 0.0;
  double user_speed_threshold_mps = 0.0;
  bool insufficient_cohort = false;
  std::vector<std::string> removed_users;

  std::string to_json() const;
};

struct FilterResult {
  TrajectorySet retained;
  FilterReport report;
};

/// Drift removal per point, then duration and speed trimming per user.
FilterResult filter_cohort(const TrajectorySet& trajectories, const FilterOptions& options = {});

/// Speeds (m/s) of each point relative to its predecessor; element 0 is 0.
std::vector<double> incoming_speeds(const CleanTrajectory& trajectory);

}  // namespace lifeprof
