#include "lifeprof/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "lifeprof/error.hpp"
#include "lifeprof/text_io.hpp"

namespace lifeprof {

namespace {

struct PendingRecord {
  std::int64_t t;
  std::size_t order;
  double lon;
  double lat;
};

}  // namespace

RawTrajectorySet parse_trajectories(std::istream& in, const FormatDescriptor& format) {
  std::map<std::string, std::vector<PendingRecord>> pending;
  std::string line;
  std::size_t line_no = 0;
  std::size_t order = 0;
  while (read_line(in, line)) {
    ++line_no;
    if (line_no == 1 && format.has_header) {
      continue;
    }
    if (trim(line).empty()) {
      continue;
    }
    const auto fields = split(line, format.delimiter);
    if (fields.size() != 4) {
      throw ParseError(line_no, "expected 4 fields (user_id, lon, lat, t), got " + std::to_string(fields.size()));
    }
    const std::string_view user = trim(fields[0]);
    double lon = 0.0;
    double lat = 0.0;
    std::int64_t t = 0;
    if (user.empty()) {
      throw ParseError(line_no, "empty user_id");
    }
    if (!parse_double(fields[1], lon) || lon < -180.0 || lon > 180.0) {
      throw ParseError(line_no, "invalid longitude '" + std::string(fields[1]) + "'");
    }
    if (!parse_double(fields[2], lat) || lat < -90.0 || lat > 90.0) {
      throw ParseError(line_no, "invalid latitude '" + std::string(fields[2]) + "'");
    }
    if (!parse_int(fields[3], t) || t < 0) {
      throw ParseError(line_no, "invalid timestamp '" + std::string(fields[3]) + "'");
    }
    pending[std::string(user)].push_back({t, order++, lon, lat});
  }

  RawTrajectorySet result;
  for (auto& [user, records] : pending) {
    std::sort(records.begin(), records.end(), [](const PendingRecord& a, const PendingRecord& b) {
      return a.t != b.t ? a.t < b.t : a.order < b.order;
    });
    RawTrajectory traj{user, {}};
    traj.points.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (i + 1 < records.size() && records[i + 1].t == records[i].t) {
        continue;  // a later record with the same timestamp wins
      }
      traj.points.push_back({records[i].lon, records[i].lat, records[i].t});
    }
    result.emplace(user, std::move(traj));
  }
  return result;
}

namespace {

void write_row(std::ostream& out, const std::string& user, double lon, double lat, std::int64_t t, char d) {
  out << user << d << format_double(lon) << d << format_double(lat) << d << t << '\n';
}

}  // namespace

void write_trajectories(std::ostream& out, const RawTrajectorySet& trajectories, const FormatDescriptor& format) {
  const char d = format.delimiter;
  if (format.has_header) {
    out << "user_id" << d << "lon" << d << "lat" << d << "t\n";
  }
  for (const auto& [user, traj] : trajectories) {
    for (const auto& p : traj.points) {
      write_row(out, user, p.lon, p.lat, p.t, d);
    }
  }
}

void write_trajectories(std::ostream& out, const TrajectorySet& trajectories, const FormatDescriptor& format) {
  const char d = format.delimiter;
  if (format.has_header) {
    out << "user_id" << d << "lon" << d << "lat" << d << "t\n";
  }
  for (const auto& [user, traj] : trajectories) {
    for (const auto& p : traj.points) {
      write_row(out, user, p.cell.center_lon, p.cell.center_lat, p.t, d);
    }
  }
}

GeoPoint reference_point(const RawTrajectorySet& trajectories) {
  GeoPoint sw{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (const auto& [user, traj] : trajectories) {
    for (const auto& p : traj.points) {
      sw.lon = std::min(sw.lon, p.lon);
      sw.lat = std::min(sw.lat, p.lat);
    }
  }
  if (!std::isfinite(sw.lon)) {
    return {};
  }
  return sw;
}

CleanTrajectory snap_trajectory(const RawTrajectory& trajectory, const Grid& grid) {
  CleanTrajectory clean{trajectory.user_id, {}};
  clean.points.reserve(trajectory.points.size());
  for (const auto& p : trajectory.points) {
    clean.points.push_back({grid.snap(p.position()), p.t});
  }
  return clean;
}

TrajectorySet snap_trajectories(const RawTrajectorySet& trajectories, const Grid& grid) {
  TrajectorySet result;
  for (const auto& [user, traj] : trajectories) {
    if (!traj.points.empty()) {
      result.emplace(user, snap_trajectory(traj, grid));
    }
  }
  return result;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw Error("quantile of an empty sample");
  }
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0 || values[lo] == values[hi]) {
    return values[lo];
  }
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<double> incoming_speeds(const CleanTrajectory& trajectory) {
  std::vector<double> speeds(trajectory.points.size(), 0.0);
  for (std::size_t i = 1; i < trajectory.points.size(); ++i) {
    const auto& a = trajectory.points[i - 1];
    const auto& b = trajectory.points[i];
    const double dt = static_cast<double>(b.t - a.t);
    speeds[i] = haversine_m(a.cell.center(), b.cell.center()) / dt;
  }
  return speeds;
}

namespace {

double max_speed(const CleanTrajectory& trajectory) {
  const auto speeds = incoming_speeds(trajectory);
  return speeds.empty() ? 0.0 : *std::max_element(speeds.begin(), speeds.end());
}

std::size_t count_points(const TrajectorySet& set) {
  std::size_t n = 0;
  for (const auto& [user, traj] : set) {
    n += traj.points.size();
  }
  return n;
}

}  // namespace

FilterResult filter_cohort(const TrajectorySet& trajectories, const FilterOptions& options) {
  FilterResult result;
  FilterReport& report = result.report;
  report.users_in = trajectories.size();
  report.points_in = count_points(trajectories);

  if (trajectories.size() < 2) {
    report.insufficient_cohort = true;
    result.retained = trajectories;
    report.users_out = report.users_in;
    report.points_out = report.points_in;
    return result;
  }

  // Drift: a point is dropped when its incoming speed is a cohort outlier.
  std::vector<double> all_speeds;
  std::map<std::string, std::vector<double>> speeds_by_user;
  for (const auto& [user, traj] : trajectories) {
    auto speeds = incoming_speeds(traj);
    all_speeds.insert(all_speeds.end(), speeds.begin() + std::min<std::ptrdiff_t>(1, std::ssize(speeds)),
                      speeds.end());
    speeds_by_user.emplace(user, std::move(speeds));
  }
  if (!all_speeds.empty()) {
    report.point_speed_quantile_mps = quantile(all_speeds, options.speed_quantile);
  }
  report.point_speed_threshold_mps = std::max(report.point_speed_quantile_mps, options.min_speed_cap_mps);

  TrajectorySet dedrifted;
  for (const auto& [user, traj] : trajectories) {
    const auto& speeds = speeds_by_user.at(user);
    CleanTrajectory kept{user, {}};
    kept.points.reserve(traj.points.size());
    for (std::size_t i = 0; i < traj.points.size(); ++i) {
      if (i > 0 && !all_speeds.empty() && speeds[i] > report.point_speed_threshold_mps) {
        ++report.drift_points_removed;
        continue;
      }
      kept.points.push_back(traj.points[i]);
    }
    dedrifted.emplace(user, std::move(kept));
  }

  // Whole-user trimming on the drift-free trajectories.
  std::vector<double> spans;
  std::vector<double> user_max;
  std::map<std::string, std::pair<double, double>> stats;
  for (const auto& [user, traj] : dedrifted) {
    const double span = static_cast<double>(traj.points.back().t - traj.points.front().t);
    const double vmax = max_speed(traj);
    spans.push_back(span);
    user_max.push_back(vmax);
    stats.emplace(user, std::make_pair(span, vmax));
  }
  report.span_quantile_s = quantile(spans, options.duration_quantile);
  report.span_threshold_s = options.min_span_floor_s > 0.0
                               ? std::min(report.span_quantile_s, options.min_span_floor_s)
                               : report.span_quantile_s;
  report.user_speed_quantile_mps = quantile(user_max, options.speed_quantile);
  report.user_speed_threshold_mps = std::max(report.user_speed_quantile_mps, options.min_speed_cap_mps);

  for (auto& [user, traj] : dedrifted) {
    const auto [span, vmax] = stats.at(user);
    const bool short_span = span < report.span_threshold_s;
    const bool too_fast = vmax > report.user_speed_threshold_mps;
    report.users_removed_duration += short_span ? 1 : 0;
    report.users_removed_speed += too_fast ? 1 : 0;
    if (short_span || too_fast) {
      report.removed_users.push_back(user);
      continue;
    }
    result.retained.emplace(user, std::move(traj));
  }
  report.users_out = result.retained.size();
  report.points_out = count_points(result.retained);
  return result;
}

std::string FilterReport::to_json() const {
  nlohmann::ordered_json j;
  j["users_in"] = users_in;
  j["users_out"] = users_out;
  j["points_in"] = points_in;
  j["points_out"] = points_out;
  j["insufficient_cohort"] = insufficient_cohort;
  j["rules"]["drift"] = {{"points_removed", drift_points_removed},
                         {"speed_quantile_mps", point_speed_quantile_mps},
                         {"threshold_mps", point_speed_threshold_mps}};
  j["rules"]["duration"] = {{"users_removed", users_removed_duration},
                            {"span_quantile_s", span_quantile_s},
                            {"threshold_s", span_threshold_s}};
  j["rules"]["speed"] = {{"users_removed", users_removed_speed},
                         {"max_speed_quantile_mps", user_speed_quantile_mps},
                         {"threshold_mps", user_speed_threshold_mps}};
  if (insufficient_cohort) {
    j["note"] = "insufficient cohort: percentile filters skipped";
  }
  j["removed_users"] = removed_users;
  return j.dump(2) + "\n";
}

}  // namespace lifeprof
