#include "lifeprof/stays.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lifeprof/error.hpp"
#include "lifeprof/text_io.hpp"

namespace lifeprof {

namespace {

struct Run {
  GridCell cell;
  std::int64_t first_t;
  std::int64_t last_t;
};

}  // namespace

StayList detect_stays(const CleanTrajectory& trajectory, const StayOptions& options) {
  StayList result{trajectory.user_id, {}};
  const auto& pts = trajectory.points;
  if (pts.empty()) {
    return result;
  }
  const double max_gap_s = options.max_gap_min * 60.0;
  const double min_span_s = options.min_duration_min * 60.0;

  std::vector<Run> runs;
  runs.push_back({pts[0].cell, pts[0].t, pts[0].t});
  for (std::size_t i = 1; i < pts.size(); ++i) {
    Run& current = runs.back();
    const bool same_cell = pts[i].cell == current.cell;
    const bool gap = static_cast<double>(pts[i].t - current.last_t) > max_gap_s;
    if (same_cell && !gap) {
      current.last_t = pts[i].t;
    } else {
      runs.push_back({pts[i].cell, pts[i].t, pts[i].t});
    }
  }

  // Consecutive runs sharing a cell were split by gaps. Within such a group,
  // the qualifying runs and everything between them form one stay.
  std::size_t i = 0;
  while (i < runs.size()) {
    std::size_t j = i;
    while (j + 1 < runs.size() && runs[j + 1].cell == runs[i].cell) {
      ++j;
    }
    std::size_t first = j + 1;
    std::size_t last = i;
    for (std::size_t r = i; r <= j; ++r) {
      if (static_cast<double>(runs[r].last_t - runs[r].first_t) > min_span_s) {
        first = std::min(first, r);
        last = r;
      }
    }
    if (first <= last) {
      std::int64_t present_s = 0;
      for (std::size_t r = first; r <= last; ++r) {
        present_s += runs[r].last_t - runs[r].first_t;
      }
      result.stays.push_back(
          {runs[i].cell, runs[first].first_t, runs[last].last_t, static_cast<double>(present_s) / 60.0});
    }
    i = j + 1;
  }
  return result;
}

namespace {

std::size_t index_at(const std::vector<TrackPoint>& pts, std::int64_t t) {
  const auto it = std::lower_bound(pts.begin(), pts.end(), t,
                                   [](const TrackPoint& p, std::int64_t value) { return p.t < value; });
  return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - pts.begin(), std::ssize(pts) - 1));
}

}  // namespace

std::vector<Trip> derive_trips(const StayList& stays, const CleanTrajectory& trajectory) {
  std::vector<Trip> trips;
  if (stays.stays.size() < 2) {
    return trips;
  }
  const auto& pts = trajectory.points;
  for (std::size_t s = 0; s + 1 < stays.stays.size(); ++s) {
    const Stay& from = stays.stays[s];
    const Stay& to = stays.stays[s + 1];
    Trip trip{s, s + 1, from.t_end, to.t_start, 0.0};
    double meters = 0.0;
    if (!pts.empty()) {
      const std::size_t a = index_at(pts, from.t_end);
      const std::size_t b = index_at(pts, to.t_start);
      for (std::size_t p = a; p < b; ++p) {
        meters += haversine_m(pts[p].cell.center(), pts[p + 1].cell.center());
      }
      if (b <= a) {
        meters = haversine_m(from.cell.center(), to.cell.center());
      }
    } else {
      meters = haversine_m(from.cell.center(), to.cell.center());
    }
    trip.distance_km = meters / 1000.0;
    trips.push_back(trip);
  }
  return trips;
}

void write_stays(std::ostream& out, const std::vector<StayList>& stay_lists) {
  for (const auto& list : stay_lists) {
    for (const auto& stay : list.stays) {
      out << list.user_id << ',' << stay.cell.ix << ',' << stay.cell.iy << ',' << stay.t_start << ','
          << format_double(stay.duration_min) << '\n';
    }
  }
}

std::vector<StayList> read_stays(std::istream& in, const Grid& grid) {
  std::vector<StayList> lists;
  std::string line;
  std::size_t line_no = 0;
  while (read_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const auto f = split(line, ',');
    std::int64_t ix = 0;
    std::int64_t iy = 0;
    std::int64_t t = 0;
    double duration = 0.0;
    if (f.size() != 5 || !parse_int(f[1], ix) || !parse_int(f[2], iy) || !parse_int(f[3], t) ||
        !parse_double(f[4], duration)) {
      throw ParseError(line_no, "expected user_id,ix,iy,t_start,duration_min");
    }
    const std::string user(trim(f[0]));
    if (lists.empty() || lists.back().user_id != user) {
      lists.push_back({user, {}});
    }
    lists.back().stays.push_back(
        {grid.cell(ix, iy), t, t + static_cast<std::int64_t>(std::llround(duration * 60.0)), duration});
  }
  return lists;
}

}  // namespace lifeprof
