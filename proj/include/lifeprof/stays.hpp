#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "lifeprof/geo.hpp"
#include "lifeprof/ingest.hpp"

namespace lifeprof {

struct Stay {
  GridCell cell;
  std::int64_t t_start = 0;
  std::int64_t t_end = 0;     // timestamp of the last record of the stay
  double duration_min = 0.0;  // recorded presence; excludes sensor gaps
};

struct StayList {
  std::string user_id;
  std::vector<Stay> stays;
};

struct Trip {
  std::size_t from_index = 0;
  std::size_t to_index = 0;
  std::int64_t depart = 0;
  std::int64_t arrive = 0;
  double distance_km = 0.0;
};

struct StayOptions {
  double min_duration_min = 30.0;
  double max_gap_min = 120.0;
};

/// A stay is a maximal run of consecutive records in one cell whose span
/// (last t - first t) strictly exceeds the threshold. A record gap longer than
/// `max_gap_min` splits a run; stays split only by gaps are merged back, with
/// the gap excluded from the duration.
StayList detect_stays(const CleanTrajectory& trajectory, const StayOptions& options = {});

/// One trip per consecutive stay pair, length summed over the records between
/// the end of one stay and the start of the next.
std::vector<Trip> derive_trips(const StayList& stays, const CleanTrajectory& trajectory);

/// Rows `user_id,ix,iy,t_start,duration_min`.
void write_stays(std::ostream& out, const std::vector<StayList>& stay_lists);

/// Reads rows written by write_stays. Cells are rebuilt from `grid`; t_end is
/// reconstructed as t_start + duration.
std::vector<StayList> read_stays(std::istream& in, const Grid& grid);

}  // namespace lifeprof
