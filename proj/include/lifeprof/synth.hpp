#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lifeprof/geo.hpp"
#include "lifeprof/ingest.hpp"
#include "lifeprof/poi.hpp"

namespace lifeprof {

enum class DayPlan {
  errand,        // home, errand at the anchor, home, optional second errand, home
  commute,       // home, anchor for the working day, home
  commute_lunch, // as commute, with a lunch stop near the anchor
  two_cycle,     // home, anchor, home for lunch, anchor, home
  explore,       // home, a chain of leisure venues, home
};

struct Archetype {
  std::string name;
  DayPlan plan = DayPlan::commute;
  std::string anchor_tag;        // destination venue tag; unused for explore
  double anchor_min_km = 0.0;    // home-to-anchor distance range
  double anchor_max_km = 0.0;
  bool anchor_in_park = false;   // anchor lies inside an industrial-park AOI
  std::string side_tag;          // lunch venue (commute_lunch) or second errand (errand)
  double side_min_km = 0.0;      // from the anchor for lunch, from home for errands
  double side_max_km = 0.0;
  double side_probability = 1.0;
  double depart_hour = 8.0;      // mean first departure
  double return_hour = 18.0;     // mean departure from the anchor
  std::size_t min_stops = 0;     // leisure stops for explore
  std::size_t max_stops = 0;
  double roam_radius_km = 3.0;   // leisure venues are drawn within this radius of home
  double exploration_probability = 0.0;  // chance of an extra evening leisure stop

  int cycles() const { return plan == DayPlan::two_cycle ? 2 : 1; }
};

std::vector<Archetype> default_archetypes();

struct CohortSpec {
  std::vector<std::pair<std::string, double>> mix;  // archetype name -> fraction
  std::vector<Archetype> archetypes = default_archetypes();
  std::size_t n_users = 2000;
  double extent_km = 30.0;
  GeoPoint center{114.06, 22.54};
  double background_poi_density = 2.0;  // per km^2
  std::size_t leisure_venues = 400;
  std::size_t industrial_parks = 8;
  double park_side_km = 1.0;
  double cadence_s = 300.0;
  double record_probability = 0.45;
  std::int64_t base_day = 1575417600;  // midnight, UTC
  std::uint64_t seed = 1;

  /// Equal fractions over the default archetypes.
  static std::vector<std::pair<std::string, double>> default_mix();
};

struct SyntheticCohort {
  RawTrajectorySet trajectories;
  std::vector<PoiRecord> pois;
  std::map<std::string, std::string> labels;  // user_id -> archetype
};

/// Throws when the mix is malformed (unknown archetype, fraction outside
/// [0, 1], sum off 1 by more than 1e-9) or n_users is 0.
void validate(const CohortSpec& spec);

SyntheticCohort generate_cohort(const CohortSpec& spec);

void write_labels(std::ostream& out, const std::map<std::string, std::string>& labels);
std::map<std::string, std::string> read_labels(std::istream& in);

}  // namespace lifeprof
