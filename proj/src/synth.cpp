#include "lifeprof/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "lifeprof/error.hpp"
#include "lifeprof/rng.hpp"
#include "lifeprof/text_io.hpp"

namespace lifeprof {

std::vector<Archetype> default_archetypes() {
  std::vector<Archetype> out;
  {
    Archetype a;
    a.name = "home_anchored";
    a.plan = DayPlan::errand;
    a.anchor_tag = "convenience store";
    a.anchor_min_km = 0.3;
    a.anchor_max_km = 1.0;
    a.side_tag = "recreational plaza";
    a.side_min_km = 0.3;
    a.side_max_km = 1.2;
    a.side_probability = 0.7;
    a.depart_hour = 9.5;
    a.roam_radius_km = 2.0;
    a.exploration_probability = 0.05;
    out.push_back(a);
  }
  {
    Archetype a;
    a.name = "school_run";
    a.plan = DayPlan::two_cycle;
    a.anchor_tag = "high school";
    a.anchor_min_km = 0.5;
    a.anchor_max_km = 2.5;
    a.depart_hour = 7.25;
    a.return_hour = 17.25;
    a.exploration_probability = 0.05;
    out.push_back(a);
  }
  {
    Archetype a;
    a.name = "short_commuter";
    a.plan = DayPlan::commute;
    a.anchor_tag = "office building";
    a.anchor_min_km = 1.5;
    a.anchor_max_km = 4.0;
    a.depart_hour = 8.25;
    a.return_hour = 18.0;
    a.exploration_probability = 0.05;
    out.push_back(a);
  }
  {
    Archetype a;
    a.name = "long_commuter";
    a.plan = DayPlan::commute;
    a.anchor_tag = "company";
    a.anchor_min_km = 10.0;
    a.anchor_max_km = 18.0;
    a.depart_hour = 7.5;
    a.return_hour = 18.25;
    a.exploration_probability = 0.05;
    out.push_back(a);
  }
  {
    Archetype a;
    a.name = "live_work_nearby";
    a.plan = DayPlan::commute_lunch;
    a.anchor_tag = "company";
    a.anchor_min_km = 0.3;
    a.anchor_max_km = 0.8;
    a.side_tag = "quick service restaurant";
    a.side_min_km = 0.3;
    a.side_max_km = 0.6;
    a.depart_hour = 8.5;
    a.return_hour = 18.0;
    a.exploration_probability = 0.05;
    out.push_back(a);
  }
  {
    Archetype a;
    a.name = "industrial_commuter";
    a.plan = DayPlan::commute_lunch;
    a.anchor_tag = "industrial park";
    a.anchor_min_km = 3.0;
    a.anchor_max_km = 6.0;
    a.anchor_in_park = true;
    a.side_tag = "industrial park";  // canteen inside the park
    a.side_min_km = 0.25;
    a.side_max_km = 0.5;
    a.depart_hour = 7.75;
    a.return_hour = 17.75;
    a.exploration_probability = 0.05;
    out.push_back(a);
  }
  {
    Archetype a;
    a.name = "explorer";
    a.plan = DayPlan::explore;
    a.depart_hour = 9.5;
    a.min_stops = 3;
    a.max_stops = 5;
    a.roam_radius_km = 8.0;
    out.push_back(a);
  }
  return out;
}

std::vector<std::pair<std::string, double>> CohortSpec::default_mix() {
  std::vector<std::pair<std::string, double>> mix;
  const auto archetypes = default_archetypes();
  for (const auto& a : archetypes) {
    mix.emplace_back(a.name, 1.0 / static_cast<double>(archetypes.size()));
  }
  return mix;
}

namespace {

const std::vector<std::string> kLeisureTags = {"park",  "shopping mall", "cinema", "museum",
                                               "stadium", "scenic spot", "gym",   "bar"};

const std::vector<std::string> kBackgroundTags = {
    "residence", "residence",   "residence",  "restaurant", "restaurant", "convenience store",
    "bank",      "pharmacy",    "bus station", "hospital",  "hotel",      "supermarket",
    "hair salon", "post office"};

constexpr double kDay = 86400.0;

const Archetype& find_archetype(const CohortSpec& spec, const std::string& name) {
  for (const auto& a : spec.archetypes) {
    if (a.name == name) {
      return a;
    }
  }
  throw Error(fmt::format("synth: unknown archetype '{}'", name));
}

PlanarPoint offset(const PlanarPoint& from, double distance_m, double bearing) {
  return {from.x + distance_m * std::cos(bearing), from.y + distance_m * std::sin(bearing)};
}

double planar_distance(const PlanarPoint& a, const PlanarPoint& b) { return std::hypot(a.x - b.x, a.y - b.y); }

PlanarPoint random_at_distance(Rng& rng, const PlanarPoint& from, double min_km, double max_km) {
  return offset(from, 1000.0 * rng.uniform(min_km, max_km), rng.uniform(0.0, 2.0 * std::numbers::pi));
}

struct Venue {
  PlanarPoint p;
  std::string tag;
};

struct Park {
  PlanarPoint center;
  double half_side_m;
};

// Piecewise-linear position over the day, in seconds since midnight.
class Itinerary {
 public:
  explicit Itinerary(PlanarPoint start) : here_(start) {}

  double now() const { return now_; }
  const PlanarPoint& here() const { return here_; }

  void stay_until(double t) {
    t = std::clamp(t, now_, kDay);
    legs_.push_back({now_, t, here_, here_});
    now_ = t;
  }

  void travel_to(const PlanarPoint& dest, double speed_mps) {
    const double duration = planar_distance(here_, dest) / speed_mps;
    legs_.push_back({now_, now_ + duration, here_, dest});
    now_ += duration;
    here_ = dest;
  }

  PlanarPoint at(double t) const {
    for (const auto& leg : legs_) {
      if (t <= leg.t1) {
        if (leg.t1 <= leg.t0) {
          return leg.b;
        }
        const double f = std::clamp((t - leg.t0) / (leg.t1 - leg.t0), 0.0, 1.0);
        return {leg.a.x + f * (leg.b.x - leg.a.x), leg.a.y + f * (leg.b.y - leg.a.y)};
      }
    }
    return here_;
  }

 private:
  struct Leg {
    double t0;
    double t1;
    PlanarPoint a;
    PlanarPoint b;
  };
  std::vector<Leg> legs_;
  PlanarPoint here_;
  double now_ = 0.0;
};

double travel_speed(Rng& rng, double distance_m) {
  // Walking pace for short hops, road speed for long ones.
  const double base = std::min(4.0 + 0.6 * distance_m / 1000.0, 14.0);
  return base * rng.uniform(0.85, 1.15);
}

double hours(Rng& rng, double mean_hour, double sd_hour, double lo, double hi) {
  return 3600.0 * std::clamp(rng.normal(mean_hour, sd_hour), lo, hi);
}

struct City {
  std::vector<Venue> leisure;
  std::vector<Park> parks;
  std::vector<Venue> background;
};

City build_city(const CohortSpec& spec, Rng& rng) {
  City city;
  const double half = 500.0 * spec.extent_km;
  auto anywhere = [&](double inset) {
    return PlanarPoint{rng.uniform(-half + inset, half - inset), rng.uniform(-half + inset, half - inset)};
  };
  for (std::size_t i = 0; i < spec.leisure_venues; ++i) {
    const PlanarPoint p = anywhere(0.0);
    city.leisure.push_back({p, kLeisureTags[rng.below(kLeisureTags.size())]});
  }
  const double park_half = 500.0 * spec.park_side_km;
  for (std::size_t i = 0; i < spec.industrial_parks; ++i) {
    city.parks.push_back({anywhere(std::min(half, 0.2 * half + park_half)), park_half});
  }
  const auto n_background =
      static_cast<std::size_t>(std::llround(spec.background_poi_density * spec.extent_km * spec.extent_km));
  for (std::size_t i = 0; i < n_background; ++i) {
    const PlanarPoint p = anywhere(0.0);
    city.background.push_back({p, kBackgroundTags[rng.below(kBackgroundTags.size())]});
  }
  return city;
}

// Distinct leisure venues within `radius_m` of home; falls back to the nearest ones.
std::vector<std::size_t> pick_leisure(Rng& rng, const City& city, const PlanarPoint& home, double radius_m,
                                      std::size_t count) {
  std::vector<std::size_t> order(city.leisure.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return planar_distance(city.leisure[a].p, home) < planar_distance(city.leisure[b].p, home);
  });
  std::size_t within = 0;
  while (within < order.size() && planar_distance(city.leisure[order[within]].p, home) <= radius_m) {
    ++within;
  }
  within = std::max(within, std::min(count, order.size()));
  std::vector<std::size_t> pool(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(within));
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < std::min(count, pool.size()); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(std::min(count, pool.size()));
  return pool;
}

struct UserDay {
  std::vector<TimedPosition> points;
  std::vector<Venue> venues;  // anchor POIs contributed by this user
};

UserDay simulate_user(const CohortSpec& spec, const Archetype& a, const City& city, const LocalProjection& proj,
                      Rng& rng) {
  const double half = 500.0 * spec.extent_km;
  UserDay day;
  PlanarPoint home{rng.uniform(-half, half), rng.uniform(-half, half)};
  PlanarPoint anchor = home;
  const Park* park_ptr = nullptr;
  if (a.anchor_in_park && !city.parks.empty()) {
    park_ptr = &city.parks[rng.below(city.parks.size())];
    const Park& park = *park_ptr;
    const double inner = 0.8 * park.half_side_m;
    anchor = {park.center.x + rng.uniform(-inner, inner), park.center.y + rng.uniform(-inner, inner)};
    home = random_at_distance(rng, anchor, a.anchor_min_km, a.anchor_max_km);
  } else if (a.plan != DayPlan::explore) {
    anchor = random_at_distance(rng, home, a.anchor_min_km, a.anchor_max_km);
    day.venues.push_back({anchor, a.anchor_tag});
  }
  day.venues.push_back({home, "residence"});

  Itinerary it(home);
  auto go = [&](const PlanarPoint& dest) { it.travel_to(dest, travel_speed(rng, planar_distance(it.here(), dest))); };
  const double depart = hours(rng, a.depart_hour, 0.35, 5.0, 12.0);
  it.stay_until(depart);
  switch (a.plan) {
    case DayPlan::errand: {
      go(anchor);
      it.stay_until(it.now() + 60.0 * rng.uniform(75.0, 120.0));
      go(home);
      if (!a.side_tag.empty() && rng.bernoulli(a.side_probability)) {
        const PlanarPoint second = random_at_distance(rng, home, a.side_min_km, a.side_max_km);
        day.venues.push_back({second, a.side_tag});
        it.stay_until(std::max(it.now() + 3600.0, hours(rng, 15.0, 0.5, 13.0, 17.0)));
        go(second);
        it.stay_until(it.now() + 60.0 * rng.uniform(75.0, 120.0));
        go(home);
      }
      break;
    }
    case DayPlan::commute:
    case DayPlan::commute_lunch: {
      go(anchor);
      if (a.plan == DayPlan::commute_lunch) {
        PlanarPoint lunch = random_at_distance(rng, anchor, a.side_min_km, a.side_max_km);
        if (park_ptr != nullptr) {
          // Stay inside the park: the AOI supplies the tag.
          const double inner = 0.8 * park_ptr->half_side_m;
          for (int tries = 0; tries < 32; ++tries) {
            if (std::abs(lunch.x - park_ptr->center.x) <= inner && std::abs(lunch.y - park_ptr->center.y) <= inner) {
              break;
            }
            lunch = random_at_distance(rng, anchor, a.side_min_km, a.side_max_km);
          }
          lunch.x = std::clamp(lunch.x, park_ptr->center.x - inner, park_ptr->center.x + inner);
          lunch.y = std::clamp(lunch.y, park_ptr->center.y - inner, park_ptr->center.y + inner);
        } else {
          day.venues.push_back({lunch, a.side_tag});
        }
        it.stay_until(hours(rng, 11.9, 0.15, 11.0, 13.0));
        go(lunch);
        it.stay_until(it.now() + 60.0 * rng.uniform(60.0, 80.0));
        go(anchor);
      }
      it.stay_until(hours(rng, a.return_hour, 0.4, 15.0, 21.0));
      go(home);
      break;
    }
    case DayPlan::two_cycle: {
      go(anchor);
      it.stay_until(hours(rng, 11.75, 0.15, 11.0, 12.5));
      go(home);
      it.stay_until(hours(rng, 13.75, 0.15, 13.0, 14.5));
      go(anchor);
      it.stay_until(hours(rng, a.return_hour, 0.25, 16.0, 19.0));
      go(home);
      break;
    }
    case DayPlan::explore: {
      const std::size_t n_stops =
          a.min_stops + static_cast<std::size_t>(rng.below(a.max_stops - a.min_stops + 1));
      for (std::size_t idx : pick_leisure(rng, city, home, 1000.0 * a.roam_radius_km, n_stops)) {
        go(city.leisure[idx].p);
        it.stay_until(it.now() + 60.0 * rng.uniform(60.0, 110.0));
      }
      go(home);
      break;
    }
  }
  if (a.exploration_probability > 0.0 && rng.bernoulli(a.exploration_probability) && it.now() < 19.5 * 3600.0) {
    const auto pick = pick_leisure(rng, city, home, 1000.0 * a.roam_radius_km, 1);
    if (!pick.empty()) {
      it.stay_until(std::max(it.now() + 3600.0, hours(rng, 19.5, 0.3, 18.5, 20.5)));
      go(city.leisure[pick.front()].p);
      it.stay_until(it.now() + 60.0 * rng.uniform(60.0, 90.0));
      go(home);
    }
  }
  it.stay_until(kDay);

  const auto slots = static_cast<std::int64_t>(kDay / spec.cadence_s);
  for (std::int64_t s = 0; s < slots; ++s) {
    if (!rng.bernoulli(spec.record_probability)) {
      continue;
    }
    const double t = static_cast<double>(s) * spec.cadence_s;
    const GeoPoint g = proj.to_geo(it.at(t));
    day.points.push_back({std::round(g.lon * 1e6) / 1e6, std::round(g.lat * 1e6) / 1e6,
                          spec.base_day + static_cast<std::int64_t>(t)});
  }
  if (day.points.empty()) {
    const GeoPoint g = proj.to_geo(home);
    day.points.push_back({std::round(g.lon * 1e6) / 1e6, std::round(g.lat * 1e6) / 1e6, spec.base_day});
  }
  return day;
}

GeoPoint rounded(const LocalProjection& proj, const PlanarPoint& p) {
  const GeoPoint g = proj.to_geo(p);
  return {std::round(g.lon * 1e6) / 1e6, std::round(g.lat * 1e6) / 1e6};
}

}  // namespace

void validate(const CohortSpec& spec) {
  if (spec.n_users == 0) {
    throw Error("synth: n_users must be at least 1");
  }
  if (spec.mix.empty()) {
    throw Error("synth: archetype mix is empty");
  }
  double total = 0.0;
  std::set<std::string> seen;
  for (const auto& [name, fraction] : spec.mix) {
    const Archetype& a = find_archetype(spec, name);
    if (!seen.insert(name).second) {
      throw Error(fmt::format("synth: archetype '{}' listed twice", name));
    }
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
      throw Error(fmt::format("synth: fraction for '{}' outside [0, 1]", name));
    }
    if (a.exploration_probability < 0.0 || a.exploration_probability > 1.0) {
      throw Error(fmt::format("synth: exploration probability for '{}' outside [0, 1]", name));
    }
    if (a.plan == DayPlan::explore && (a.min_stops == 0 || a.max_stops < a.min_stops)) {
      throw Error(fmt::format("synth: archetype '{}' needs 1 <= min_stops <= max_stops", name));
    }
    total += fraction;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(fmt::format("synth: archetype fractions sum to {}, not 1", format_double(total)));
  }
  if (!(spec.record_probability > 0.0 && spec.record_probability <= 1.0)) {
    throw Error("synth: record_probability must be in (0, 1]");
  }
  if (!(spec.cadence_s >= 1.0) || !(spec.extent_km > 0.0)) {
    throw Error("synth: cadence and extent must be positive");
  }
}

SyntheticCohort generate_cohort(const CohortSpec& spec) {
  validate(spec);
  Rng city_rng(derive_seed(spec.seed, 0));
  const City city = build_city(spec, city_rng);
  const LocalProjection proj(spec.center);

  // Largest-remainder allocation of users to archetypes.
  const std::size_t m = spec.mix.size();
  std::vector<std::size_t> counts(m);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t allocated = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double exact = spec.mix[i].second * static_cast<double>(spec.n_users);
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    allocated += counts[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; allocated < spec.n_users; ++i, ++allocated) {
    ++counts[remainders[i % m].second];
  }
  std::vector<std::size_t> kinds;
  for (std::size_t i = 0; i < m; ++i) {
    kinds.insert(kinds.end(), counts[i], i);
  }
  kinds.resize(spec.n_users);
  for (std::size_t i = kinds.size(); i > 1; --i) {
    std::swap(kinds[i - 1], kinds[city_rng.below(i)]);
  }

  SyntheticCohort cohort;
  const auto width = std::to_string(spec.n_users).size();
  std::vector<Venue> anchors;
  for (std::size_t u = 0; u < spec.n_users; ++u) {
    const std::string id = fmt::format("u{:0{}d}", u + 1, width);
    const Archetype& a = find_archetype(spec, spec.mix[kinds[u]].first);
    Rng rng(derive_seed(spec.seed, u + 1));
    UserDay day = simulate_user(spec, a, city, proj, rng);
    cohort.labels[id] = a.name;
    anchors.insert(anchors.end(), day.venues.begin(), day.venues.end());
    cohort.trajectories[id] = RawTrajectory{id, std::move(day.points)};
  }

  for (const auto& park : city.parks) {
    const double h = park.half_side_m;
    const auto& c = park.center;
    PoiRecord poi;
    poi.tag = "industrial park";
    const GeoPoint centroid = rounded(proj, c);
    poi.lon = centroid.lon;
    poi.lat = centroid.lat;
    poi.polygon = {rounded(proj, {c.x - h, c.y - h}), rounded(proj, {c.x + h, c.y - h}),
                   rounded(proj, {c.x + h, c.y + h}), rounded(proj, {c.x - h, c.y + h})};
    cohort.pois.push_back(std::move(poi));
  }
  auto add_points = [&](const std::vector<Venue>& venues) {
    for (const auto& v : venues) {
      const GeoPoint g = rounded(proj, v.p);
      cohort.pois.push_back({v.tag, g.lon, g.lat, {}});
    }
  };
  add_points(anchors);
  add_points(city.leisure);
  add_points(city.background);
  return cohort;
}

void write_labels(std::ostream& out, const std::map<std::string, std::string>& labels) {
  out << "user_id,archetype\n";
  for (const auto& [id, name] : labels) {
    out << id << ',' << name << '\n';
  }
}

std::map<std::string, std::string> read_labels(std::istream& in) {
  std::map<std::string, std::string> labels;
  std::string line;
  std::size_t line_no = 0;
  while (read_line(in, line)) {
    ++line_no;
    if (line_no == 1 && line == "user_id,archetype") {
      continue;
    }
    if (trim(line).empty()) {
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 2 || fields[0].empty()) {
      throw ParseError(line_no, "expected user_id,archetype");
    }
    labels[std::string(fields[0])] = std::string(fields[1]);
  }
  return labels;
}

}  // namespace lifeprof
