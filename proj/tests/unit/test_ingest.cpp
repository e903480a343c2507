#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "lifeprof/error.hpp"
#include "lifeprof/geo.hpp"
#include "lifeprof/ingest.hpp"
#include "lifeprof/rng.hpp"

using namespace lifeprof;

namespace {

constexpr double kEarthRadius = 6371008.8;

double lon_offset_for_meters(double meters, double lat) {
  return meters / (kEarthRadius * std::numbers::pi / 180.0 * std::cos(lat * std::numbers::pi / 180.0));
}

RawTrajectorySet parse(const std::string& text, FormatDescriptor f = {}) {
  std::istringstream in(text);
  return parse_trajectories(in, f);
}

// Walker: moves ~1 m/s east, one record per minute for `minutes`.
CleanTrajectory walker(const Grid& grid, const std::string& id, double lat_offset, int minutes) {
  CleanTrajectory t{id, {}};
  const GeoPoint ref = grid.projection().reference();
  for (int i = 0; i <= minutes; ++i) {
    const GeoPoint p{ref.lon + lon_offset_for_meters(60.0 * i, ref.lat), ref.lat + lat_offset};
    t.points.push_back({grid.snap(p), 1575417600 + 60 * i});
  }
  return t;
}

}  // namespace

TEST_SUITE("ingest") {
  TEST_CASE("reference point maps to the origin cell with its center 75 m east and north") {
    const GeoPoint ref{114.0, 22.5};
    const Grid grid(ref, 150.0);
    const GridCell c = grid.snap(ref);
    CHECK(c.ix == 0);
    CHECK(c.iy == 0);
    const PlanarPoint center = grid.projection().to_plane(c.center());
    CHECK(center.x == doctest::Approx(75.0).epsilon(1e-9));
    CHECK(center.y == doctest::Approx(75.0).epsilon(1e-9));
  }

  TEST_CASE("a point 151 m due east lands in column 1") {
    const GeoPoint ref{114.0, 22.5};
    const Grid grid(ref, 150.0);
    const GridCell c = grid.snap({ref.lon + lon_offset_for_meters(151.0, ref.lat), ref.lat});
    CHECK(c.ix == 1);
    CHECK(c.iy == 0);
    const GridCell d = grid.snap({ref.lon + lon_offset_for_meters(149.0, ref.lat), ref.lat});
    CHECK(d.ix == 0);
  }

  TEST_CASE("snapping is idempotent on centers and stable within half a cell") {
    const Grid grid({113.8, 22.4}, 150.0);
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
      const auto ix = static_cast<std::int64_t>(rng.below(400)) - 200;
      const auto iy = static_cast<std::int64_t>(rng.below(400)) - 200;
      const GridCell c = grid.cell(ix, iy);
      CHECK(grid.snap(c.center()) == c);
      const PlanarPoint p = grid.projection().to_plane(c.center());
      const PlanarPoint q{p.x + rng.uniform(-74.9, 74.9), p.y + rng.uniform(-74.9, 74.9)};
      const GridCell s = grid.snap(grid.projection().to_geo(q));
      CHECK(s.ix == ix);
      CHECK(s.iy == iy);
    }
  }

  TEST_CASE("parse sorts by time and groups by user") {
    const auto set = parse(
        "u1,114.0,22.5,1575417900\n"
        "u2,114.1,22.6,1575417600\n"
        "u1,114.0,22.5,1575417600\n"
        "u1,114.0,22.5,1575417700\n");
    REQUIRE(set.size() == 2);
    const auto& u1 = set.at("u1").points;
    REQUIRE(u1.size() == 3);
    CHECK(u1[0].t == 1575417600);
    CHECK(u1[1].t == 1575417700);
    CHECK(u1[2].t == 1575417900);
    CHECK(set.at("u2").points.size() == 1);
  }

  TEST_CASE("duplicate timestamps keep the last record") {
    const auto set = parse("u1,114.0,22.5,100\nu1,114.2,22.7,100\nu1,114.1,22.6,50\n");
    const auto& pts = set.at("u1").points;
    REQUIRE(pts.size() == 2);
    CHECK(pts[1].lon == 114.2);
    CHECK(pts[1].lat == 22.7);
  }

  TEST_CASE("malformed rows report their line number") {
    try {
      parse("u1,114.0,22.5,1575417600\nu1,abc,22.5,1575417600\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse("u1,114.0,22.5\n"), ParseError);
    CHECK_THROWS_AS(parse("u1,190.0,22.5,5\n"), ParseError);
    CHECK_THROWS_AS(parse("u1,114.0,-91,5\n"), ParseError);
    CHECK_THROWS_AS(parse("u1,114.0,22.5,-5\n"), ParseError);
  }

  TEST_CASE("empty input is an empty map") {
    CHECK(parse("").empty());
  }

  TEST_CASE("header and delimiter follow the descriptor") {
    const auto set = parse("user_id;lon;lat;t\nu1;114.0;22.5;10\n", {';', true});
    REQUIRE(set.size() == 1);
    CHECK(set.at("u1").points[0].t == 10);
  }

  TEST_CASE("parse, write, parse round-trips exactly") {
    Rng rng(3);
    std::ostringstream text;
    for (int i = 0; i < 300; ++i) {
      text << "user" << rng.below(7) << ',' << rng.uniform(-180.0, 180.0) << ',' << rng.uniform(-90.0, 90.0) << ','
           << rng.below(1'000'000'000) << '\n';
    }
    const auto first = parse(text.str());
    std::ostringstream out;
    write_trajectories(out, first);
    const auto second = parse(out.str());
    REQUIRE(first.size() == second.size());
    for (const auto& [id, traj] : first) {
      const auto& other = second.at(id).points;
      REQUIRE(other.size() == traj.points.size());
      for (std::size_t i = 0; i < other.size(); ++i) {
        CHECK(other[i].lon == traj.points[i].lon);
        CHECK(other[i].lat == traj.points[i].lat);
        CHECK(other[i].t == traj.points[i].t);
      }
    }
  }

  TEST_CASE("quantile interpolates between order statistics") {
    CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 0.5) == doctest::Approx(2.5));
    CHECK(quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.99) == doctest::Approx(4.96));
    CHECK(quantile({7.0}, 0.01) == 7.0);
  }

  TEST_CASE("identical users are all retained") {
    const Grid grid({114.0, 22.5}, 150.0);
    TrajectorySet set;
    for (int u = 0; u < 10; ++u) {
      auto t = walker(grid, "u" + std::to_string(u), 0.0, 120);
      set.emplace(t.user_id, t);
    }
    const auto r = filter_cohort(set);
    CHECK(r.retained.size() == 10);
    CHECK(r.report.drift_points_removed == 0);
    CHECK(r.report.removed_users.empty());
  }

  TEST_CASE("a teleporting user is removed by the speed rule") {
    const Grid grid({114.0, 22.5}, 150.0);
    TrajectorySet set;
    for (int u = 0; u < 99; ++u) {
      auto t = walker(grid, "w" + std::to_string(u), 0.001 * u, 180);
      set.emplace(t.user_id, t);
    }
    // 500 km north within 60 s, and staying there.
    auto jumper = walker(grid, "jumper", 0.0, 180);
    const double dlat = 500000.0 / (kEarthRadius * std::numbers::pi / 180.0);
    for (std::size_t i = 90; i < jumper.points.size(); ++i) {
      jumper.points[i].cell = grid.snap({jumper.points[i].cell.center_lon, jumper.points[i].cell.center_lat + dlat});
    }
    set.emplace("jumper", jumper);
    const auto r = filter_cohort(set);
    CHECK_FALSE(r.retained.contains("jumper"));
    CHECK(r.report.users_removed_speed == 1);
    CHECK(r.retained.size() == 99);
  }

  TEST_CASE("a single-point user is removed by the duration rule") {
    const Grid grid({114.0, 22.5}, 150.0);
    TrajectorySet set;
    for (int u = 0; u < 20; ++u) {
      auto t = walker(grid, "w" + std::to_string(u), 0.0, 240);
      set.emplace(t.user_id, t);
    }
    set.emplace("single", CleanTrajectory{"single", {{grid.snap({114.0, 22.5}), 1575417600}}});
    const auto r = filter_cohort(set);
    CHECK_FALSE(r.retained.contains("single"));
    CHECK(r.report.users_removed_duration == 1);
  }

  TEST_CASE("pure percentile trimming is available with zero guards") {
    const Grid grid({114.0, 22.5}, 150.0);
    TrajectorySet set;
    for (int u = 0; u < 100; ++u) {
      auto t = walker(grid, "w" + std::to_string(u), 0.0, 60 + u);
      set.emplace(t.user_id, t);
    }
    FilterOptions o;
    o.min_speed_cap_mps = 0.0;
    o.min_span_floor_s = 0.0;
    const auto r = filter_cohort(set, o);
    // The shortest span lies strictly below the 1st percentile.
    CHECK(r.report.users_removed_duration == 1);
    CHECK_FALSE(r.retained.contains("w0"));
  }

  TEST_CASE("filtering never adds points and tiny cohorts are flagged") {
    const Grid grid({114.0, 22.5}, 150.0);
    TrajectorySet one;
    one.emplace("a", walker(grid, "a", 0.0, 30));
    const auto r1 = filter_cohort(one);
    CHECK(r1.report.insufficient_cohort);
    CHECK(r1.retained.size() == 1);
    CHECK(r1.report.to_json().find("insufficient cohort") != std::string::npos);

    Rng rng(11);
    TrajectorySet set;
    for (int u = 0; u < 30; ++u) {
      auto t = walker(grid, "w" + std::to_string(u), 0.0, 60 + static_cast<int>(rng.below(200)));
      if (u % 5 == 0) {
        t.points[t.points.size() / 2].cell = grid.cell(4000, 4000);
      }
      set.emplace(t.user_id, t);
    }
    const auto r = filter_cohort(set);
    for (const auto& [id, traj] : r.retained) {
      CHECK(traj.points.size() <= set.at(id).points.size());
    }
    CHECK(r.report.points_out <= r.report.points_in);
  }
}
