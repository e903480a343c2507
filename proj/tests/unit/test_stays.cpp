#include <doctest.h>

#include <sstream>

#include "lifeprof/stays.hpp"
#include "../support/oracles.hpp"
#include "../support/stay_fixtures.hpp"

using namespace lifeprof;

namespace {

const Grid& grid() {
  static const Grid g({114.0, 22.5}, 150.0);
  return g;
}

}  // namespace

TEST_SUITE("stays") {
  TEST_CASE("hand-built fixtures") {
    for (const auto& c : fixtures::stay_cases()) {
      CAPTURE(c.name);
      const StayList got = detect_stays(oracle::track(grid(), c.points), c.options);
      REQUIRE(got.stays.size() == c.expected.size());
      for (std::size_t i = 0; i < got.stays.size(); ++i) {
        CHECK(got.stays[i].cell.ix == c.expected[i].ix);
        CHECK(got.stays[i].cell.iy == c.expected[i].iy);
        CHECK(got.stays[i].t_start == fixtures::kDay + 60 * c.expected[i].start_min);
        CHECK(got.stays[i].duration_min == doctest::Approx(c.expected[i].duration_min));
      }
    }
  }

  TEST_CASE("stays exceed the threshold and never overlap") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<oracle::CellAt> pts;
      std::int64_t t = fixtures::kDay;
      while (t < fixtures::kDay + 86400) {
        const auto ix = static_cast<std::int64_t>(rng.below(3));
        const auto len = static_cast<std::int64_t>(rng.below(12));
        for (std::int64_t i = 0; i <= len; ++i) {
          pts.push_back({ix, 0, t});
          t += 60 * static_cast<std::int64_t>(1 + rng.below(rng.bernoulli(0.05) ? 200 : 8));
        }
      }
      const StayList s = detect_stays(oracle::track(grid(), pts));
      for (std::size_t i = 0; i < s.stays.size(); ++i) {
        CHECK(s.stays[i].duration_min > 30.0);
        CHECK(s.stays[i].t_end > s.stays[i].t_start);
        if (i > 0) {
          CHECK(s.stays[i].t_start > s.stays[i - 1].t_end);
        }
      }
    }
  }

  TEST_CASE("redundant same-cell records do not change stays") {
    for (const auto& c : fixtures::stay_cases()) {
      CAPTURE(c.name);
      std::vector<oracle::CellAt> denser;
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        denser.push_back(c.points[i]);
        if (i + 1 < c.points.size() && c.points[i + 1].ix == c.points[i].ix &&
            c.points[i + 1].iy == c.points[i].iy && c.points[i + 1].t - c.points[i].t > 1 &&
            static_cast<double>(c.points[i + 1].t - c.points[i].t) <= 60.0 * c.options.max_gap_min) {
          denser.push_back({c.points[i].ix, c.points[i].iy, (c.points[i].t + c.points[i + 1].t) / 2});
        }
      }
      const auto a = detect_stays(oracle::track(grid(), c.points), c.options);
      const auto b = detect_stays(oracle::track(grid(), denser), c.options);
      REQUIRE(a.stays.size() == b.stays.size());
      for (std::size_t i = 0; i < a.stays.size(); ++i) {
        CHECK(a.stays[i].cell == b.stays[i].cell);
        CHECK(a.stays[i].t_start == b.stays[i].t_start);
        CHECK(a.stays[i].duration_min == b.stays[i].duration_min);
      }
    }
  }

  TEST_CASE("neighbouring stays without travel records give a cell-center trip") {
    std::vector<oracle::CellAt> pts;
    oracle::occupy(pts, 0, 0, fixtures::kDay, fixtures::kDay + 3600);
    oracle::occupy(pts, 1, 0, fixtures::kDay + 3900, fixtures::kDay + 7500);
    const auto traj = oracle::track(grid(), pts);
    const auto stays = detect_stays(traj);
    const auto trips = derive_trips(stays, traj);
    REQUIRE(trips.size() == 1);
    const double expected = haversine_m(grid().cell(0, 0).center(), grid().cell(1, 0).center()) / 1000.0;
    CHECK(trips[0].distance_km == doctest::Approx(expected).epsilon(1e-12));
    CHECK(trips[0].distance_km == doctest::Approx(0.15).epsilon(1e-3));
    CHECK(trips[0].depart < trips[0].arrive);
  }

  TEST_CASE("trip count and indices") {
    std::vector<oracle::CellAt> pts;
    oracle::occupy(pts, 0, 0, fixtures::kDay, fixtures::kDay + 3600);
    const auto one = oracle::track(grid(), pts);
    CHECK(derive_trips(detect_stays(one), one).empty());
    oracle::occupy(pts, 2, 0, fixtures::kDay + 3900, fixtures::kDay + 7500);
    pts.push_back({5, 5, fixtures::kDay + 7800});
    oracle::occupy(pts, 9, 0, fixtures::kDay + 8100, fixtures::kDay + 12000);
    const auto three = oracle::track(grid(), pts);
    const auto trips = derive_trips(detect_stays(three), three);
    REQUIRE(trips.size() == 2);
    CHECK(trips[0].from_index == 0);
    CHECK(trips[0].to_index == 1);
    CHECK(trips[1].from_index == 1);
    CHECK(trips[1].to_index == 2);
    // Second trip goes through the (5, 5) record.
    const double via = haversine_m(grid().cell(2, 0).center(), grid().cell(5, 5).center()) +
                       haversine_m(grid().cell(5, 5).center(), grid().cell(9, 0).center());
    CHECK(trips[1].distance_km == doctest::Approx(via / 1000.0).epsilon(1e-12));
  }

  TEST_CASE("trip distances never exceed the path length") {
    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<oracle::CellAt> pts;
      std::int64_t t = fixtures::kDay;
      for (int leg = 0; leg < 6; ++leg) {
        const auto ix = static_cast<std::int64_t>(rng.below(20));
        const auto iy = static_cast<std::int64_t>(rng.below(20));
        const auto len = static_cast<std::int64_t>(rng.below(15));
        for (std::int64_t i = 0; i <= len; ++i, t += 300) {
          pts.push_back({ix, iy, t});
        }
      }
      const auto traj = oracle::track(grid(), pts);
      double path = 0.0;
      for (std::size_t i = 1; i < traj.points.size(); ++i) {
        path += haversine_m(traj.points[i - 1].cell.center(), traj.points[i].cell.center());
      }
      double trips = 0.0;
      for (const auto& trip : derive_trips(detect_stays(traj), traj)) {
        trips += trip.distance_km * 1000.0;
      }
      CHECK(trips <= path + 1e-6);
    }
  }

  TEST_CASE("stay rows round-trip") {
    std::vector<oracle::CellAt> pts;
    oracle::occupy(pts, 3, -2, fixtures::kDay, fixtures::kDay + 3600);
    oracle::occupy(pts, 4, 7, fixtures::kDay + 3900, fixtures::kDay + 9000);
    const auto list = detect_stays(oracle::track(grid(), pts, "alice"));
    std::ostringstream out;
    write_stays(out, {list});
    CHECK(out.str() == "alice,3,-2,1575417600,60\nalice,4,7,1575421500,85\n");
    std::istringstream in(out.str());
    const auto back = read_stays(in, grid());
    REQUIRE(back.size() == 1);
    REQUIRE(back[0].stays.size() == 2);
    CHECK(back[0].stays[1].cell == list.stays[1].cell);
    CHECK(back[0].stays[1].duration_min == list.stays[1].duration_min);
  }
}
