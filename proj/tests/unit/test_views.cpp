#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "lifeprof/error.hpp"
#include "lifeprof/rng.hpp"
#include "lifeprof/views.hpp"

using namespace lifeprof;

namespace {

UserFeatures complete_user(std::string id, double seed_value) {
  UserFeatures u;
  u.user_id = std::move(id);
  u.motif = MotifFeature{1, 0, 0, 0, 0};
  u.rog_km = seed_value;
  u.temporal = {0.3 * seed_value, 0.5, false};
  u.semantic = SemanticFeatures{2, std::vector<double>(80, seed_value), 1.5};
  return u;
}

double column_mean(const Matrix& m, std::size_t c) {
  double s = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    s += m(r, c);
  }
  return s / static_cast<double>(m.rows());
}

double column_sd(const Matrix& m, std::size_t c) {
  const double mean = column_mean(m, c);
  double ss = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    ss += (m(r, c) - mean) * (m(r, c) - mean);
  }
  return std::sqrt(ss / static_cast<double>(m.rows() - 1));
}

}  // namespace

TEST_SUITE("views") {
  TEST_CASE("three complete users fill both views in order") {
    const std::vector<UserFeatures> users = {complete_user("a", 1), complete_user("b", 2), complete_user("c", 3)};
    const auto r = assemble_views(users);
    CHECK(r.excluded.empty());
    CHECK(r.views.user_ids == std::vector<std::string>{"a", "b", "c"});
    CHECK(r.views.st.rows() == 3);
    CHECK(r.views.st.cols() == 8);
    CHECK(r.views.sem.cols() == 82);
    CHECK(r.views.st(1, 5) == 2.0);
    CHECK(r.views.st(2, 6) == doctest::Approx(0.9));
    CHECK(r.views.sem(2, 0) == 3.0);
    CHECK(r.views.sem(0, 80) == 2.0);
    CHECK(r.views.sem(0, 81) == 1.5);
    CHECK(st_column_names().size() == 8);
    CHECK(sem_column_names(80).size() == 82);
    CHECK(sem_column_names(80)[80] == "n_uas");
  }

  TEST_CASE("users without stays are excluded and listed") {
    std::vector<UserFeatures> users = {complete_user("a", 1), complete_user("b", 2)};
    users[1].motif.reset();
    users[1].semantic.reset();
    const auto r = assemble_views(users);
    CHECK(r.views.user_ids == std::vector<std::string>{"a"});
    REQUIRE(r.excluded.size() == 1);
    CHECK(r.excluded[0].user_id == "b");
    users[0].motif.reset();
    CHECK_THROWS_AS(assemble_views(users), Error);
  }

  TEST_CASE("z-scoring leaves the one-hot block alone") {
    FeatureViews v;
    v.user_ids = {"a", "b", "c"};
    v.st = Matrix(3, 8);
    v.sem = Matrix(3, 2);
    for (std::size_t r = 0; r < 3; ++r) {
      v.st(r, r) = 1.0;
      v.st(r, 5) = static_cast<double>(r + 1);  // 1,2,3
      v.st(r, 6) = 5.0;                          // constant
      v.st(r, 7) = static_cast<double>(r * r);
      v.sem(r, 0) = 10.0 * static_cast<double>(r);
      v.sem(r, 1) = 7.0;
    }
    const auto [scaled, params] = standardize(v);
    for (std::size_t c = 0; c < kMotifSlots; ++c) {
      for (std::size_t r = 0; r < 3; ++r) {
        CHECK(scaled.st(r, c) == v.st(r, c));
      }
    }
    CHECK(scaled.st(0, 5) == doctest::Approx(-1.0));
    CHECK(scaled.st(2, 5) == doctest::Approx(1.0));
    CHECK(std::abs(column_mean(scaled.st, 5)) < 1e-12);
    CHECK(column_sd(scaled.st, 5) == doctest::Approx(1.0));
    for (std::size_t r = 0; r < 3; ++r) {
      CHECK(scaled.st(r, 6) == 0.0);
      CHECK(scaled.sem(r, 1) == 0.0);
    }
    CHECK(params.st.stddev[6] == 1.0);
    CHECK(column_sd(scaled.sem, 0) == doctest::Approx(1.0));
  }

  TEST_CASE("apply then invert round-trips") {
    Rng rng(3);
    Matrix m(50, 6);
    for (double& x : m.data()) {
      x = rng.normal(4.0, 20.0);
    }
    const auto p = fit_scaling(m, std::vector<bool>(6, true));
    const auto back = p.invert(p.apply(m));
    for (std::size_t i = 0; i < m.data().size(); ++i) {
      CHECK(std::abs(back.data()[i] - m.data()[i]) <= 1e-12 * std::max(1.0, std::abs(m.data()[i])));
    }
  }

  TEST_CASE("matrices round-trip through CSV") {
    Matrix m(2, 3);
    m(0, 0) = 0.1;
    m(0, 2) = -1e-300;
    m(1, 1) = 12345.678901234567;
    const auto path = std::filesystem::temp_directory_path() / "lifeprof_matrix_test.csv";
    write_matrix(path, m, {"x", "y", "z"});
    CHECK(read_matrix(path) == m);
    std::filesystem::remove(path);
  }
}
