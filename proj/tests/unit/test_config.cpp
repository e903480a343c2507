#include <doctest.h>

#include <nlohmann/json.hpp>

#include "lifeprof/config.hpp"

using namespace lifeprof;

TEST_SUITE("config") {
  TEST_CASE("defaults carry the documented constants") {
    const auto c = load_config("");
    CHECK(c.seed == 1);
    CHECK(c.threads == 1);
    CHECK(c.ingest.grid_size_m == 150.0);
    CHECK(c.features.stays.min_duration_min == 30.0);
    CHECK(c.features.rhythm_bins == 12);
    CHECK(c.features.cbow.dim == 80);
    CHECK(c.features.cbow.window == 2);
    CHECK(c.cluster.multiview.k == 7);
    CHECK(c.topics.lda.n_topics == 12);
    CHECK(c.topics.lda.resolved_alpha() == doctest::Approx(50.0 / 12.0));
    CHECK(c.synth.mix.size() == 7);
  }

  TEST_CASE("section seeds follow the root seed unless set") {
    const auto c = load_config(R"({"seed": 9, "cluster": {"seed": 4}})");
    CHECK(c.synth.seed == 9);
    CHECK(c.features.cbow.seed == 9);
    CHECK(c.topics.lda.seed == 9);
    CHECK(c.cluster.multiview.seed == 4);
    const auto o = load_config("", {}, 21);
    CHECK(o.synth.seed == 21);
    const auto dumped = nlohmann::json::parse(c.dump());
    CHECK(dumped["synth"]["seed"] == 9);
  }

  TEST_CASE("overrides parse as JSON or fall back to strings") {
    const auto c = load_config("", {"cluster.k=5", "semantic.distance=cosine", "synth.mix={\"explorer\": 1.0}",
                                    "paths.artifacts=out/run1"});
    CHECK(c.cluster.multiview.k == 5);
    CHECK(c.features.distance == SemanticDistance::cosine);
    REQUIRE(c.synth.mix.size() == 1);
    CHECK(c.synth.mix[0].first == "explorer");
    CHECK(c.paths.artifacts == "out/run1");
  }

  TEST_CASE("invalid keys and values are config errors") {
    CHECK_THROWS_AS(load_config(R"({"cluster": {"kk": 3}})"), ConfigError);
    CHECK_THROWS_AS(load_config("", {"nope=1"}), ConfigError);
    CHECK_THROWS_AS(load_config("", {"cluster.k"}), ConfigError);
    CHECK_THROWS_AS(load_config("", {"cluster.k=0"}), ConfigError);
    CHECK_THROWS_AS(load_config("", {"cluster.k=\"seven\""}), ConfigError);
    CHECK_THROWS_AS(load_config("", {"synth.mix={\"explorer\": 0.5}"}), ConfigError);
    CHECK_THROWS_AS(load_config("", {"topics.labels=[\"a\"]"}), ConfigError);
    CHECK_THROWS_AS(load_config("{not json"), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/lifeprof.json"), ConfigError);
  }
}
