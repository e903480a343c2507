#include <doctest.h>

#include <sstream>

#include "lifeprof/cbow.hpp"
#include "lifeprof/error.hpp"
#include "../support/oracles.hpp"

using namespace lifeprof;

TEST_SUITE("semantic") {
  TEST_CASE("training is deterministic for a fixed seed") {
    const auto corpus = oracle::two_community_corpus(3, 20, 300);
    CbowOptions opt;
    opt.dim = 16;
    opt.epochs = 3;
    opt.seed = 11;
    const auto a = train_cbow(corpus, opt);
    const auto b = train_cbow(corpus, opt);
    CHECK(a.table == b.table);
    CHECK(a.epoch_loss == b.epoch_loss);
    opt.seed = 12;
    CHECK_FALSE(train_cbow(corpus, opt).table == a.table);
  }

  TEST_CASE("table shape and vocabulary ordering") {
    const std::vector<std::vector<std::string>> corpus = {{"b", "a", "b"}, {"c", "b"}, {"a", "b"}};
    CbowOptions opt;
    opt.dim = 7;
    opt.epochs = 1;
    const auto r = train_cbow(corpus, opt);
    CHECK(r.table.dim() == 7);
    CHECK(r.table.vocab() == std::vector<std::string>{"b", "a", "c"});
    CHECK(r.epoch_loss.size() == 1);
  }

  TEST_CASE("fewer than two distinct tags is degenerate") {
    CHECK_THROWS_WITH_AS(train_cbow({{"a", "a", "a"}}), "degenerate vocabulary", Error);
    CHECK_THROWS_WITH_AS(train_cbow({}), "degenerate vocabulary", Error);
  }

  TEST_CASE("loss does not rise over the first three epochs") {
    const auto corpus = oracle::two_community_corpus(1);
    CbowOptions opt;
    opt.epochs = 3;
    const auto r = train_cbow(corpus, opt);
    REQUIRE(r.epoch_loss.size() == 3);
    CHECK(r.epoch_loss[1] <= r.epoch_loss[0] * 1.01);
    CHECK(r.epoch_loss[2] <= r.epoch_loss[1] * 1.01);
  }

  TEST_CASE("tables round-trip through text") {
    const auto corpus = oracle::two_community_corpus(2, 20, 200);
    CbowOptions opt;
    opt.dim = 8;
    opt.epochs = 2;
    const auto table = train_cbow(corpus, opt).table;
    std::ostringstream out;
    table.write(out);
    CHECK(out.str().rfind("dim=8 vocab=20 seed=1\n", 0) == 0);
    std::istringstream in(out.str());
    CHECK(EmbeddingTable::read(in) == table);
    std::istringstream bad("dim=8 vocab=2 seed=1\na,1,2\n");
    CHECK_THROWS_AS(EmbeddingTable::read(bad), ParseError);
    CHECK_THROWS_WITH_AS(table.vector("nope"), "tag 'nope' has no embedding", Error);
  }
}
