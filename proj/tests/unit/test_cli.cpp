#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "lifeprof/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LIFEPROF_CLI) + " " + args + " --log-level off >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lifeprof_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("cluster without features names the missing artifact") {
    const auto dir = scratch("missing");
    CHECK(run_cli("cluster --artifacts " + dir.string()) == 2);
    fs::remove_all(dir);
  }

  TEST_CASE("bad config keys exit 3") {
    const auto dir = scratch("badkey");
    CHECK(run_cli("synth --artifacts " + dir.string() + " --set cluster.kk=3") == 3);
    CHECK(run_cli("synth --artifacts " + dir.string() + " --config /nonexistent.json") == 3);
    CHECK(run_cli("frobnicate") == 3);
    fs::remove_all(dir);
  }

  TEST_CASE("a 500-user pipeline produces every artifact") {
    const auto dir = scratch("pipeline");
    REQUIRE(run_cli("pipeline --threads 1 --artifacts " + dir.string() +
                    " --set synth.n_users=500 --set topics.iters=200 --set topics.burn_in=100") == 0);
    using namespace lifeprof::artifact;
    for (const char* name :
         {kConfig, kTrajectories, kPois, kLabels, kCleanTrajectories, kGrid, kFilterReport, kStays, kTrips,
          kSemantics, kEmbeddings, kCbowLoss, kMotifs, kTemporal, kRhythms, kUserFeatures, kExclusions, kUserIds,
          kFeaturesSt, kFeaturesSem, kViewSt, kViewSem, kScalingSt, kScalingSem, kClusterModel, kAssignments,
          kClusterDiagnostics, kTopicWord, kDocTopic, kClusterTopics, kClusterTopicsText, kReportFeatureMeans,
          kReportMotifs, kReportTopics, kReportAri, kReport}) {
      CAPTURE(name);
      CHECK(fs::exists(dir / name));
    }
    CHECK(slurp(dir / kReport).find("ARI vs ground-truth labels: ") != std::string::npos);

    // Re-running one stage on unchanged inputs reproduces its artifacts.
    const std::string before = slurp(dir / kAssignments);
    REQUIRE(run_cli("cluster --threads 1 --artifacts " + dir.string() + " --set synth.n_users=500") == 0);
    CHECK(slurp(dir / kAssignments) == before);
    fs::remove_all(dir);
  }
}
