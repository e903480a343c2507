// lifeprof: mobility lifestyle profiling pipeline.
//
//   lifeprof pipeline --config run.json --threads 1
//   lifeprof cluster --artifacts out --set cluster.k=5

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "lifeprof/config.hpp"
#include "lifeprof/pipeline.hpp"

namespace {

constexpr int kExitMissingArtifact = 2;
constexpr int kExitConfig = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifestyle profiling from mobility trajectories"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string artifacts;
  std::vector<std::string> overrides;
  std::string log_level = "info";

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "Root seed (overrides the config)");
  app.add_option("--threads", threads, "Worker threads; 1 is the deterministic reference path");
  app.add_option("--artifacts", artifacts, "Artifact directory (overrides paths.artifacts)");
  app.add_option("--set", overrides, "Override a config value, e.g. --set cluster.k=5")->take_all();
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"synth", "Generate a labeled synthetic cohort"},
      {"ingest", "Parse, snap and filter trajectories"},
      {"features", "Stays, motifs, rhythms, semantics and the two feature views"},
      {"cluster", "Multi-view k-means over the feature views"},
      {"topics", "LDA over activity semantics and per-cluster topic tables"},
      {"report", "Cluster profiles, motif and topic tables, ARI against labels"},
      {"pipeline", "Run every stage in order"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  auto logger = spdlog::stderr_color_mt("lifeprof");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::from_str(log_level));

  const std::string command = app.get_subcommands().front()->get_name();
  const auto stage = lifeprof::parse_stage(command);
  try {
    if (threads) {
      overrides.push_back("threads=" + std::to_string(*threads));
    }
    if (!artifacts.empty()) {
      overrides.push_back("paths.artifacts=\"" + artifacts + "\"");
    }
    const lifeprof::Config config = config_path.empty() ? lifeprof::load_config("", overrides, seed)
                                                        : lifeprof::load_config_file(config_path, overrides, seed);
    lifeprof::run_stage(*stage, config);
  } catch (const lifeprof::MissingArtifact& e) {
    std::cerr << "lifeprof " << command << ": " << e.what() << '\n';
    return kExitMissingArtifact;
  } catch (const lifeprof::ConfigError& e) {
    std::cerr << "lifeprof " << command << ": config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "lifeprof " << command << ": " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
