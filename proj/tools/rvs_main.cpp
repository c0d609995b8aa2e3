// rvs: app-review value-stream pipeline.
//
//   rvs analyze --reviews reviews.jsonl [--out DIR]
//   rvs map-features --reviews reviews.jsonl --features DIR [--app NAME]
//   rvs validate-release --reviews reviews.jsonl --release-log log.csv [--threshold 0.8]
//   rvs report --reviews annotated_reviews.jsonl

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rvs/config.hpp"
#include "rvs/error.hpp"
#include "rvs/pipeline.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::optional<std::string> backend;
  std::optional<std::string> backend_url;
  std::optional<std::string> labels;
  std::optional<std::string> out;
  std::optional<double> threshold;
  std::optional<double> min_score;
  std::optional<std::string> mode;
  std::optional<bool> raw;
  std::optional<std::size_t> jobs;
  std::string reviews;
  std::string features;
  std::string release_log;
  std::optional<std::string> app;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "rvs.toml configuration file");
  cmd->add_option("--backend", f.backend, "stub or remote")->check(CLI::IsMember({"stub", "remote"}));
  cmd->add_option("--backend-url", f.backend_url, "sidecar base URL for the remote backend");
  cmd->add_option("--labels", f.labels, "topic label TOML file");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--mode", f.mode, "topic classifier: entailment or masked")
      ->check(CLI::IsMember({"entailment", "masked"}));
  cmd->add_flag("--raw{true}", f.raw, "keep raw entailment scores (no softmax)");
  cmd->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--reviews", f.reviews, "reviews file (.jsonl or .csv)")->required();
}

rvs::config::PipelineConfig resolve(const Flags& f) {
  rvs::config::PipelineConfig c =
      f.config_path.empty() ? rvs::config::PipelineConfig{} : rvs::config::load(f.config_path);
  rvs::config::apply_environment(c);
  if (f.backend) c.backend = *f.backend;
  if (f.backend_url) c.backend_url = *f.backend_url;
  if (f.labels) c.labels = *f.labels;
  if (f.out) c.out_dir = *f.out;
  if (f.threshold) c.release_threshold = *f.threshold;
  if (f.min_score) c.feature_min_score = *f.min_score;
  if (f.mode) c.mode = *rvs::parse_classification_mode(*f.mode);
  if (f.raw && *f.raw) c.normalize = false;
  if (f.jobs) c.jobs = *f.jobs;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"App-review value-stream pipeline"};
  app.require_subcommand(1);
  Flags f;

  auto* analyze = app.add_subcommand("analyze", "classify, summarize and report a review corpus");
  add_common(analyze, f);

  auto* map = app.add_subcommand("map-features", "map reviews onto app feature documentation");
  add_common(map, f);
  map->add_option("--features", f.features, "directory of feature documents")->required();
  map->add_option("--app", f.app, "app whose reviews are mapped");
  map->add_option("--min-score", f.min_score, "minimum cosine for a feature assignment");

  auto* validate = app.add_subcommand("validate-release", "measure release-log coverage");
  add_common(validate, f);
  validate->add_option("--release-log", f.release_log, "release log CSV")->required();
  validate->add_option("--threshold", f.threshold, "semantic score threshold in (0, 1]");

  auto* report = app.add_subcommand("report", "rewrite reports from an annotated corpus");
  add_common(report, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rvs::pipeline::kExitInvalid;
  }

  rvs::config::PipelineConfig config;
  try {
    config = resolve(f);
  } catch (const rvs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return rvs::pipeline::kExitInvalid;
  }

  if (analyze->parsed()) {
    return rvs::pipeline::cmd_analyze(config, f.reviews, std::cout, std::cerr);
  }
  if (map->parsed()) {
    return rvs::pipeline::cmd_map_features(config, f.reviews, f.features, f.app, std::cout,
                                           std::cerr);
  }
  if (validate->parsed()) {
    return rvs::pipeline::cmd_validate_release(config, f.reviews, f.release_log, std::cout,
                                               std::cerr);
  }
  return rvs::pipeline::cmd_report(config, f.reviews, std::cout, std::cerr);
}
