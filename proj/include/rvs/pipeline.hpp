#pragma once

// Command implementations behind the rvs executable. Each returns the
// process exit status: 0 success, 1 invalid input or I/O failure, 2 backend
// failure. Diagnostics go to `err`, short summaries to `out`.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "rvs/config.hpp"

namespace rvs::pipeline {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitBackend = 2;

/// Output file names inside the configured output directory.
inline constexpr std::string_view kAnnotatedFile = "annotated_reviews.jsonl";
inline constexpr std::string_view kDistributionsFile = "distributions.json";
inline constexpr std::string_view kFeatureMappingFile = "feature_mapping.json";
inline constexpr std::string_view kReleaseFile = "release_validation.json";

/// Classifies sentiment and topic, extracts keyphrases, writes the annotated
/// corpus and the sentiment, topic and cross-tab reports.
int cmd_analyze(const config::PipelineConfig& config, const std::filesystem::path& reviews,
                std::ostream& out, std::ostream& err);

/// Maps the reviews of one app onto its feature documents. Without `app`
/// the reviews must all belong to a single app.
int cmd_map_features(const config::PipelineConfig& config, const std::filesystem::path& reviews,
                     const std::filesystem::path& features_dir, std::optional<std::string> app,
                     std::ostream& out, std::ostream& err);

/// Release-log coverage. Reviews without a topic are classified first.
int cmd_validate_release(const config::PipelineConfig& config,
                         const std::filesystem::path& reviews,
                         const std::filesystem::path& release_log, std::ostream& out,
                         std::ostream& err);

/// Rewrites the distribution reports from an annotated corpus without
/// calling a backend.
int cmd_report(const config::PipelineConfig& config, const std::filesystem::path& reviews,
               std::ostream& out, std::ostream& err);

}  // namespace rvs::pipeline
