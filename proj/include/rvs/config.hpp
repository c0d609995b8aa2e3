#pragma once

// Pipeline settings: built-in defaults, overlaid by an rvs.toml file, then the
// REVIEW_VS_BACKEND_URL environment variable, then command-line flags.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rvs/backend.hpp"
#include "rvs/classifier.hpp"
#include "rvs/keyphrase.hpp"
#include "rvs/prompt.hpp"
#include "rvs/types.hpp"
#include "rvs/valuestream.hpp"

namespace rvs::config {

inline constexpr std::string_view kBackendUrlEnv = "REVIEW_VS_BACKEND_URL";

struct PipelineConfig {
  std::string backend = "stub";
  std::string backend_url;
  std::size_t max_in_flight = 8;

  // Unset paths select the bundled files.
  std::optional<std::filesystem::path> labels;
  std::optional<std::filesystem::path> sentiment_labels;
  std::optional<std::filesystem::path> alignment;
  std::filesystem::path out_dir = "out";
  /// An [alignment] table in the config file; wins over `alignment`.
  std::optional<valuestream::TopicCategoryAlignment> inline_alignment;

  std::string premise_template{classifier::kSentimentPremiseTemplate};
  std::string premise_fallback_template{classifier::kPlainPremiseTemplate};
  std::string masked_template{classifier::kClozeTemplate};

  ClassificationMode mode = ClassificationMode::Entailment;
  bool normalize = true;
  prompt::HypothesisMode hypothesis = prompt::HypothesisMode::NameAndDefinition;
  prompt::Aggregation aggregation = prompt::Aggregation::Mean;

  keyphrase::Config keyphrase;
  double release_threshold = 0.8;
  double feature_min_score = 0.5;

  std::size_t jobs = 1;
};

/// Overlays the keys present in `toml_text` onto `config`. Relative paths are
/// resolved against `base_dir`. Throws ValidationError for unknown keys,
/// wrong types or bad enum values.
void apply_toml(PipelineConfig& config, std::string_view toml_text,
                const std::filesystem::path& base_dir);

/// Reads `path` (IoError if missing) and applies it over the defaults.
PipelineConfig load(const std::filesystem::path& path);

/// Applies REVIEW_VS_BACKEND_URL when set and non-empty.
void apply_environment(PipelineConfig& config);

/// Range checks, template syntax and existence of referenced files.
/// Throws ValidationError (IoError for missing files).
void validate(const PipelineConfig& config);


std::vector<TopicLabel> topic_labels(const PipelineConfig& config);
std::vector<TopicLabel> sentiment_labels(const PipelineConfig& config);
valuestream::TopicCategoryAlignment alignment(const PipelineConfig& config);
classifier::CorpusOptions corpus_options(const PipelineConfig& config);

/// The stub receives the label words of `labels` as its mask-fill vocabulary.
backend::BackendConfig backend_config(const PipelineConfig& config,
                                      const std::vector<TopicLabel>& labels);

}  // namespace rvs::config
