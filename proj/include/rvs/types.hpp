#pragma once

// Domain records shared across the pipeline stages.

#include <array>
#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace rvs {

using Date = std::chrono::year_month_day;

/// Accepts YYYY-MM-DD or an ISO-8601 date-time with optional fraction and
/// offset (Z, +HH:MM, +HHMM); date-times are converted to their UTC date.
/// Throws ValidationError.
Date parse_iso_date(std::string_view s);
std::string format_date(const Date& d);

enum class SentimentClass { VeryNegative, Negative, Neutral, Positive, VeryPositive };

inline constexpr std::array<SentimentClass, 5> kAllSentiments = {
    SentimentClass::VeryNegative, SentimentClass::Negative, SentimentClass::Neutral,
    SentimentClass::Positive, SentimentClass::VeryPositive};

/// "Very negative", "Negative", "Neutral", "Positive", "Very positive".
std::string_view to_string(SentimentClass s);
std::optional<SentimentClass> parse_sentiment(std::string_view name);

enum class ReleaseCategory { Enhancement, NewFeatures, ResolvedIssues };

inline constexpr std::array<ReleaseCategory, 3> kAllReleaseCategories = {
    ReleaseCategory::Enhancement, ReleaseCategory::NewFeatures, ReleaseCategory::ResolvedIssues};

/// Exactly "Enhancement", "New Features", "Resolved Issues".
std::string_view to_string(ReleaseCategory c);
std::optional<ReleaseCategory> parse_release_category(std::string_view name);

enum class ClassificationMode { Entailment, MaskedVerbalizer };

std::string_view to_string(ClassificationMode m);
std::optional<ClassificationMode> parse_classification_mode(std::string_view name);

struct KeyPhrase {
  std::string text;
  double yake_score = 0.0;          // lower is more important
  std::optional<double> relevance;  // set by the similarity stage
  std::string source_review_id;

  bool operator==(const KeyPhrase&) const = default;
};

struct AnalysisResult {
  std::optional<SentimentClass> sentiment;
  std::optional<std::string> topic;
  std::map<std::string, double> topic_scores;
  std::optional<ClassificationMode> topic_mode;
  bool topic_scores_normalized = false;
  std::optional<std::vector<KeyPhrase>> keyphrases;

  bool operator==(const AnalysisResult&) const = default;
};

struct Review {
  std::string id;
  std::string app;
  std::string text;
  Date timestamp;
  std::optional<int> rating;
  std::optional<AnalysisResult> annotations;
  /// Unknown input keys, written back unchanged on save.
  nlohmann::json extra = nlohmann::json::object();

  bool operator==(const Review&) const = default;
};

struct TopicLabel {
  std::string name;
  std::string definition;
  std::vector<std::string> label_words;

  bool operator==(const TopicLabel&) const = default;
};

struct FeatureDoc {
  std::string feature_name;
  std::string title;
  std::string body;
  std::string source_app;
};

struct ReleaseLogEntry {
  std::string id;
  ReleaseCategory category = ReleaseCategory::Enhancement;
  std::string text;
  Date release_date;
};

}  // namespace rvs
