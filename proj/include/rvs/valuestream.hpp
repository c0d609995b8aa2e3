#pragma once

// Corpus-level reports: sentiment/topic distributions per app, review to
// feature mapping, and release-log coverage by category.

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rvs/backend.hpp"
#include "rvs/semantic_index.hpp"
#include "rvs/types.hpp"

namespace rvs::valuestream {

enum class Axis { Sentiment, Topic, TopicBySentiment, Feature };

/// "sentiment", "topic", "topic_by_sentiment", "feature".
std::string_view to_string(Axis axis);

/// Reserved feature key for reviews below the mapping threshold.
inline constexpr std::string_view kUnmapped = "unmapped";

/// One count in a report. For one-dimensional axes `column` is empty and the
/// percentage is relative to the app total. For TopicBySentiment `row` is
/// the topic, `column` the sentiment, and the percentage is relative to the
/// row total.
struct Cell {
  std::string row;
  std::string column;
  std::size_t count = 0;
  double percentage = 0.0;
};

struct DistributionReport {
  Axis axis = Axis::Sentiment;
  std::string app;
  std::size_t total = 0;
  std::vector<Cell> cells;
};

/// 100 * n / d at full precision. Throws ValidationError when d == 0 or
/// n > d.
double percentage(std::size_t numerator, std::size_t denominator);

/// Fixed 8 decimals with trailing zeros (and a bare point) removed, e.g.
/// 48.23529412, 40, 0.
std::string format_percentage(double pct);

/// One report per app, ordered by app name. Sentiment reports list all five
/// classes; topic reports list the observed topics in name order; the cross
/// tab lists all five sentiments for every observed topic. Throws
/// ValidationError naming the first review lacking the needed annotation.
/// The Feature axis is produced by map_features only.
std::vector<DistributionReport> distribution(std::span<const Review> reviews, Axis axis);

struct FeatureIndex {
  std::string app;
  index::SemanticIndex index;
};

struct FeatureAssignment {
  std::string review_id;
  std::string feature;  // kUnmapped below min_score
  double score = 0.0;
};

struct FeatureMapping {
  DistributionReport report;  // every feature plus kUnmapped, in that order
  std::vector<FeatureAssignment> assignments;
};

FeatureIndex build_feature_index(std::span<const FeatureDoc> docs,
                                 const backend::Backend& backend);

/// Assigns every review to its top-1 feature when the score reaches
/// `min_score`. Throws ValidationError when a review belongs to another app.
FeatureMapping map_features(std::span<const Review> reviews, const FeatureIndex& features,
                            const backend::Backend& backend, double min_score = 0.5);

/// Partial map from topic name to release category.
struct TopicCategoryAlignment {
  std::map<std::string, ReleaseCategory, std::less<>> mapping;

  std::optional<ReleaseCategory> category_of(std::string_view topic) const;
};

TopicCategoryAlignment parse_alignment(std::string_view toml_text);
TopicCategoryAlignment load_alignment(const std::filesystem::path& path);
TopicCategoryAlignment default_alignment();

struct CategoryCounts {
  std::size_t entries_total = 0;
  std::size_t entries_matched_any = 0;
  std::size_t entries_matched_correct = 0;
  double pct_any = 0.0;
  double pct_correct = 0.0;
};

struct ReleaseValidationReport {
  double threshold = 0.8;
  std::array<CategoryCounts, 3> categories{};  // indexed like kAllReleaseCategories

  const CategoryCounts& at(ReleaseCategory c) const {
    return categories[static_cast<std::size_t>(c)];
  }
};

/// An entry is matched when some review reaches `threshold` cosine with it,
/// and matched correctly when at least one such review has a topic aligned
/// with the entry's category. Categories without entries report 0%.
/// Throws ValidationError for an empty entry list, a threshold outside
/// (0, 1] or a review without a topic.
ReleaseValidationReport validate_release_log(std::span<const Review> reviews,
                                             std::span<const ReleaseLogEntry> entries,
                                             const backend::Backend& backend,
                                             double threshold = 0.8,
                                             const TopicCategoryAlignment& alignment =
                                                 default_alignment());

/// The same computation from precomputed cosine scores: scores[e][r] is the
/// similarity between entry e and review r.
ReleaseValidationReport validate_scores(const std::vector<std::vector<double>>& scores,
                                        std::span<const ReleaseLogEntry> entries,
                                        std::span<const std::string> review_topics,
                                        double threshold,
                                        const TopicCategoryAlignment& alignment);

/// CSV with header "app,row,column,count,percentage", one line per cell.
std::string report_csv(const DistributionReport& report);
nlohmann::json report_json(const DistributionReport& report);
nlohmann::json release_json(const ReleaseValidationReport& report);

/// "report_<axis>_<app>.csv", with characters outside [A-Za-z0-9._-] in the
/// app name replaced by '_'.
std::string report_file_name(Axis axis, std::string_view app);

/// Writes one CSV per report into `out_dir` (created if needed) and returns
/// the paths written.
std::vector<std::filesystem::path> write_reports(std::span<const DistributionReport> reports,
                                                 const std::filesystem::path& out_dir);

}  // namespace rvs::valuestream
