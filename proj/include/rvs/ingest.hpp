#pragma once

// Reading and writing of reviews, label sets, feature documentation and
// release logs.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rvs/types.hpp"

namespace rvs::ingest {

enum class ReviewFormat { Jsonl, Csv };

/// Picks the format from the extension: ".csv" is CSV, anything else JSONL.
ReviewFormat format_for_path(const std::filesystem::path& path);

/// File order is preserved. Throws IoError when the file cannot be read and
/// ValidationError (with line and field) for bad records or duplicate ids.
std::vector<Review> load_reviews(const std::filesystem::path& path, ReviewFormat format);
std::vector<Review> parse_reviews_jsonl(std::string_view text);
std::vector<Review> parse_reviews_csv(std::string_view text);

/// Label words are lowercased and deduplicated keeping first occurrence.
std::vector<TopicLabel> load_labels(const std::filesystem::path& path);
std::vector<TopicLabel> parse_labels(std::string_view text);

/// Bundled label sets: the nine topic classes and the five sentiment classes.
std::vector<TopicLabel> default_labels();
std::vector<TopicLabel> default_sentiment_labels();

/// One document per regular file, ordered by file name. The feature name is
/// the file name without a trailing ".txt"; the first line is the title and
/// the remainder the body.
std::vector<FeatureDoc> load_features(const std::filesystem::path& dir, const std::string& app);

/// CSV with header columns category, text, date (any order; an optional id
/// column is honoured, otherwise ids are "row-<n>").
std::vector<ReleaseLogEntry> load_release_log(const std::filesystem::path& path);
std::vector<ReleaseLogEntry> parse_release_log(std::string_view text);

nlohmann::json review_to_json(const Review& review);
/// `line` only decorates error messages.
Review review_from_json(const nlohmann::json& j, std::size_t line = 0);

/// One JSON object per line, trailing newline after each.
std::string serialize_reviews(std::span<const Review> reviews);
void save_results(std::span<const Review> reviews, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace rvs::ingest
