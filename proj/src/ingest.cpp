#include "rvs/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "rvs/bundled_data.hpp"
#include "rvs/csv.hpp"
#include "rvs/error.hpp"
#include "rvs/text.hpp"
#include "rvs/toml_lite.hpp"

namespace rvs::ingest {

namespace fs = std::filesystem;
using nlohmann::json;

ReviewFormat format_for_path(const fs::path& path) {
  return text::ascii_lower(path.extension().string()) == ".csv" ? ReviewFormat::Csv
                                                                 : ReviewFormat::Jsonl;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return ss.str();
}

void write_file(const fs::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

// --- reviews ---------------------------------------------------------------

namespace {

const std::set<std::string, std::less<>> kKnownReviewKeys = {
    "id", "app", "text", "timestamp", "rating", "annotations"};

std::string require_string(const json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError("missing field", line, key);
  if (!it->is_string()) throw ValidationError("expected a string", line, key);
  return it->get<std::string>();
}

std::optional<int> parse_rating(const json& j, std::size_t line) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_number_integer()) throw ValidationError("expected an integer 1..5", line, "rating");
  const auto r = j.get<long long>();
  if (r < 1 || r > 5) throw ValidationError("rating out of range 1..5", line, "rating");
  return static_cast<int>(r);
}

json keyphrase_to_json(const KeyPhrase& k) {
  json j = {{"text", k.text}, {"yake_score", k.yake_score}, {"source_review_id", k.source_review_id}};
  if (k.relevance) j["relevance"] = *k.relevance;
  return j;
}

KeyPhrase keyphrase_from_json(const json& j, std::size_t line) {
  if (!j.is_object()) throw ValidationError("expected an object", line, "annotations.keyphrases");
  KeyPhrase k;
  k.text = require_string(j, "text", line);
  auto score = j.find("yake_score");
  if (score == j.end() || !score->is_number()) {
    throw ValidationError("expected a number", line, "annotations.keyphrases.yake_score");
  }
  k.yake_score = score->get<double>();
  if (auto rel = j.find("relevance"); rel != j.end() && !rel->is_null()) {
    if (!rel->is_number()) {
      throw ValidationError("expected a number", line, "annotations.keyphrases.relevance");
    }
    k.relevance = rel->get<double>();
  }
  if (auto src = j.find("source_review_id"); src != j.end()) {
    if (!src->is_string()) {
      throw ValidationError("expected a string", line, "annotations.keyphrases.source_review_id");
    }
    k.source_review_id = src->get<std::string>();
  }
  return k;
}

json annotations_to_json(const AnalysisResult& a) {
  json j = json::object();
  if (a.sentiment) j["sentiment"] = std::string(to_string(*a.sentiment));
  if (a.topic) j["topic"] = *a.topic;
  if (!a.topic_scores.empty() || a.topic) j["topic_scores"] = a.topic_scores;
  if (a.topic_mode) j["topic_mode"] = std::string(to_string(*a.topic_mode));
  if (a.topic_mode || a.topic_scores_normalized) j["normalized"] = a.topic_scores_normalized;
  if (a.keyphrases) {
    json arr = json::array();
    for (const auto& k : *a.keyphrases) arr.push_back(keyphrase_to_json(k));
    j["keyphrases"] = std::move(arr);
  }
  return j;
}

AnalysisResult annotations_from_json(const json& j, std::size_t line) {
  if (!j.is_object()) throw ValidationError("expected an object", line, "annotations");
  AnalysisResult a;
  if (auto it = j.find("sentiment"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw ValidationError("expected a string", line, "annotations.sentiment");
    a.sentiment = parse_sentiment(it->get<std::string>());
    if (!a.sentiment) {
      throw ValidationError("unknown sentiment '" + it->get<std::string>() + "'", line,
                            "annotations.sentiment");
    }
  }
  if (auto it = j.find("topic"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw ValidationError("expected a string", line, "annotations.topic");
    a.topic = it->get<std::string>();
  }
  if (auto it = j.find("topic_scores"); it != j.end()) {
    if (!it->is_object()) {
      throw ValidationError("expected an object", line, "annotations.topic_scores");
    }
    for (const auto& [name, v] : it->items()) {
      if (!v.is_number()) throw ValidationError("expected a number", line, "annotations.topic_scores");
      a.topic_scores[name] = v.get<double>();
    }
  }
  if (auto it = j.find("topic_mode"); it != j.end()) {
    a.topic_mode = it->is_string() ? parse_classification_mode(it->get<std::string>())
                                   : std::nullopt;
    if (!a.topic_mode) throw ValidationError("unknown mode", line, "annotations.topic_mode");
  }
  if (auto it = j.find("normalized"); it != j.end()) {
    if (!it->is_boolean()) throw ValidationError("expected a boolean", line, "annotations.normalized");
    a.topic_scores_normalized = it->get<bool>();
  }
  if (auto it = j.find("keyphrases"); it != j.end()) {
    if (!it->is_array()) throw ValidationError("expected an array", line, "annotations.keyphrases");
    std::vector<KeyPhrase> phrases;
    for (const auto& k : *it) phrases.push_back(keyphrase_from_json(k, line));
    a.keyphrases = std::move(phrases);
  }
  return a;
}

void check_unique_ids(const std::vector<Review>& reviews,
                      const std::vector<std::size_t>& lines) {
  std::set<std::string_view> seen;
  for (std::size_t i = 0; i < reviews.size(); ++i) {
    if (!seen.insert(reviews[i].id).second) {
      throw ValidationError("duplicate review id '" + reviews[i].id + "'", lines[i], "id");
    }
  }
}

void validate_text(const std::string& value, std::size_t line, const char* field) {
  if (text::trim(value).empty()) throw ValidationError("must not be empty", line, field);
}

}  // namespace

json review_to_json(const Review& r) {
  json j = json::object();
  j["id"] = r.id;
  j["app"] = r.app;
  j["text"] = r.text;
  j["timestamp"] = format_date(r.timestamp);
  if (r.rating) j["rating"] = *r.rating;
  if (r.annotations) j["annotations"] = annotations_to_json(*r.annotations);
  for (const auto& [k, v] : r.extra.items()) j[k] = v;
  return j;
}

Review review_from_json(const json& j, std::size_t line) {
  if (!j.is_object()) throw ValidationError("expected a JSON object", line);
  Review r;
  r.id = require_string(j, "id", line);
  validate_text(r.id, line, "id");
  r.app = require_string(j, "app", line);
  r.text = require_string(j, "text", line);
  validate_text(r.text, line, "text");
  const std::string ts = require_string(j, "timestamp", line);
  try {
    r.timestamp = parse_iso_date(ts);
  } catch (const ValidationError& e) {
    throw ValidationError(e.what(), line, "timestamp");
  }
  if (auto it = j.find("rating"); it != j.end()) r.rating = parse_rating(*it, line);
  if (auto it = j.find("annotations"); it != j.end() && !it->is_null()) {
    r.annotations = annotations_from_json(*it, line);
  }
  for (const auto& [k, v] : j.items()) {
    if (!kKnownReviewKeys.contains(k)) r.extra[k] = v;
  }
  return r;
}

std::vector<Review> parse_reviews_jsonl(std::string_view text) {
  std::vector<Review> reviews;
  std::vector<std::size_t> lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (text::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    reviews.push_back(review_from_json(j, line_no));
    lines.push_back(line_no);
  }
  check_unique_ids(reviews, lines);
  return reviews;
}

std::vector<Review> parse_reviews_csv(std::string_view text) {
  const auto records = csv::parse(text);
  if (records.empty()) return {};
  const auto& header = records.front().fields;
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (text::trim(header[i]) == name) return i;
    }
    return std::nullopt;
  };
  const auto c_id = column("id"), c_app = column("app"), c_text = column("text"),
             c_ts = column("timestamp"), c_rating = column("rating");
  for (auto [col, name] : {std::pair{c_id, "id"}, {c_app, "app"}, {c_text, "text"},
                           {c_ts, "timestamp"}}) {
    if (!col) throw ValidationError("missing column", records.front().line, name);
  }

  std::vector<Review> reviews;
  std::vector<std::size_t> lines;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != header.size()) {
      throw ValidationError("expected " + std::to_string(header.size()) + " fields, found " +
                                std::to_string(rec.fields.size()),
                            rec.line);
    }
    json j = json::object();
    for (std::size_t i = 0; i < header.size(); ++i) {
      const std::string key(text::trim(header[i]));
      if (c_rating && i == *c_rating) {
        const auto v = text::trim(rec.fields[i]);
        if (v.empty()) continue;
        int rating = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), rating);
        if (ec != std::errc() || ptr != v.data() + v.size()) {
          throw ValidationError("expected an integer 1..5", rec.line, "rating");
        }
        j["rating"] = rating;
      } else {
        j[key] = rec.fields[i];
      }
    }
    reviews.push_back(review_from_json(j, rec.line));
    lines.push_back(rec.line);
  }
  check_unique_ids(reviews, lines);
  return reviews;
}

std::vector<Review> load_reviews(const fs::path& path, ReviewFormat format) {
  const std::string text = read_file(path);
  return format == ReviewFormat::Jsonl ? parse_reviews_jsonl(text) : parse_reviews_csv(text);
}

std::string serialize_reviews(std::span<const Review> reviews) {
  std::string out;
  for (const auto& r : reviews) {
    out += review_to_json(r).dump();
    out.push_back('\n');
  }
  return out;
}

void save_results(std::span<const Review> reviews, const fs::path& path) {
  write_file(path, serialize_reviews(reviews));
}

// --- labels ----------------------------------------------------------------

std::vector<TopicLabel> parse_labels(std::string_view text) {
  const toml::Document doc = toml::parse(text);
  const auto& tables = doc.array_table("label");
  if (tables.empty()) throw ValidationError("label file defines no [[label]] entries");

  std::vector<TopicLabel> labels;
  std::set<std::string, std::less<>> names;
  for (const auto& t : tables) {
    TopicLabel label;
    const auto name = t.get_string("name");
    if (!name || text::trim(*name).empty()) {
      throw ValidationError("label without a name", t.line, "name");
    }
    label.name = std::string(text::trim(*name));
    if (!names.insert(label.name).second) {
      throw ValidationError("duplicate label name '" + label.name + "'", t.line, "name");
    }
    const auto def = t.get_string("definition");
    if (!def || text::trim(*def).empty()) {
      throw ValidationError("label '" + label.name + "' has no definition", t.line, "definition");
    }
    label.definition = std::string(text::trim(*def));
    const auto words = t.get_string_array("label_words");
    if (!words || words->empty()) {
      throw ValidationError("label '" + label.name + "' has no label words", t.line,
                            "label_words");
    }
    for (const auto& w : *words) {
      std::string word = text::ascii_lower(text::trim(w));
      if (word.empty()) {
        throw ValidationError("label '" + label.name + "' has an empty label word", t.line,
                              "label_words");
      }
      if (std::find(label.label_words.begin(), label.label_words.end(), word) ==
          label.label_words.end()) {
        label.label_words.push_back(std::move(word));
      }
    }
    labels.push_back(std::move(label));
  }
  return labels;
}

std::vector<TopicLabel> load_labels(const fs::path& path) { return parse_labels(read_file(path)); }

std::vector<TopicLabel> default_labels() { return parse_labels(bundled::labels_toml()); }

std::vector<TopicLabel> default_sentiment_labels() {
  return parse_labels(bundled::sentiment_labels_toml());
}

// --- feature docs ----------------------------------------------------------

std::vector<FeatureDoc> load_features(const fs::path& dir, const std::string& app) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError("feature directory '" + dir.string() + "' does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw ValidationError("feature directory '" + dir.string() + "' contains no documents");
  }

  std::vector<FeatureDoc> docs;
  std::set<std::string, std::less<>> names;
  for (const auto& file : files) {
    FeatureDoc doc;
    doc.source_app = app;
    doc.feature_name = file.filename().string();
    if (doc.feature_name.size() > 4 &&
        text::ascii_lower(doc.feature_name.substr(doc.feature_name.size() - 4)) == ".txt") {
      doc.feature_name.resize(doc.feature_name.size() - 4);
    }
    if (!names.insert(doc.feature_name).second) {
      throw ValidationError("duplicate feature name '" + doc.feature_name + "'");
    }
    const std::string contents = read_file(file);
    const auto nl = contents.find('\n');
    doc.title = std::string(text::trim(std::string_view(contents).substr(0, nl)));
    if (nl != std::string::npos) doc.body = std::string(text::trim(contents.substr(nl + 1)));
    if (doc.body.empty()) {
      throw ValidationError("feature '" + doc.feature_name + "' has an empty body", 0, "body");
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

// --- release log -----------------------------------------------------------

std::vector<ReleaseLogEntry> parse_release_log(std::string_view text) {
  const auto records = csv::parse(text);
  if (records.empty()) throw ValidationError("release log is empty; expected a header row");
  const auto& header = records.front().fields;
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (text::ascii_lower(text::trim(header[i])) == name) return i;
    }
    return std::nullopt;
  };
  const auto c_cat = column("category"), c_text = column("text"), c_date = column("date"),
             c_id = column("id");
  for (auto [col, name] : {std::pair{c_cat, "category"}, {c_text, "text"}, {c_date, "date"}}) {
    if (!col) throw ValidationError("missing column", records.front().line, name);
  }

  std::vector<ReleaseLogEntry> entries;
  std::set<std::string, std::less<>> ids;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != header.size()) {
      throw ValidationError("expected " + std::to_string(header.size()) + " fields, found " +
                                std::to_string(rec.fields.size()),
                            rec.line);
    }
    ReleaseLogEntry e;
    const std::string cat(text::trim(rec.fields[*c_cat]));
    const auto category = parse_release_category(cat);
    if (!category) {
      throw ValidationError("unknown category '" + cat + "'", rec.line, "category");
    }
    e.category = *category;
    e.text = std::string(text::trim(rec.fields[*c_text]));
    if (e.text.empty()) throw ValidationError("must not be empty", rec.line, "text");
    try {
      e.release_date = parse_iso_date(text::trim(rec.fields[*c_date]));
    } catch (const ValidationError& err) {
      throw ValidationError(err.what(), rec.line, "date");
    }
    e.id = c_id ? std::string(text::trim(rec.fields[*c_id])) : "row-" + std::to_string(r);
    if (!ids.insert(e.id).second) {
      throw ValidationError("duplicate entry id '" + e.id + "'", rec.line, "id");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<ReleaseLogEntry> load_release_log(const fs::path& path) {
  return parse_release_log(read_file(path));
}

}  // namespace rvs::ingest
