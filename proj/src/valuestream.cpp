#include "rvs/valuestream.hpp"

#include <charconv>
#include <set>
#include <system_error>

#include "rvs/bundled_data.hpp"
#include "rvs/csv.hpp"
#include "rvs/error.hpp"
#include "rvs/ingest.hpp"
#include "rvs/text.hpp"
#include "rvs/toml_lite.hpp"

namespace fs = std::filesystem;

namespace rvs::valuestream {

std::string_view to_string(Axis axis) {
  switch (axis) {
    case Axis::Sentiment: return "sentiment";
    case Axis::Topic: return "topic";
    case Axis::TopicBySentiment: return "topic_by_sentiment";
    case Axis::Feature: return "feature";
  }
  return "sentiment";
}

double percentage(std::size_t numerator, std::size_t denominator) {
  if (denominator == 0) throw ValidationError("percentage with a zero denominator");
  if (numerator > denominator) throw ValidationError("percentage numerator exceeds denominator");
  return 100.0 * static_cast<double>(numerator) / static_cast<double>(denominator);
}

std::string format_percentage(double pct) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, pct, std::chars_format::fixed, 8);
  if (ec != std::errc{}) throw ValidationError("cannot format percentage");
  std::string s(buf, end);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

namespace {

double share(std::size_t n, std::size_t total) { return total == 0 ? 0.0 : percentage(n, total); }

const AnalysisResult& annotations_of(const Review& r, Axis axis) {
  const bool need_sentiment = axis == Axis::Sentiment || axis == Axis::TopicBySentiment;
  const bool need_topic = axis == Axis::Topic || axis == Axis::TopicBySentiment;
  if (!r.annotations || (need_sentiment && !r.annotations->sentiment) ||
      (need_topic && !r.annotations->topic)) {
    throw ValidationError("review '" + r.id + "' has no " + std::string(to_string(axis)) +
                          " annotation");
  }
  return *r.annotations;
}

DistributionReport one_app(const std::string& app, const std::vector<const Review*>& reviews,
                           Axis axis) {
  DistributionReport report;
  report.axis = axis;
  report.app = app;
  report.total = reviews.size();

  if (axis == Axis::Sentiment) {
    std::map<SentimentClass, std::size_t> counts;
    for (const Review* r : reviews) ++counts[*r->annotations->sentiment];
    for (SentimentClass s : kAllSentiments) {
      const std::size_t n = counts[s];
      report.cells.push_back({std::string(to_string(s)), {}, n, share(n, report.total)});
    }
  } else if (axis == Axis::Topic) {
    std::map<std::string, std::size_t> counts;
    for (const Review* r : reviews) ++counts[*r->annotations->topic];
    for (const auto& [topic, n] : counts) {
      report.cells.push_back({topic, {}, n, share(n, report.total)});
    }
  } else {
    std::map<std::string, std::map<SentimentClass, std::size_t>> counts;
    for (const Review* r : reviews) ++counts[*r->annotations->topic][*r->annotations->sentiment];
    for (auto& [topic, row] : counts) {
      std::size_t row_total = 0;
      for (const auto& [s, n] : row) row_total += n;
      for (SentimentClass s : kAllSentiments) {
        const std::size_t n = row[s];
        report.cells.push_back({topic, std::string(to_string(s)), n, share(n, row_total)});
      }
    }
  }
  return report;
}

}  // namespace

std::vector<DistributionReport> distribution(std::span<const Review> reviews, Axis axis) {
  if (axis == Axis::Feature) {
    throw ValidationError("feature distributions come from map_features");
  }
  std::map<std::string, std::vector<const Review*>> by_app;
  for (const Review& r : reviews) {
    annotations_of(r, axis);
    by_app[r.app].push_back(&r);
  }
  std::vector<DistributionReport> out;
  for (const auto& [app, list] : by_app) out.push_back(one_app(app, list, axis));
  return out;
}

FeatureIndex build_feature_index(std::span<const FeatureDoc> docs,
                                 const backend::Backend& backend) {
  if (docs.empty()) throw ValidationError("no feature documents");
  FeatureIndex out;
  out.app = docs.front().source_app;
  std::vector<index::DocInput> inputs;
  for (const auto& d : docs) {
    if (d.source_app != out.app) {
      throw ValidationError("feature '" + d.feature_name + "' belongs to app '" + d.source_app +
                            "', expected '" + out.app + "'");
    }
    std::string text = d.title;
    if (!d.body.empty()) text += "\n" + d.body;
    inputs.push_back({d.feature_name, std::move(text), index::PayloadKind::Feature});
  }
  out.index = index::SemanticIndex::build(inputs, backend);
  return out;
}

FeatureMapping map_features(std::span<const Review> reviews, const FeatureIndex& features,
                            const backend::Backend& backend, double min_score) {
  if (features.index.empty()) throw ValidationError("feature index is empty");
  FeatureMapping out;
  out.report.axis = Axis::Feature;
  out.report.app = features.app;
  out.report.total = reviews.size();

  std::map<std::string, std::size_t, std::less<>> counts;
  for (const Review& r : reviews) {
    if (r.app != features.app) {
      throw ValidationError("review '" + r.id + "' belongs to app '" + r.app +
                            "' but the feature index is for '" + features.app + "'");
    }
    const auto hit = features.index.query(r.text, 1, backend).front();
    FeatureAssignment a{r.id, hit.score >= min_score ? hit.doc_id : std::string(kUnmapped),
                        hit.score};
    ++counts[a.feature];
    out.assignments.push_back(std::move(a));
  }
  auto add = [&](const std::string& key) {
    const std::size_t n = counts[key];
    out.report.cells.push_back({key, {}, n, share(n, out.report.total)});
  };
  for (std::size_t i = 0; i < features.index.size(); ++i) add(features.index.doc_id(i));
  add(std::string(kUnmapped));
  return out;
}

std::optional<ReleaseCategory> TopicCategoryAlignment::category_of(std::string_view topic) const {
  auto it = mapping.find(topic);
  if (it == mapping.end()) return std::nullopt;
  return it->second;
}

TopicCategoryAlignment parse_alignment(std::string_view toml_text) {
  const toml::Document doc = toml::parse(toml_text);
  const toml::Table* table = doc.table("alignment");
  if (table == nullptr) throw ValidationError("missing [alignment] table");
  TopicCategoryAlignment out;
  for (const auto& [topic, value] : table->entries()) {
    const auto name = table->get_string(topic);
    if (!name) throw ValidationError("alignment for '" + topic + "' must be a string", value.line);
    const auto category = parse_release_category(*name);
    if (!category) {
      throw ValidationError("unknown release category '" + *name + "'", value.line, topic);
    }
    out.mapping.emplace(topic, *category);
  }
  return out;
}

TopicCategoryAlignment load_alignment(const fs::path& path) {
  return parse_alignment(ingest::read_file(path));
}

TopicCategoryAlignment default_alignment() { return parse_alignment(bundled::alignment_toml()); }

ReleaseValidationReport validate_scores(const std::vector<std::vector<double>>& scores,
                                        std::span<const ReleaseLogEntry> entries,
                                        std::span<const std::string> review_topics,
                                        double threshold,
                                        const TopicCategoryAlignment& alignment) {
  if (entries.empty()) throw ValidationError("release log has no entries");
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ValidationError("release threshold must be in (0, 1]");
  }
  if (scores.size() != entries.size()) throw ValidationError("score matrix has the wrong shape");

  ReleaseValidationReport report;
  report.threshold = threshold;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    if (scores[e].size() != review_topics.size()) {
      throw ValidationError("score matrix has the wrong shape");
    }
    CategoryCounts& c = report.categories[static_cast<std::size_t>(entries[e].category)];
    ++c.entries_total;
    bool any = false;
    bool correct = false;
    for (std::size_t r = 0; r < review_topics.size(); ++r) {
      if (scores[e][r] < threshold) continue;
      any = true;
      if (alignment.category_of(review_topics[r]) == entries[e].category) correct = true;
    }
    c.entries_matched_any += any ? 1 : 0;
    c.entries_matched_correct += correct ? 1 : 0;
  }
  for (auto& c : report.categories) {
    c.pct_any = share(c.entries_matched_any, c.entries_total);
    c.pct_correct = share(c.entries_matched_correct, c.entries_total);
  }
  return report;
}

ReleaseValidationReport validate_release_log(std::span<const Review> reviews,
                                             std::span<const ReleaseLogEntry> entries,
                                             const backend::Backend& backend, double threshold,
                                             const TopicCategoryAlignment& alignment) {
  if (entries.empty()) throw ValidationError("release log has no entries");
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ValidationError("release threshold must be in (0, 1]");
  }
  std::vector<std::string> topics;
  for (const Review& r : reviews) topics.push_back(*annotations_of(r, Axis::Topic).topic);

  std::vector<index::DocInput> docs;
  for (const auto& e : entries) docs.push_back({e.id, e.text, index::PayloadKind::ReleaseEntry});
  const auto idx = index::SemanticIndex::build(docs, backend);

  std::vector<std::vector<double>> scores(entries.size(), std::vector<double>(reviews.size()));
  for (std::size_t r = 0; r < reviews.size(); ++r) {
    const auto column = idx.scores(backend.embed(reviews[r].text).view());
    for (std::size_t e = 0; e < entries.size(); ++e) scores[e][r] = column[e];
  }
  return validate_scores(scores, entries, topics, threshold, alignment);
}

std::string report_csv(const DistributionReport& report) {
  std::string out = "app,row,column,count,percentage\n";
  for (const auto& c : report.cells) {
    out += csv::escape(report.app) + ',' + csv::escape(c.row) + ',' + csv::escape(c.column) + ',' +
           std::to_string(c.count) + ',' + format_percentage(c.percentage) + '\n';
  }
  return out;
}

namespace {

// Rounded through the 8-decimal rendering so JSON and CSV agree.
double rendered(double pct) {
  const std::string s = format_percentage(pct);
  double v = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

}  // namespace

nlohmann::json report_json(const DistributionReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    nlohmann::json cell = {{"row", c.row}, {"count", c.count}, {"percentage", rendered(c.percentage)}};
    if (!c.column.empty()) cell["column"] = c.column;
    cells.push_back(std::move(cell));
  }
  return {{"axis", to_string(report.axis)},
          {"app", report.app},
          {"total", report.total},
          {"cells", std::move(cells)}};
}

nlohmann::json release_json(const ReleaseValidationReport& report) {
  nlohmann::json categories = nlohmann::json::object();
  for (ReleaseCategory c : kAllReleaseCategories) {
    const CategoryCounts& k = report.at(c);
    categories[std::string(to_string(c))] = {
        {"entries_total", k.entries_total},
        {"entries_matched_any", k.entries_matched_any},
        {"entries_matched_correct", k.entries_matched_correct},
        {"pct_any", rendered(k.pct_any)},
        {"pct_correct", rendered(k.pct_correct)},
    };
  }
  return {{"threshold", report.threshold}, {"categories", std::move(categories)}};
}

std::string report_file_name(Axis axis, std::string_view app) {
  std::string safe;
  for (char c : app) {
    const auto u = static_cast<unsigned char>(c);
    const bool ok = text::is_ascii_alnum(u) || c == '.' || c == '_' || c == '-';
    safe.push_back(ok ? c : '_');
  }
  if (safe.empty()) safe = "_";
  return "report_" + std::string(to_string(axis)) + "_" + safe + ".csv";
}

std::vector<fs::path> write_reports(std::span<const DistributionReport> reports,
                                    const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());
  std::vector<fs::path> written;
  for (const auto& r : reports) {
    const fs::path p = out_dir / report_file_name(r.axis, r.app);
    ingest::write_file(p, report_csv(r));
    written.push_back(p);
  }
  return written;
}

}  // namespace rvs::valuestream
