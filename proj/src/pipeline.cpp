#include "rvs/pipeline.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <ostream>
#include <set>
#include <system_error>

#include "rvs/error.hpp"
#include "rvs/ingest.hpp"
#include "rvs/remote_backend.hpp"

namespace fs = std::filesystem;

namespace rvs::pipeline {

namespace {

int guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const BackendError& e) {
    err << "error: backend: " << e.what() << '\n';
    return kExitBackend;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

std::unique_ptr<backend::Backend> open_backend(const config::PipelineConfig& config,
                                               const std::vector<TopicLabel>& labels) {
  auto b = backend::make_backend(config::backend_config(config, labels));
  // Fail fast on an unreachable service instead of once per request.
  if (const auto* remote = dynamic_cast<const backend::RemoteBackend*>(b.get())) {
    remote->health();
  }
  return b;
}

std::vector<Review> load(const fs::path& path) {
  return ingest::load_reviews(path, ingest::format_for_path(path));
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  ingest::write_file(path, j.dump(2) + "\n");
}

// Reports cover the reviews carrying the annotation each axis needs, so a
// few failed reviews do not block the rest.
std::vector<valuestream::DistributionReport> all_distributions(std::span<const Review> reviews) {
  using valuestream::Axis;
  std::vector<Review> with_sentiment;
  std::vector<Review> with_topic;
  std::vector<Review> with_both;
  for (const Review& r : reviews) {
    const bool s = r.annotations && r.annotations->sentiment;
    const bool t = r.annotations && r.annotations->topic;
    if (s) with_sentiment.push_back(r);
    if (t) with_topic.push_back(r);
    if (s && t) with_both.push_back(r);
  }
  std::vector<valuestream::DistributionReport> out;
  for (auto& r : valuestream::distribution(with_sentiment, Axis::Sentiment)) out.push_back(std::move(r));
  for (auto& r : valuestream::distribution(with_topic, Axis::Topic)) out.push_back(std::move(r));
  for (auto& r : valuestream::distribution(with_both, Axis::TopicBySentiment)) out.push_back(std::move(r));
  return out;
}

void emit_distributions(std::span<const Review> reviews, const fs::path& out_dir,
                        std::ostream& out) {
  const auto reports = all_distributions(reviews);
  const auto written = valuestream::write_reports(reports, out_dir);
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) j.push_back(valuestream::report_json(r));
  write_json(out_dir / kDistributionsFile, j);
  out << "wrote " << written.size() << " report(s) to " << out_dir.string() << '\n';
}

}  // namespace

int cmd_analyze(const config::PipelineConfig& config, const fs::path& reviews_path,
                std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config::validate(config);
    const std::vector<Review> reviews = load(reviews_path);
    const auto labels = config::topic_labels(config);
    const auto options = config::corpus_options(config);
    const auto backend = open_backend(config, labels);

    auto result = classifier::classify_corpus(reviews, labels, *backend, options);
    for (const auto& f : result.failures) {
      err << "warning: review '" << f.review_id << "' not classified: " << f.message << '\n';
    }
    keyphrase::summarize_corpus(result.reviews, config.keyphrase, *backend, config.jobs);

    ensure_dir(config.out_dir);
    ingest::save_results(result.reviews, config.out_dir / kAnnotatedFile);
    out << "annotated " << result.reviews.size() << " review(s)\n";
    emit_distributions(result.reviews, config.out_dir, out);
  });
}

int cmd_map_features(const config::PipelineConfig& config, const fs::path& reviews_path,
                     const fs::path& features_dir, std::optional<std::string> app,
                     std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config::validate(config);
    std::vector<Review> reviews = load(reviews_path);
    if (!app) {
      std::set<std::string> apps;
      for (const auto& r : reviews) apps.insert(r.app);
      if (apps.size() != 1) {
        throw ValidationError("reviews span " + std::to_string(apps.size()) +
                              " apps; choose one with --app");
      }
      app = *apps.begin();
    } else {
      std::erase_if(reviews, [&](const Review& r) { return r.app != *app; });
      if (reviews.empty()) throw ValidationError("no reviews for app '" + *app + "'");
    }

    const auto docs = ingest::load_features(features_dir, *app);
    const auto backend = open_backend(config, config::topic_labels(config));
    const auto index = valuestream::build_feature_index(docs, *backend);
    const auto mapping =
        valuestream::map_features(reviews, index, *backend, config.feature_min_score);

    ensure_dir(config.out_dir);
    const auto written = valuestream::write_reports(std::span(&mapping.report, 1), config.out_dir);
    nlohmann::json assignments = nlohmann::json::array();
    for (const auto& a : mapping.assignments) {
      assignments.push_back({{"review_id", a.review_id}, {"feature", a.feature}, {"score", a.score}});
    }
    write_json(config.out_dir / kFeatureMappingFile,
               {{"app", *app},
                {"min_score", config.feature_min_score},
                {"report", valuestream::report_json(mapping.report)},
                {"assignments", std::move(assignments)}});
    out << "mapped " << reviews.size() << " review(s) onto " << index.index.size()
        << " feature(s); wrote " << written.front().string() << '\n';
  });
}

int cmd_validate_release(const config::PipelineConfig& config, const fs::path& reviews_path,
                         const fs::path& release_log, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config::validate(config);
    std::vector<Review> reviews = load(reviews_path);
    const auto entries = ingest::load_release_log(release_log);
    const auto labels = config::topic_labels(config);
    const auto alignment = config::alignment(config);
    const auto backend = open_backend(config, labels);

    const bool annotated = std::all_of(reviews.begin(), reviews.end(), [](const Review& r) {
      return r.annotations && r.annotations->topic;
    });
    if (!annotated) {
      auto result = classifier::classify_corpus(reviews, labels, *backend,
                                                config::corpus_options(config));
      for (const auto& f : result.failures) {
        err << "warning: review '" << f.review_id << "' not classified and skipped: " << f.message
            << '\n';
      }
      std::erase_if(result.reviews, [](const Review& r) { return !r.annotations->topic; });
      reviews = std::move(result.reviews);
    }

    const auto report = valuestream::validate_release_log(reviews, entries, *backend,
                                                          config.release_threshold, alignment);
    ensure_dir(config.out_dir);
    write_json(config.out_dir / kReleaseFile, valuestream::release_json(report));
    for (ReleaseCategory c : kAllReleaseCategories) {
      const auto& k = report.at(c);
      out << to_string(c) << ": " << k.entries_matched_correct << '/' << k.entries_matched_any
          << '/' << k.entries_total << " (correct " << valuestream::format_percentage(k.pct_correct)
          << "%, any " << valuestream::format_percentage(k.pct_any) << "%)\n";
    }
  });
}

int cmd_report(const config::PipelineConfig& config, const fs::path& reviews_path,
               std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config::validate(config);
    const std::vector<Review> reviews = load(reviews_path);
    ensure_dir(config.out_dir);
    emit_distributions(reviews, config.out_dir, out);
  });
}

}  // namespace rvs::pipeline
