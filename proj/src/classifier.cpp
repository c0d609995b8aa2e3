#include "rvs/classifier.hpp"

#include <cmath>
#include <set>

#include "rvs/error.hpp"
#include "rvs/ingest.hpp"
#include "rvs/parallel.hpp"
#include "rvs/text.hpp"

namespace rvs::classifier {

std::string top_label_of(const std::map<std::string, double>& scores) {
  std::string best;
  double best_score = 0.0;
  for (const auto& [name, score] : scores) {
    // Ascending iteration plus strict comparison keeps the smallest name on ties.
    if (best.empty() || score > best_score) {
      best = name;
      best_score = score;
    }
  }
  return best;
}

std::map<std::string, double> softmax(const std::map<std::string, double>& scores) {
  if (scores.empty()) return {};
  double max = -INFINITY;
  for (const auto& [name, s] : scores) max = std::max(max, s);
  std::map<std::string, double> out;
  double total = 0.0;
  for (const auto& [name, s] : scores) {
    const double e = std::exp(s - max);
    out[name] = e;
    total += e;
  }
  for (auto& [name, e] : out) e /= total;
  return out;
}

std::string review_sentence(std::string_view s) {
  std::string_view t = text::trim(s);
  while (!t.empty() && (t.back() == '.' || t.back() == '!' || t.back() == '?')) {
    t.remove_suffix(1);
    t = text::trim(t);
  }
  return std::string(t);
}

namespace {

void require_input_slots(const prompt::PromptTemplate& t, std::size_t n, const char* what) {
  if (t.input_slots().size() != n) {
    throw ValidationError(std::string(what) + " template '" + t.raw_text() + "' must have " +
                          std::to_string(n) + " input slot(s)");
  }
}

void require_labels(std::span<const TopicLabel> labels) {
  if (labels.size() < 2) throw ValidationError("classification needs at least two labels");
  std::set<std::string_view> names;
  for (const auto& l : labels) {
    if (!names.insert(l.name).second) {
      throw ValidationError("duplicate label name '" + l.name + "'");
    }
  }
}

}  // namespace

std::string entailment_premise(const Review& review, std::optional<SentimentClass> sentiment,
                               const EntailmentOptions& options) {
  const std::string sentence = review_sentence(review.text);
  prompt::Bindings bindings;
  const prompt::PromptTemplate* tmpl = nullptr;
  if (sentiment) {
    tmpl = &options.sentiment_template;
    require_input_slots(*tmpl, 2, "sentiment premise");
    bindings[tmpl->input_slots()[0]] = sentence;
    bindings[tmpl->input_slots()[1]] = std::string(to_string(*sentiment));
  } else {
    tmpl = &options.plain_template;
    require_input_slots(*tmpl, 1, "plain premise");
    bindings[tmpl->input_slots()[0]] = sentence;
  }
  return prompt::premise_text(prompt::fill_template(*tmpl, bindings));
}

ClassificationResult classify_entailment(const Review& review,
                                         std::optional<SentimentClass> sentiment,
                                         std::span<const TopicLabel> labels,
                                         const backend::Backend& backend,
                                         const EntailmentOptions& options) {
  require_labels(labels);
  const std::string premise = entailment_premise(review, sentiment, options);

  ClassificationResult result;
  result.mode = ClassificationMode::Entailment;
  for (const auto& label : labels) {
    const std::string hypothesis = prompt::build_hypothesis(label, options.hypothesis_mode);
    try {
      result.scores[label.name] = backend.nli(premise, hypothesis).entailment;
    } catch (const RequestRejected& e) {
      throw RequestRejected("label '" + label.name + "': " + e.what(), e.status());
    } catch (const BackendError& e) {
      throw BackendError("label '" + label.name + "': " + e.what());
    }
  }
  if (options.normalize) {
    result.scores = softmax(result.scores);
    result.normalized = true;
  }
  result.top_label = top_label_of(result.scores);
  return result;
}

ClassificationResult classify_masked(const Review& review, const prompt::PromptTemplate& tmpl,
                                     const prompt::Verbalizer& verbalizer,
                                     const backend::Backend& backend) {
  require_input_slots(tmpl, 1, "masked");
  prompt::Bindings bindings{{tmpl.input_slots()[0], review_sentence(review.text)}};
  const auto filled = prompt::fill_answer(prompt::fill_template(tmpl, bindings),
                                          backend::kMaskToken);
  ClassificationResult result;
  result.mode = ClassificationMode::MaskedVerbalizer;
  result.scores = prompt::verbalize(backend.mask_fill(filled.text()), verbalizer);
  result.top_label = top_label_of(result.scores);
  return result;
}

ClassificationResult sentiment_scores(const Review& review, const backend::Backend& backend,
                                      std::span<const TopicLabel> labels,
                                      const EntailmentOptions& options) {
  if (labels.size() != kAllSentiments.size()) {
    throw ValidationError("sentiment label set must have exactly five labels");
  }
  for (const auto& l : labels) {
    if (!parse_sentiment(l.name)) {
      throw ValidationError("'" + l.name + "' is not a sentiment class name");
    }
  }
  return classify_entailment(review, std::nullopt, labels, backend, options);
}

SentimentClass analyze_sentiment(const Review& review, const backend::Backend& backend,
                                 std::span<const TopicLabel> labels,
                                 const EntailmentOptions& options) {
  return *parse_sentiment(sentiment_scores(review, backend, labels, options).top_label);
}

SentimentClass analyze_sentiment(const Review& review, const backend::Backend& backend) {
  static const std::vector<TopicLabel> labels = ingest::default_sentiment_labels();
  return analyze_sentiment(review, backend, labels);
}

CorpusResult classify_corpus(std::span<const Review> reviews, std::span<const TopicLabel> labels,
                             const backend::Backend& backend, const CorpusOptions& options) {
  CorpusResult out;
  out.reviews.assign(reviews.begin(), reviews.end());
  if (reviews.empty()) return out;

  require_labels(labels);
  const std::vector<TopicLabel> sentiment_labels =
      options.sentiment_labels.empty() ? ingest::default_sentiment_labels()
                                       : options.sentiment_labels;
  std::optional<prompt::Verbalizer> verbalizer;
  if (options.mode == ClassificationMode::MaskedVerbalizer) {
    verbalizer = prompt::Verbalizer::from_labels(labels, options.aggregation);
  }

  std::vector<std::optional<std::string>> errors(reviews.size());
  parallel_for(reviews.size(), options.workers, [&](std::size_t i) {
    Review& review = out.reviews[i];
    AnalysisResult ann = review.annotations.value_or(AnalysisResult{});
    ann.sentiment.reset();
    ann.topic.reset();
    ann.topic_scores.clear();
    ann.topic_mode.reset();
    ann.topic_scores_normalized = false;

    try {
      ann.sentiment = analyze_sentiment(review, backend, sentiment_labels, options.entailment);
    } catch (const Error&) {
      // Premise falls back to the plain template below.
    }
    try {
      const ClassificationResult r =
          options.mode == ClassificationMode::Entailment
              ? classify_entailment(review, ann.sentiment, labels, backend, options.entailment)
              : classify_masked(review, options.masked_template, *verbalizer, backend);
      ann.topic = r.top_label;
      ann.topic_scores = r.scores;
      ann.topic_mode = r.mode;
      ann.topic_scores_normalized = r.normalized;
    } catch (const Error& e) {
      errors[i] = e.what();
    }
    review.annotations = std::move(ann);
  });

  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i]) out.failures.push_back({reviews[i].id, *errors[i]});
  }
  // More than 10% failed: n_failed / n > 1 / 10.
  if (out.failures.size() * 10 > reviews.size()) {
    throw BackendError(std::to_string(out.failures.size()) + " of " +
                       std::to_string(reviews.size()) + " reviews failed to classify; first (" +
                       out.failures.front().review_id + "): " + out.failures.front().message);
  }
  return out;
}

}  // namespace rvs::classifier
