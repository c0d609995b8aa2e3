#pragma once

// Zero-shot sentiment and topic classification, either by entailment
// (premise = filled prompt, one hypothesis per label) or by masked-token
// prediction projected through a verbalizer.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rvs/backend.hpp"
#include "rvs/prompt.hpp"
#include "rvs/types.hpp"

namespace rvs::classifier {

inline constexpr std::string_view kSentimentPremiseTemplate =
    "[X1]. Sentiment of the review is [X2]. The review is about [Z].";
inline constexpr std::string_view kPlainPremiseTemplate = "[X]. The review is about [Z]";
inline constexpr std::string_view kClozeTemplate = "[X] : The review specifies [Z] type of category.";

struct ClassificationResult {
  std::map<std::string, double> scores;
  std::string top_label;
  ClassificationMode mode = ClassificationMode::Entailment;
  bool normalized = false;
};

/// Argmax; ties go to the lexicographically smallest name. Empty input
/// yields an empty string.
std::string top_label_of(const std::map<std::string, double>& scores);

std::map<std::string, double> softmax(const std::map<std::string, double>& scores);

struct EntailmentOptions {
  /// Two input slots: review text, then sentiment.
  prompt::PromptTemplate sentiment_template =
      prompt::PromptTemplate::parse(kSentimentPremiseTemplate);
  /// One input slot; used when no sentiment is available.
  prompt::PromptTemplate plain_template = prompt::PromptTemplate::parse(kPlainPremiseTemplate);
  prompt::HypothesisMode hypothesis_mode = prompt::HypothesisMode::NameAndDefinition;
  bool normalize = true;
};

/// Review text with surrounding whitespace and trailing sentence
/// terminators removed, ready to be bound to an input slot.
std::string review_sentence(std::string_view text);

/// The filled template up to the sentence holding the answer slot.
std::string entailment_premise(const Review& review, std::optional<SentimentClass> sentiment,
                               const EntailmentOptions& options = {});

/// Needs at least two uniquely named labels (ValidationError). A backend
/// failure is rethrown as BackendError naming the label.
ClassificationResult classify_entailment(const Review& review,
                                         std::optional<SentimentClass> sentiment,
                                         std::span<const TopicLabel> labels,
                                         const backend::Backend& backend,
                                         const EntailmentOptions& options = {});

/// `tmpl` must have exactly one input slot; its answer slot is rendered as
/// the mask token.
ClassificationResult classify_masked(const Review& review, const prompt::PromptTemplate& tmpl,
                                     const prompt::Verbalizer& verbalizer,
                                     const backend::Backend& backend);

/// Entailment over the five sentiment classes with no sentiment input.
/// `labels` must name exactly the five classes (see to_string).
ClassificationResult sentiment_scores(const Review& review, const backend::Backend& backend,
                                      std::span<const TopicLabel> labels,
                                      const EntailmentOptions& options = {});
SentimentClass analyze_sentiment(const Review& review, const backend::Backend& backend,
                                 std::span<const TopicLabel> labels,
                                 const EntailmentOptions& options = {});
SentimentClass analyze_sentiment(const Review& review, const backend::Backend& backend);

struct CorpusOptions {
  ClassificationMode mode = ClassificationMode::Entailment;
  EntailmentOptions entailment;
  prompt::PromptTemplate masked_template = prompt::PromptTemplate::parse(kClozeTemplate);
  prompt::Aggregation aggregation = prompt::Aggregation::Mean;
  /// Empty means the bundled sentiment labels.
  std::vector<TopicLabel> sentiment_labels;
  std::size_t workers = 1;
};

struct ReviewFailure {
  std::string review_id;
  std::string message;
};

struct CorpusResult {
  std::vector<Review> reviews;  // input order; failed reviews keep no topic
  std::vector<ReviewFailure> failures;
};

/// Annotates every review with its sentiment, then its topic (the sentiment
/// feeds the premise; when sentiment fails the plain template is used).
/// Throws BackendError if more than 10% of the reviews fail.
CorpusResult classify_corpus(std::span<const Review> reviews, std::span<const TopicLabel> labels,
                             const backend::Backend& backend, const CorpusOptions& options = {});

}  // namespace rvs::classifier
