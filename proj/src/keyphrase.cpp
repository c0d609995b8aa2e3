#include "rvs/keyphrase.hpp"

#include <algorithm>

#include "rvs/error.hpp"
#include "rvs/parallel.hpp"
#include "rvs/semantic_index.hpp"
#include "rvs/yake.hpp"

namespace rvs::keyphrase {

void validate(const Config& config) {
  if (config.max_n == 0) throw ValidationError("keyphrase.max_n must be at least 1");
  if (config.top_m == 0) throw ValidationError("keyphrase.top_m must be at least 1");
  if (config.top_k == 0) throw ValidationError("keyphrase.top_k must be at least 1");
  if (!(config.redundancy_threshold > 0.0 && config.redundancy_threshold <= 1.0)) {
    throw ValidationError("keyphrase.redundancy_threshold must be in (0, 1]");
  }
}

std::vector<KeyPhrase> extract_candidates(std::string_view text, std::size_t max_n,
                                          std::size_t top_m,
                                          const text::StopwordSet& stopwords) {
  if (max_n == 0) throw ValidationError("max_n must be at least 1");
  if (top_m == 0) throw ValidationError("top_m must be at least 1");
  std::vector<KeyPhrase> out;
  for (const auto& c : yake::score_candidates(text, max_n, stopwords)) {
    if (out.size() == top_m) break;
    out.push_back({c.surface, c.score, std::nullopt, {}});
  }
  return out;
}

std::vector<KeyPhrase> rank_by_relevance(std::span<const KeyPhrase> candidates,
                                         std::string_view review_text,
                                         const backend::Backend& backend, std::size_t top_k) {
  if (top_k == 0) throw ValidationError("top_k must be at least 1");
  if (candidates.empty()) return {};
  const backend::EmbeddingVector review = backend.embed(review_text);
  std::vector<KeyPhrase> ranked(candidates.begin(), candidates.end());
  for (auto& kp : ranked) kp.relevance = index::cosine(backend.embed(kp.text), review);
  std::sort(ranked.begin(), ranked.end(), [](const KeyPhrase& a, const KeyPhrase& b) {
    const auto ka = index::rank_key(*a.relevance);
    const auto kb = index::rank_key(*b.relevance);
    if (ka != kb) return ka > kb;
    if (a.yake_score != b.yake_score) return a.yake_score < b.yake_score;
    return a.text < b.text;
  });
  if (ranked.size() > top_k) ranked.resize(top_k);
  return ranked;
}

std::vector<KeyPhrase> diversify(std::span<const KeyPhrase> ranked,
                                 const backend::Backend& backend, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ValidationError("redundancy threshold must be in (0, 1]");
  }
  std::vector<KeyPhrase> kept;
  std::vector<backend::EmbeddingVector> kept_vectors;
  for (const auto& kp : ranked) {
    backend::EmbeddingVector v = backend.embed(kp.text);
    const bool redundant = std::any_of(
        kept_vectors.begin(), kept_vectors.end(),
        [&](const backend::EmbeddingVector& k) { return index::cosine(v, k) >= threshold; });
    if (!redundant) {
      kept.push_back(kp);
      kept_vectors.push_back(std::move(v));
    }
  }
  return kept;
}

std::vector<KeyPhrase> summarize_review(const Review& review, const Config& config,
                                        const backend::Backend& backend) {
  validate(config);
  const auto candidates =
      extract_candidates(review.text, config.max_n, config.top_m, config.stopwords);
  const auto ranked = rank_by_relevance(candidates, review.text, backend, config.top_k);
  auto out = diversify(ranked, backend, config.redundancy_threshold);
  for (auto& kp : out) kp.source_review_id = review.id;
  return out;
}

void summarize_corpus(std::span<Review> reviews, const Config& config,
                      const backend::Backend& backend, std::size_t workers) {
  validate(config);
  parallel_for(reviews.size(), workers, [&](std::size_t i) {
    Review& r = reviews[i];
    auto phrases = summarize_review(r, config, backend);
    if (!r.annotations) r.annotations.emplace();
    r.annotations->keyphrases = std::move(phrases);
  });
}

}  // namespace rvs::keyphrase
