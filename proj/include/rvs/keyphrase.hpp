#pragma once

// Review summarization as three stages: YAKE candidates, relevance ranking
// against the review embedding, and greedy redundancy filtering.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "rvs/backend.hpp"
#include "rvs/text.hpp"
#include "rvs/types.hpp"

namespace rvs::keyphrase {

struct Config {
  std::size_t max_n = 3;
  std::size_t top_m = 20;
  std::size_t top_k = 5;
  double redundancy_threshold = 0.9;
  text::StopwordSet stopwords = text::default_stopwords();
};

/// Throws ValidationError unless every parameter is in range.
void validate(const Config& config);

/// The `top_m` lowest-scored n-grams (1..max_n words). Whitespace-only text
/// yields an empty list.
std::vector<KeyPhrase> extract_candidates(std::string_view text, std::size_t max_n,
                                          std::size_t top_m,
                                          const text::StopwordSet& stopwords =
                                              text::default_stopwords());

/// Sets relevance = cosine(embed(phrase), embed(review)) and keeps the top_k
/// by descending relevance (ties: ascending yake_score, then text).
std::vector<KeyPhrase> rank_by_relevance(std::span<const KeyPhrase> candidates,
                                         std::string_view review_text,
                                         const backend::Backend& backend, std::size_t top_k);

/// Scans in input order and keeps a phrase only if its cosine to every
/// phrase kept so far is below `threshold` (in (0, 1]).
std::vector<KeyPhrase> diversify(std::span<const KeyPhrase> ranked,
                                 const backend::Backend& backend, double threshold);

/// extract_candidates, rank_by_relevance and diversify, with every phrase
/// tagged with the review id.
std::vector<KeyPhrase> summarize_review(const Review& review, const Config& config,
                                        const backend::Backend& backend);

/// Summarizes every review in place (annotations.keyphrases).
void summarize_corpus(std::span<Review> reviews, const Config& config,
                      const backend::Backend& backend, std::size_t workers = 1);

}  // namespace rvs::keyphrase
