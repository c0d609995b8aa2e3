#pragma once

// YAKE statistical keyword scoring (lower score = more important).
//
// Per term t (lowercased word):
//   casing     = max(TF_upper, TF_acronym) / (1 + ln TF)
//   position   = ln(ln(3 + median of the distinct sentence indices of t))
//   frequency  = TF / (mean TF + stddev TF), statistics over non-stopwords
//   relatedness= 1 + (DL + DR) * TF / max TF, where DL (DR) is the number of
//                distinct left (right) neighbours over the number of left
//                (right) co-occurrences, window 1, inside punctuation chunks
//   sentences  = sentences containing t / number of sentences
//   S(t)       = relatedness * position /
//                (casing + frequency / relatedness + sentences / relatedness)
// Per candidate n-gram kw:
//   S(kw) = prod S(t) / (TF(kw) * (1 + sum S(t)))

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rvs/text.hpp"

namespace rvs::yake {

struct Token {
  std::string surface;
  std::string key;  // lowercased surface
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t sentence = 0;
  std::size_t chunk = 0;  // punctuation-delimited block, never spans sentences
  bool sentence_start = false;
};

struct Segmentation {
  std::vector<Token> words;
  std::size_t sentence_count = 0;
};

/// Words are runs of ASCII alphanumerics or UTF-8 bytes, with single inner
/// apostrophes or hyphens. Sentences end at '.', '!' or '?' followed by
/// whitespace or end of text, and at line breaks. Any other punctuation
/// starts a new chunk.
Segmentation segment(std::string_view text);

struct TermStats {
  std::size_t tf = 0;
  std::size_t tf_upper = 0;
  std::size_t tf_acronym = 0;
  double casing = 0;
  double position = 0;
  double frequency = 0;
  double relatedness = 0;
  double sentences = 0;
  double score = 0;
  bool stopword = false;
};

std::map<std::string, TermStats> term_stats(const Segmentation& seg,
                                            const text::StopwordSet& stopwords);

struct Candidate {
  std::string key;      // lowercased words joined by single spaces
  std::string surface;  // first occurrence, verbatim from the text
  std::size_t tf = 0;
  double score = 0;
};

/// Every n-gram (1..max_n words) inside a chunk that neither starts nor ends
/// with a stopword, deduplicated by key and sorted by (score, key).
std::vector<Candidate> score_candidates(std::string_view text, std::size_t max_n,
                                        const text::StopwordSet& stopwords);

}  // namespace rvs::yake
