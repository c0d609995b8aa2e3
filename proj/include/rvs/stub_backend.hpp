#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rvs/backend.hpp"
#include "rvs/text.hpp"

namespace rvs::backend {

struct StubOptions {
  std::size_t dimension = 256;
  std::size_t mask_top_k = 50;
  std::vector<std::string> vocabulary;
};

/// Deterministic lexical stand-in for the neural models. Uses integer
/// hashing and ASCII-only case folding, so results do not depend on host
/// architecture or locale.
///
///  - embed: content tokens and adjacent content-token bigrams are hashed
///    with FNV-1a 64; bits 1.. pick one of `dimension` buckets, bit 0 the
///    sign; the bucket counts are L2-normalized.
///  - nli: entailment is the Jaccard overlap of the premise and hypothesis
///    content-token sets clamped to [0.05, 0.95]; contradiction is 0.05 and
///    neutral takes the remainder.
///  - mask_fill: scores premise tokens by count and vocabulary words by how
///    often their tokens occur in the premise (plus 0.05), pads with
///    stopwords at 0.01, keeps the top `mask_top_k` and renormalizes.
class StubBackend final : public Backend {
 public:
  explicit StubBackend(StubOptions options = {});

  NliScore nli(std::string_view premise, std::string_view hypothesis) const override;
  EmbeddingVector embed(std::string_view text) const override;
  MaskFillDistribution mask_fill(std::string_view prompt_with_mask) const override;
  std::string name() const override { return "stub"; }

  std::size_t dimension() const { return options_.dimension; }

  static constexpr double kMinEntailment = 0.05;
  static constexpr double kMaxEntailment = 0.95;
  static constexpr double kContradiction = 0.05;

 private:
  StubOptions options_;
};

}  // namespace rvs::backend
