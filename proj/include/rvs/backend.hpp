#pragma once

// Model-scoring contract shared by the offline stub and the HTTP client:
// entailment (NLI) scores, sentence embeddings and masked-token prediction.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rvs/prompt.hpp"

namespace rvs::backend {

/// Mask literal used in prompts and on the wire.
inline constexpr std::string_view kMaskToken = "<mask>";

/// Inputs longer than this many bytes are rejected with status 413.
inline constexpr std::size_t kMaxInputChars = 4096;

struct NliScore {
  double entailment = 0.0;
  double neutral = 0.0;
  double contradiction = 0.0;
};

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dimension() const { return values.size(); }
  std::span<const double> view() const { return values; }
  bool operator==(const EmbeddingVector&) const = default;
};

using MaskFillDistribution = prompt::Distribution;

/// Implementations are immutable after construction and safe to call
/// concurrently. Every operation is a pure function of its inputs.
class Backend {
 public:
  virtual ~Backend() = default;

  /// Components in [0, 1] summing to 1 within 1e-6.
  virtual NliScore nli(std::string_view premise, std::string_view hypothesis) const = 0;

  /// Unit L2 norm within 1e-6; dimension fixed per instance.
  virtual EmbeddingVector embed(std::string_view text) const = 0;

  /// Top-k (k >= 20) token distribution for the single kMaskToken in the
  /// prompt. Rejects prompts with zero or several masks.
  virtual MaskFillDistribution mask_fill(std::string_view prompt_with_mask) const = 0;

  virtual std::string name() const = 0;
};

// Contract checks; each throws BackendError describing the violation.
void check_nli(const NliScore& score);
void check_embedding(const EmbeddingVector& v);
void check_mask_fill(const MaskFillDistribution& d);

/// Throws RequestRejected (400) unless `prompt` holds exactly one mask.
void check_single_mask(std::string_view prompt);

/// Throws RequestRejected: 400 for empty input, 413 beyond kMaxInputChars.
void check_input(std::string_view field, std::string_view value);

/// Rescales `values` to unit L2 norm. Throws BackendError for a zero or
/// non-finite vector.
void normalize(std::vector<double>& values);

struct BackendConfig {
  std::string kind = "stub";  // "stub" | "remote"
  std::string base_url;       // required for "remote"
  std::size_t max_in_flight = 8;
  /// Words the stub's mask filler always considers (verbalizer label words).
  std::vector<std::string> vocabulary;
};

/// Throws ValidationError for an unknown kind or a remote config without URL.
std::unique_ptr<Backend> make_backend(const BackendConfig& config);

}  // namespace rvs::backend
