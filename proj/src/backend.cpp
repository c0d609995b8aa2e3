#include "rvs/backend.hpp"

#include <cmath>

#include "rvs/error.hpp"
#include "rvs/remote_backend.hpp"
#include "rvs/simd/kernels.hpp"
#include "rvs/stub_backend.hpp"
#include "rvs/text.hpp"

namespace rvs::backend {

namespace {

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

}  // namespace

void check_nli(const NliScore& s) {
  if (!is_probability(s.entailment) || !is_probability(s.neutral) ||
      !is_probability(s.contradiction)) {
    throw BackendError("NLI score component outside [0, 1]");
  }
  if (std::abs(s.entailment + s.neutral + s.contradiction - 1.0) > 1e-6) {
    throw BackendError("NLI score components do not sum to 1");
  }
}

void check_embedding(const EmbeddingVector& v) {
  if (v.values.empty()) throw BackendError("embedding has dimension 0");
  for (double x : v.values) {
    if (!std::isfinite(x)) throw BackendError("embedding has a non-finite entry");
  }
  if (std::abs(simd::l2_norm(v.view()) - 1.0) > 1e-6) {
    throw BackendError("embedding is not unit-normalized");
  }
}

void check_mask_fill(const MaskFillDistribution& d) {
  if (d.size() < 20) {
    throw BackendError("mask fill returned " + std::to_string(d.size()) +
                       " entries, fewer than 20");
  }
  double sum = 0.0;
  for (const auto& [token, p] : d) {
    if (!is_probability(p)) throw BackendError("mask fill probability outside [0, 1]");
    sum += p;
  }
  if (sum > 1.0 + 1e-6) throw BackendError("mask fill probabilities sum above 1");
}

void check_single_mask(std::string_view prompt) {
  const auto n = text::count_occurrences(prompt, kMaskToken);
  if (n != 1) {
    throw RequestRejected("prompt must contain exactly one " + std::string(kMaskToken) +
                              ", found " + std::to_string(n),
                          400);
  }
}

void check_input(std::string_view field, std::string_view value) {
  if (text::trim(value).empty()) {
    throw RequestRejected("'" + std::string(field) + "' must not be empty", 400);
  }
  if (value.size() > kMaxInputChars) {
    throw RequestRejected("'" + std::string(field) + "' exceeds " +
                              std::to_string(kMaxInputChars) + " characters",
                          413);
  }
}

void normalize(std::vector<double>& values) {
  const double norm = simd::l2_norm(values);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw BackendError("cannot normalize a zero or non-finite vector");
  }
  simd::scale(values, 1.0 / norm);
}

std::unique_ptr<Backend> make_backend(const BackendConfig& config) {
  if (config.kind == "stub") {
    StubOptions opts;
    opts.vocabulary = config.vocabulary;
    return std::make_unique<StubBackend>(std::move(opts));
  }
  if (config.kind == "remote") {
    if (config.base_url.empty()) {
      throw ValidationError("remote backend requires a base URL", 0, "backend_url");
    }
    RemoteOptions opts;
    opts.base_url = config.base_url;
    opts.max_in_flight = config.max_in_flight;
    return std::make_unique<RemoteBackend>(std::move(opts));
  }
  throw ValidationError("unknown backend '" + config.kind + "' (expected stub or remote)", 0,
                        "backend");
}

}  // namespace rvs::backend
