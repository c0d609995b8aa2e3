#include "rvs/stub_backend.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "rvs/error.hpp"

namespace rvs::backend {

StubBackend::StubBackend(StubOptions options) : options_(std::move(options)) {
  if (options_.dimension == 0) throw ValidationError("stub embedding dimension must be positive");
  if (options_.mask_top_k < 20) throw ValidationError("stub mask top-k must be at least 20");
  for (auto& w : options_.vocabulary) w = text::ascii_lower(text::trim(w));
  std::erase_if(options_.vocabulary, [](const std::string& w) { return w.empty(); });
  std::sort(options_.vocabulary.begin(), options_.vocabulary.end());
  options_.vocabulary.erase(std::unique(options_.vocabulary.begin(), options_.vocabulary.end()),
                            options_.vocabulary.end());
}

NliScore StubBackend::nli(std::string_view premise, std::string_view hypothesis) const {
  check_input("premise", premise);
  check_input("hypothesis", hypothesis);
  const auto p = text::content_tokens(premise);
  const auto h = text::content_tokens(hypothesis);
  const std::set<std::string> ps(p.begin(), p.end());
  const std::set<std::string> hs(h.begin(), h.end());
  std::size_t common = 0;
  for (const auto& t : hs) common += ps.count(t);
  const std::size_t uni = ps.size() + hs.size() - common;
  const double jaccard = uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);

  NliScore s;
  s.entailment = std::clamp(jaccard, kMinEntailment, kMaxEntailment);
  s.contradiction = kContradiction;
  s.neutral = 1.0 - s.entailment - s.contradiction;
  return s;
}

EmbeddingVector StubBackend::embed(std::string_view input) const {
  check_input("text", input);
  std::vector<std::string> tokens = text::content_tokens(input);
  if (tokens.empty()) tokens = text::tokenize(input);

  std::vector<std::string> features = tokens;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    features.push_back(tokens[i] + " " + tokens[i + 1]);
  }

  const std::size_t dim = options_.dimension;
  auto hash_into = [dim](std::vector<double>& v, std::string_view feature) {
    const std::uint64_t h = text::fnv1a64(feature);
    const std::size_t bucket = static_cast<std::size_t>((h >> 1) % dim);
    v[bucket] += (h & 1U) ? -1.0 : 1.0;
  };

  EmbeddingVector out;
  out.values.assign(dim, 0.0);
  for (const auto& f : features) hash_into(out.values, f);
  if (std::all_of(out.values.begin(), out.values.end(), [](double x) { return x == 0.0; })) {
    // Punctuation-only input, or features that cancelled exactly.
    std::fill(out.values.begin(), out.values.end(), 0.0);
    hash_into(out.values, text::ascii_lower(text::trim(input)));
  }
  normalize(out.values);
  return out;
}

MaskFillDistribution StubBackend::mask_fill(std::string_view prompt_with_mask) const {
  check_single_mask(prompt_with_mask);
  check_input("text", prompt_with_mask);
  const std::string context = text::replace_all(prompt_with_mask, kMaskToken, " ");

  std::map<std::string, double, std::less<>> counts;
  for (auto& t : text::content_tokens(context)) counts[t] += 1.0;

  std::map<std::string, double, std::less<>> weight = counts;
  for (const auto& word : options_.vocabulary) {
    auto parts = text::content_tokens(word);
    if (parts.empty()) parts = text::tokenize(word);
    double cooccurrence = 0.0;
    for (const auto& part : parts) {
      if (auto it = counts.find(part); it != counts.end()) cooccurrence += it->second;
    }
    weight[word] += cooccurrence + 0.05;
  }
  for (const auto& stop : text::default_stopwords()) {
    if (!weight.contains(stop)) weight[stop] = 0.01;
  }

  std::vector<std::pair<std::string, double>> ranked(weight.begin(), weight.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > options_.mask_top_k) ranked.resize(options_.mask_top_k);

  double total = 0.0;
  for (const auto& [token, w] : ranked) total += w;
  MaskFillDistribution dist;
  for (const auto& [token, w] : ranked) dist[token] = w / total;
  return dist;
}

}  // namespace rvs::backend
