#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles/stub_oracle.hpp"
#include "rvs/error.hpp"
#include "rvs/ingest.hpp"
#include "rvs/semantic_index.hpp"
#include "rvs/stub_backend.hpp"
#include "unit/contract.hpp"

using namespace rvs;
using namespace rvs::backend;

TEST_CASE("stub satisfies the backend contract") {
  StubBackend stub({256, 50, {"crash", "glitch", "great"}});
  check_backend_contract(stub);
}

TEST_CASE("stub nli is the clamped jaccard of content tokens") {
  StubBackend stub;
  // {virtual, background, app, not, working} vs {app, not, working}: 3 / 5.
  auto s = stub.nli("Virtual background of the App is not working.", "the app is not working");
  CHECK(s.entailment == doctest::Approx(0.6));
  CHECK(s.contradiction == 0.05);
  CHECK(s.neutral == doctest::Approx(0.35));
  CHECK(stub.nli("alpha", "beta").entailment == 0.05);
  CHECK(stub.nli("alpha beta", "beta alpha").entailment == 0.95);
}

TEST_CASE("stub embedding matches the independent oracle") {
  StubBackend stub;
  for (const char* t : {"Screen sharing freezes", "the the the", "!!!", "Crash crash CRASH",
                        "Virtual background of the App is not working."}) {
    CAPTURE(t);
    const auto v = stub.embed(t);
    auto f = oracle::stub_features(t);
    if (f.empty()) continue;  // covered by the fallback check below
    long double norm = 0;
    for (auto& [k, x] : f) norm += x * x;
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < v.dimension(); ++i) {
      const long double expect = f.contains(i) ? f[i] / norm : 0.0L;
      CHECK(std::abs(static_cast<long double>(v.values[i]) - expect) < 1e-12L);
    }
  }
  // Punctuation-only input falls back to hashing the raw text.
  CHECK(std::abs(simd::l2_norm(stub.embed("!!!").view()) - 1.0) < 1e-12);
}

TEST_CASE("stub cosine of texts with identical content tokens is 1") {
  StubBackend stub;
  CHECK(index::cosine(stub.embed("The crash is bad"), stub.embed("crash bad!")) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stub cosine of texts with disjoint tokens centres on 0") {
  // Hashing into 256 buckets lets unrelated tokens collide, so single pairs
  // can stray past 0.1; the spread is checked over many random pairs, and
  // pairs whose buckets do not collide must be exactly orthogonal.
  StubBackend stub;
  std::mt19937_64 rng(42);
  const std::string consonants = "bcdfgklmnprstvz";
  const std::string vowels = "aeiou";
  auto word = [&] {
    std::string w;
    for (int i = 0; i < 3; ++i) {
      w += consonants[rng() % consonants.size()];
      w += vowels[rng() % vowels.size()];
    }
    return w;
  };
  const int pairs = 2000;
  int within = 0;
  int collision_free = 0;
  double sum = 0;
  for (int t = 0; t < pairs; ++t) {
    std::set<std::string> used;
    auto phrase = [&] {
      std::string p;
      const int n = 3 + static_cast<int>(rng() % 10);
      for (int i = 0; i < n;) {
        std::string w = word();
        if (!used.insert(w).second) continue;
        p += (i++ ? " " : "") + w;
      }
      return p;
    };
    const std::string a = phrase();
    const std::string b = phrase();
    const double c = index::cosine(stub.embed(a), stub.embed(b));
    sum += c;
    if (std::abs(c) <= 0.1) ++within;
    bool shared = false;
    const auto fb = oracle::stub_features(b);
    for (const auto& [bucket, x] : oracle::stub_features(a)) shared |= fb.contains(bucket);
    if (!shared) {
      ++collision_free;
      CHECK(c == 0.0);
    }
  }
  CHECK(std::abs(sum / pairs) < 0.01);
  CHECK(within >= pairs * 85 / 100);
  CHECK(collision_free > 0);
}

TEST_CASE("stub mask fill ranks vocabulary words that occur in the prompt") {
  std::vector<std::string> vocab;
  for (const auto& l : ingest::default_labels()) {
    vocab.insert(vocab.end(), l.label_words.begin(), l.label_words.end());
  }
  StubBackend stub({256, 50, vocab});
  const auto d = stub.mask_fill("It shows a glitch and another glitch : <mask>");
  CHECK(d.size() == 50);
  double sum = 0;
  for (auto& [t, p] : d) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  // "glitch" appears twice as a premise token and once more as a label word.
  double best = 0;
  std::string best_token;
  for (auto& [t, p] : d) {
    if (p > best) {
      best = p;
      best_token = t;
    }
  }
  CHECK(best_token == "glitch");
  CHECK(d.at("crash") < d.at("glitch"));
}

TEST_CASE("make_backend") {
  CHECK(make_backend({"stub", "", 8, {}})->name() == "stub");
  CHECK_THROWS_AS(make_backend({"remote", "", 8, {}}), ValidationError);
  CHECK_THROWS_AS(make_backend({"gpu", "", 8, {}}), ValidationError);
}

TEST_CASE("contract checks") {
  CHECK_THROWS_AS(check_nli({0.5, 0.5, 0.5}), BackendError);
  CHECK_NOTHROW(check_nli({0.2, 0.3, 0.5}));
  CHECK_THROWS_AS(check_embedding({{0.5, 0.5}}), BackendError);
  MaskFillDistribution few{{"a", 0.5}};
  CHECK_THROWS_AS(check_mask_fill(few), BackendError);
  std::vector<double> zero(4, 0.0);
  CHECK_THROWS_AS(normalize(zero), BackendError);
}
