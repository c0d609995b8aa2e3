// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each check compares library output against an oracle in tests/.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles/stub_oracle.hpp"
#include "oracles/yake_oracle.hpp"
#include "rvs/classifier.hpp"
#include "rvs/ingest.hpp"
#include "rvs/keyphrase.hpp"
#include "rvs/pipeline.hpp"
#include "rvs/prompt.hpp"
#include "rvs/semantic_index.hpp"
#include "rvs/simd/kernels.hpp"
#include "rvs/stub_backend.hpp"
#include "rvs/valuestream.hpp"
#include "rvs/yake.hpp"
#include "support/paragraphs.hpp"
#include "support/properties.hpp"
#include "support/release_fixture.hpp"

using namespace rvs;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

/// Collects the first few failure messages of one criterion.
class Outcome {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_.push_back(what);
  }
  void note(const std::string& s) { info_.push_back(s); }
  bool passed() const { return failures_ == 0; }
  std::string detail() const {
    std::string out;
    for (const auto& n : passed() ? info_ : notes_) out += (out.empty() ? "" : "; ") + n;
    if (failures_ > 3) out += "; +" + std::to_string(failures_ - 3) + " more";
    return out;
  }

 private:
  int failures_ = 0;
  std::vector<std::string> notes_;
  std::vector<std::string> info_;
};

fs::path data(const std::string& rel) { return fs::path(RVS_SOURCE_DIR) / "data" / rel; }

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() /
           ("rvs_acceptance_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt_ms(double ms) {
  std::ostringstream s;
  s.precision(3);
  s << ms << " ms";
  return s.str();
}

void template_fidelity(Outcome& o) {
  using namespace prompt;
  const std::string review = "Virtual background of the App is not working.";
  const auto t0 = Clock::now();
  const auto sentence = classifier::review_sentence(review);
  const auto table1 = PromptTemplate::parse("[X]. The review is about [Z]");
  const auto filled = fill_template(table1, {{"X", sentence}});
  const auto answered = fill_answer(filled, "fault.");
  const auto table3 = PromptTemplate::parse(classifier::kSentimentPremiseTemplate);
  const auto premise = fill_template(table3, {{"X1", sentence}, {"X2", "Negative"}});
  const double elapsed = ms_since(t0);

  o.expect(filled.text() == "Virtual background of the App is not working. The review is about [Z]",
           "prefix prompt: '" + filled.text() + "'");
  o.expect(answered.text() ==
               "Virtual background of the App is not working. The review is about fault.",
           "answered prompt: '" + answered.text() + "'");
  o.expect(premise.text() == "Virtual background of the App is not working. Sentiment of the "
                             "review is Negative. The review is about [Z].",
           "sentiment prompt: '" + premise.text() + "'");
  o.expect(elapsed < 1.0, "took " + fmt_ms(elapsed));
  o.note(fmt_ms(elapsed));
}

void verbalizer_arithmetic(Outcome& o) {
  using namespace prompt;
  const Distribution d{{"crash", 0.30}, {"freeze", 0.10}, {"bug", 0.05}, {"good", 0.20},
                       {"great", 0.15}, {"add", 0.08},    {"want", 0.02}, {"other", 0.10}};
  const std::map<std::string, std::vector<std::string>> mapping{
      {"Bug", {"crash", "freeze", "bug"}},
      {"Praise", {"good", "great"}},
      {"Request", {"add", "want", "wish", "feature"}}};
  struct Expected {
    Aggregation agg;
    std::map<std::string, double> scores;
  };
  // Hand-computed: absent words count as probability 0.
  const std::vector<Expected> expected{
      {Aggregation::Mean, {{"Bug", 0.45 / 3}, {"Praise", 0.175}, {"Request", 0.025}}},
      {Aggregation::Sum, {{"Bug", 0.45}, {"Praise", 0.35}, {"Request", 0.10}}},
      {Aggregation::Max, {{"Bug", 0.30}, {"Praise", 0.20}, {"Request", 0.08}}}};
  for (const auto& e : expected) {
    const auto got = verbalize(d, Verbalizer(mapping, e.agg));
    for (const auto& [name, want] : e.scores) {
      const double diff = std::abs(got.at(name) - want);
      o.expect(diff <= 1e-12, std::string(to_string(e.agg)) + "/" + name + " off by " +
                                  std::to_string(diff));
    }
  }
}

void classifier_properties(Outcome& o) {
  backend::StubBackend stub;
  const auto v = properties::check_classifier_properties(stub, 100, 20240611);
  o.expect(v.permutation == 0, std::to_string(v.permutation) + " permutation violations");
  o.expect(v.normalization == 0, std::to_string(v.normalization) + " raw/softmax violations");
  o.expect(v.subset == 0, std::to_string(v.subset) + " subset violations");
  o.note("100 cases, 0 violations");
}

void keyphrase_oracle(Outcome& o) {
  backend::StubBackend stub;
  const auto paragraphs = support::paragraphs(data("fixtures/yake_paragraphs.txt"));
  o.expect(paragraphs.size() == 10, "expected 10 paragraphs, got " + std::to_string(paragraphs.size()));
  const std::set<std::string> stop = oracle::stopwords();
  std::size_t pairs = 0;
  for (std::size_t p = 0; p < paragraphs.size(); ++p) {
    const auto& para = paragraphs[p];
    const std::string tag = "paragraph " + std::to_string(p + 1);
    const auto lib = yake::score_candidates(para, 3, text::default_stopwords());
    const auto ref = oracle::yake(para, 3, stop);
    const std::size_t n = std::min<std::size_t>(10, ref.size());
    o.expect(lib.size() >= n, tag + ": too few candidates");
    for (std::size_t i = 0; i < n && i < lib.size(); ++i) {
      o.expect(lib[i].key == ref[i].key && lib[i].surface == ref[i].surface,
               tag + " rank " + std::to_string(i + 1) + ": '" + lib[i].surface + "' vs '" +
                   ref[i].surface + "'");
      o.expect(std::abs(lib[i].score - ref[i].score) <= 1e-12 * std::max(1.0, ref[i].score),
               tag + " rank " + std::to_string(i + 1) + " score");
    }

    const auto ranked = keyphrase::rank_by_relevance(keyphrase::extract_candidates(para, 3, 20),
                                                     para, stub, 20);
    const auto kept = keyphrase::diversify(ranked, stub, 0.9);
    o.expect(!kept.empty(), tag + ": nothing kept");
    for (std::size_t a = 0; a < kept.size(); ++a) {
      for (std::size_t b = a + 1; b < kept.size(); ++b) {
        ++pairs;
        const long double c = oracle::stub_cosine(kept[a].text, kept[b].text);
        o.expect(c < 0.9L, tag + ": '" + kept[a].text + "' ~ '" + kept[b].text + "'");
      }
    }
  }
  o.note("10 paragraphs, " + std::to_string(pairs) + " diversified pairs");
}

std::string random_doc(std::mt19937_64& rng, const std::vector<std::string>& vocab) {
  std::uniform_int_distribution<int> len(6, 14);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::string s;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) s += (i ? " " : "") + vocab[pick(rng)];
  return s;
}

void search_exactness(Outcome& o) {
  std::mt19937_64 rng(1000);
  std::vector<std::string> vocab;
  const std::string letters = "bcdfgklmnprstvz";
  const std::string vowels = "aeiou";
  for (int i = 0; i < 400; ++i) {
    std::string w;
    for (int s = 0; s < 3; ++s) {
      w += letters[rng() % letters.size()];
      w += vowels[rng() % vowels.size()];
    }
    vocab.push_back(w);
  }
  std::vector<index::DocInput> docs;
  std::set<std::string> seen;
  while (docs.size() < 1000) {
    std::string text = random_doc(rng, vocab);
    if (!seen.insert(text).second) continue;
    char id[16];
    std::snprintf(id, sizeof id, "d%04zu", (docs.size() * 7919) % 1000);
    docs.push_back({id, std::move(text), index::PayloadKind::Feature});
  }

  backend::StubBackend stub;
  const auto t0 = Clock::now();
  const auto idx = index::SemanticIndex::build(docs, stub);
  std::vector<std::vector<std::vector<index::SearchHit>>> results;
  std::vector<std::string> queries;
  for (int q = 0; q < 20; ++q) queries.push_back(random_doc(rng, vocab));
  for (const auto& q : queries) {
    std::vector<std::vector<index::SearchHit>> per_k;
    for (std::size_t k : {1u, 5u, 10u}) per_k.push_back(idx.query(q, k, stub));
    results.push_back(std::move(per_k));
  }
  const double elapsed = ms_since(t0);

  // Oracle: dense rows from the independently computed stub features.
  auto dense = [](std::string_view t) {
    std::vector<double> v(256, 0.0);
    for (const auto& [bucket, count] : oracle::stub_features(t)) v[bucket] = static_cast<double>(count);
    return v;
  };
  std::vector<std::vector<double>> rows;
  std::vector<std::string> ids;
  for (const auto& d : docs) {
    rows.push_back(dense(d.text));
    ids.push_back(d.doc_id);
  }
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto brute = oracle::brute_force(rows, ids, dense(queries[q]));
    const std::vector<std::size_t> ks{1, 5, 10};
    for (std::size_t j = 0; j < ks.size(); ++j) {
      const auto& hits = results[q][j];
      o.expect(hits.size() == ks[j], "wrong hit count");
      for (std::size_t i = 0; i < hits.size(); ++i) {
        o.expect(hits[i].doc_id == ids[brute[i].index],
                 "query " + std::to_string(q) + " k=" + std::to_string(ks[j]) + " rank " +
                     std::to_string(i + 1) + ": " + hits[i].doc_id + " vs " + ids[brute[i].index]);
        o.expect(std::abs(hits[i].score - static_cast<double>(brute[i].score)) < 1e-9,
                 "score mismatch");
      }
      if (j > 0) {
        const auto& shorter = results[q][j - 1];
        o.expect(std::equal(shorter.begin(), shorter.end(), hits.begin()), "prefix property");
      }
    }
  }
  o.expect(elapsed < 1000.0, "took " + fmt_ms(elapsed));
  o.note("1000 docs, 20 queries, " + fmt_ms(elapsed));
}

void metric_reproduction(Outcome& o) {
  using valuestream::format_percentage;
  using valuestream::percentage;
  o.expect(format_percentage(percentage(41, 85)) == "48.23529412", "41/85");
  o.expect(format_percentage(percentage(7, 18)) == "38.88888889", "7/18");
  o.expect(format_percentage(percentage(16, 39)) == "41.02564103", "16/39");

  backend::StubBackend stub;
  const auto reviews = ingest::load_reviews(data("fixtures/release/reviews_8.jsonl"),
                                            ingest::ReviewFormat::Jsonl);
  const auto entries = ingest::load_release_log(data("fixtures/release/release_log.csv"));
  o.expect(entries.size() == 6 && reviews.size() == 8, "fixture sizes");
  const auto report = valuestream::validate_release_log(reviews, entries, stub, 0.8);
  for (std::size_t c = 0; c < 3; ++c) {
    const auto& got = report.categories[c];
    const auto& want = support::kReleaseExpected[c];
    const std::string name(to_string(kAllReleaseCategories[c]));
    o.expect(got.entries_total == want.total && got.entries_matched_any == want.any &&
                 got.entries_matched_correct == want.correct,
             name + " counts");
    o.expect(got.pct_any == want.pct_any && got.pct_correct == want.pct_correct,
             name + " percentages " + format_percentage(got.pct_any) + "/" +
                 format_percentage(got.pct_correct));
  }

  // Randomized corpora through the full embedding path.
  std::mt19937_64 rng(500);
  const std::vector<std::string> topics{"Bug", "Fault", "Praise", "Feature request",
                                        "Improvement suggestion", "Content request", "Other"};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<ReleaseLogEntry> es;
    const std::size_t ne = 1 + rng() % 8;
    for (std::size_t e = 0; e < ne; ++e) {
      es.push_back({"e" + std::to_string(e), kAllReleaseCategories[rng() % 3],
                    properties::random_text(rng, 2, 6), parse_iso_date("2023-01-01")});
    }
    std::vector<Review> rs;
    const std::size_t nr = 1 + rng() % 10;
    for (std::size_t r = 0; r < nr; ++r) {
      Review rev;
      rev.id = "r" + std::to_string(r);
      rev.app = "app";
      // Sometimes copy an entry so high-similarity matches occur.
      rev.text = rng() % 3 == 0 ? es[rng() % ne].text : properties::random_text(rng, 2, 8);
      rev.timestamp = parse_iso_date("2023-02-01");
      AnalysisResult a;
      a.topic = topics[rng() % topics.size()];
      rev.annotations = a;
      rs.push_back(std::move(rev));
    }
    const double threshold = 0.3 + 0.7 * std::uniform_real_distribution<double>(0, 1)(rng);
    const auto rep = valuestream::validate_release_log(rs, es, stub, threshold);
    for (const auto& c : rep.categories) {
      o.expect(c.pct_correct <= c.pct_any, "trial " + std::to_string(trial) + ": correct > any");
    }
  }
  o.note("a, b and 500 randomized trials");
}

void end_to_end_determinism(Outcome& o) {
  const fs::path input = data("fixtures/reviews_50.jsonl");
  const auto run = [&](const std::string& name, std::optional<simd::Level> level, double& ms) {
    config::PipelineConfig cfg;
    cfg.out_dir = scratch(name);
    std::optional<simd::ScopedLevel> scoped;
    if (level) scoped.emplace(*level);
    std::ostringstream out, err;
    const auto t0 = Clock::now();
    const int rc = pipeline::cmd_analyze(cfg, input, out, err);
    ms = ms_since(t0);
    o.expect(rc == 0, name + " exited " + std::to_string(rc) + ": " + err.str());
    return cfg.out_dir;
  };
  const auto compare = [&](const fs::path& a, const fs::path& b, const std::string& what) {
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      const auto other = b / entry.path().filename();
      o.expect(fs::exists(other) &&
                   ingest::read_file(entry.path()) == ingest::read_file(other),
               what + ": " + entry.path().filename().string() + " differs");
    }
    o.expect(files == static_cast<std::size_t>(std::distance(fs::directory_iterator(b),
                                                             fs::directory_iterator{})),
             what + ": different file sets");
    o.expect(files >= 8, what + ": only " + std::to_string(files) + " outputs");
  };

  double t1 = 0, t2 = 0, t3 = 0;
  const auto first = run("e2e_first", std::nullopt, t1);
  const auto second = run("e2e_second", std::nullopt, t2);
  compare(first, second, "rerun");
  // The scalar kernels stand in for a host without vector units.
  const auto scalar = run("e2e_scalar", simd::Level::Scalar, t3);
  compare(first, scalar, std::string("scalar vs ") + std::string(simd::to_string(simd::active_level())));
  for (double t : {t1, t2, t3}) o.expect(t < 10000.0, "run took " + fmt_ms(t));
  o.note(std::string("kernels ") + std::string(simd::to_string(simd::active_level())) +
         " and scalar, slowest run " + fmt_ms(std::max({t1, t2, t3})));
}

void check_integrity(Outcome& o, std::span<const Review> reviews, const std::string& tag) {
  using valuestream::Axis;
  const auto sentiment = valuestream::distribution(reviews, Axis::Sentiment);
  const auto topic = valuestream::distribution(reviews, Axis::Topic);
  const auto cross = valuestream::distribution(reviews, Axis::TopicBySentiment);
  auto sum = [](const valuestream::DistributionReport& r) {
    double s = 0;
    for (const auto& c : r.cells) s += c.percentage;
    return s;
  };
  for (const auto& r : sentiment) {
    o.expect(std::abs(sum(r) - 100.0) <= 1e-6, tag + " sentiment/" + r.app);
  }
  for (const auto& r : topic) {
    o.expect(std::abs(sum(r) - 100.0) <= 1e-6, tag + " topic/" + r.app);
    const auto it = std::find_if(cross.begin(), cross.end(),
                                 [&](const auto& c) { return c.app == r.app; });
    o.expect(it != cross.end(), tag + " cross tab missing for " + r.app);
    if (it == cross.end()) continue;
    for (const auto& cell : r.cells) {
      std::size_t n = 0;
      for (const auto& c : it->cells) {
        if (c.row == cell.row) n += c.count;
      }
      o.expect(n == cell.count, tag + " marginal " + r.app + "/" + cell.row);
    }
  }
}

void distribution_integrity(Outcome& o) {
  backend::StubBackend stub;
  const auto raw = ingest::load_reviews(data("fixtures/reviews_50.jsonl"), ingest::ReviewFormat::Jsonl);
  const auto classified =
      classifier::classify_corpus(raw, ingest::default_labels(), stub).reviews;
  check_integrity(o, classified, "reviews_50");
  const auto release = ingest::load_reviews(data("fixtures/release/reviews_8.jsonl"),
                                            ingest::ReviewFormat::Jsonl);
  check_integrity(o, release, "reviews_8");

  std::mt19937_64 rng(7);
  const std::vector<std::string> topics{"Bug", "Fault", "Praise", "Other", "Feature request"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Review> rs;
    const std::size_t n = 1 + rng() % 200;
    for (std::size_t i = 0; i < n; ++i) {
      Review r;
      r.id = std::to_string(i);
      r.app = "app" + std::to_string(rng() % 3);
      AnalysisResult a;
      a.topic = topics[rng() % topics.size()];
      a.sentiment = kAllSentiments[rng() % 5];
      r.annotations = a;
      rs.push_back(std::move(r));
    }
    check_integrity(o, rs, "random " + std::to_string(trial));
  }
  o.note("2 fixtures and 200 random corpora");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"template fidelity", template_fidelity},
      {"verbalizer arithmetic", verbalizer_arithmetic},
      {"classifier properties", classifier_properties},
      {"keyphrase oracle equivalence", keyphrase_oracle},
      {"search exactness", search_exactness},
      {"metric reproduction", metric_reproduction},
      {"end-to-end determinism", end_to_end_determinism},
      {"distribution integrity", distribution_integrity},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      check(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (o.passed() ? "PASS" : "FAIL") << "  " << name;
    const auto detail = o.detail();
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << '\n';
    if (!o.passed()) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
