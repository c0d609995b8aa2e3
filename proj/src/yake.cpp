#include "rvs/yake.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rvs::yake {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

bool word_byte(std::string_view s, std::size_t i) {
  return text::is_word_byte(static_cast<unsigned char>(s[i]));
}

bool is_acronym(std::string_view w) {
  std::size_t letters = 0;
  for (char c : w) {
    if (c >= 'A' && c <= 'Z') {
      ++letters;
    } else if (!(c >= '0' && c <= '9')) {
      return false;
    }
  }
  return w.size() >= 2 && letters >= 1;
}

double median(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return static_cast<double>(v[n / 2]);
  return (static_cast<double>(v[n / 2 - 1]) + static_cast<double>(v[n / 2])) / 2.0;
}

}  // namespace

Segmentation segment(std::string_view s) {
  Segmentation seg;
  std::size_t sentence = 0, chunk = 0;
  bool sentence_has_words = false;
  bool chunk_has_words = false;
  bool next_is_start = true;

  auto end_chunk = [&] {
    if (chunk_has_words) ++chunk;
    chunk_has_words = false;
  };
  auto end_sentence = [&] {
    end_chunk();
    if (sentence_has_words) ++sentence;
    sentence_has_words = false;
    next_is_start = true;
  };

  std::size_t i = 0;
  while (i < s.size()) {
    if (word_byte(s, i)) {
      const std::size_t begin = i;
      while (i < s.size()) {
        if (word_byte(s, i)) {
          ++i;
        } else if ((s[i] == '\'' || s[i] == '-') && i + 1 < s.size() && word_byte(s, i + 1)) {
          i += 2;
        } else {
          break;
        }
      }
      Token t;
      t.surface = std::string(s.substr(begin, i - begin));
      t.key = text::ascii_lower(t.surface);
      t.begin = begin;
      t.end = i;
      t.sentence = sentence;
      t.chunk = chunk;
      t.sentence_start = next_is_start;
      next_is_start = false;
      sentence_has_words = chunk_has_words = true;
      seg.words.push_back(std::move(t));
      continue;
    }
    const char c = s[i];
    if (c == '\n') {
      end_sentence();
    } else if (c == '.' || c == '!' || c == '?') {
      end_chunk();
      std::size_t j = i;
      while (j < s.size() && (s[j] == '.' || s[j] == '!' || s[j] == '?')) ++j;
      if (j >= s.size() || is_space(s[j])) end_sentence();
      i = j;
      continue;
    } else if (!is_space(c)) {
      end_chunk();
    }
    ++i;
  }
  seg.sentence_count = sentence + (sentence_has_words ? 1 : 0);
  return seg;
}

std::map<std::string, TermStats> term_stats(const Segmentation& seg,
                                            const text::StopwordSet& stopwords) {
  std::map<std::string, TermStats> stats;
  std::map<std::string, std::set<std::size_t>> sentences;
  std::map<std::string, std::set<std::string>> left_distinct, right_distinct;
  std::map<std::string, std::size_t> left_total, right_total;

  const auto& w = seg.words;
  for (std::size_t i = 0; i < w.size(); ++i) {
    TermStats& st = stats[w[i].key];
    ++st.tf;
    if (is_acronym(w[i].surface)) {
      ++st.tf_acronym;
    } else if (text::starts_with_upper(w[i].surface) && !w[i].sentence_start) {
      ++st.tf_upper;
    }
    sentences[w[i].key].insert(w[i].sentence);
    if (i > 0 && w[i - 1].chunk == w[i].chunk) {
      left_distinct[w[i].key].insert(w[i - 1].key);
      ++left_total[w[i].key];
      right_distinct[w[i - 1].key].insert(w[i].key);
      ++right_total[w[i - 1].key];
    }
  }
  if (stats.empty()) return stats;

  std::vector<double> valid_tf;
  double max_tf = 0;
  for (auto& [key, st] : stats) {
    st.stopword = stopwords.contains(key);
    if (!st.stopword) valid_tf.push_back(static_cast<double>(st.tf));
    max_tf = std::max(max_tf, static_cast<double>(st.tf));
  }
  if (valid_tf.empty()) {
    for (const auto& [key, st] : stats) valid_tf.push_back(static_cast<double>(st.tf));
  }
  double mean = 0;
  for (double x : valid_tf) mean += x;
  mean /= static_cast<double>(valid_tf.size());
  double var = 0;
  for (double x : valid_tf) var += (x - mean) * (x - mean);
  const double stddev = std::sqrt(var / static_cast<double>(valid_tf.size()));

  const double n_sentences = static_cast<double>(std::max<std::size_t>(seg.sentence_count, 1));
  for (auto& [key, st] : stats) {
    const double tf = static_cast<double>(st.tf);
    st.casing = static_cast<double>(std::max(st.tf_upper, st.tf_acronym)) / (1.0 + std::log(tf));
    const auto& sent = sentences[key];
    st.position = std::log(std::log(3.0 + median({sent.begin(), sent.end()})));
    st.frequency = tf / (mean + stddev);
    const double dl = left_total[key] == 0 ? 0.0
                                           : static_cast<double>(left_distinct[key].size()) /
                                                 static_cast<double>(left_total[key]);
    const double dr = right_total[key] == 0 ? 0.0
                                            : static_cast<double>(right_distinct[key].size()) /
                                                  static_cast<double>(right_total[key]);
    st.relatedness = 1.0 + (dl + dr) * (tf / max_tf);
    st.sentences = static_cast<double>(sent.size()) / n_sentences;
    st.score = (st.relatedness * st.position) /
               (st.casing + st.frequency / st.relatedness + st.sentences / st.relatedness);
  }
  return stats;
}

std::vector<Candidate> score_candidates(std::string_view text, std::size_t max_n,
                                        const text::StopwordSet& stopwords) {
  const Segmentation seg = segment(text);
  const auto stats = term_stats(seg, stopwords);
  const auto& w = seg.words;

  struct Pending {
    Candidate c;
    std::vector<const TermStats*> terms;
  };
  std::map<std::string, Pending> found;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (stopwords.contains(w[i].key)) continue;
    std::string key;
    for (std::size_t n = 1; n <= max_n && i + n <= w.size(); ++n) {
      const Token& last = w[i + n - 1];
      if (last.chunk != w[i].chunk) break;
      if (n > 1) key += ' ';
      key += last.key;
      if (stopwords.contains(last.key)) continue;
      auto [it, inserted] = found.try_emplace(key);
      Pending& p = it->second;
      if (inserted) {
        p.c.key = key;
        p.c.surface = std::string(text.substr(w[i].begin, last.end - w[i].begin));
        for (std::size_t k = i; k < i + n; ++k) p.terms.push_back(&stats.at(w[k].key));
      }
      ++p.c.tf;
    }
  }

  std::vector<Candidate> out;
  out.reserve(found.size());
  for (auto& [key, p] : found) {
    double prod = 1.0, sum = 0.0;
    for (const TermStats* t : p.terms) {
      prod *= t->score;
      sum += t->score;
    }
    p.c.score = prod / (static_cast<double>(p.c.tf) * (1.0 + sum));
    out.push_back(std::move(p.c));
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return a.score != b.score ? a.score < b.score : a.key < b.key;
  });
  return out;
}

}  // namespace rvs::yake
