#include "oracles/yake_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace oracle {

const std::set<std::string>& stopwords() {
  static const std::set<std::string> s = {
      "a",  "an", "the", "and", "or",   "but",  "if",   "is", "are", "was",
      "were", "be", "been", "am", "of", "to", "in", "on", "at", "for",
      "with", "by", "from", "as", "it", "its", "this", "that", "i", "my"};
  return s;
}

namespace {

struct W {
  std::string raw;
  std::string low;
  std::size_t begin, end;
  int sentence;
  int chunk;
  bool first;
};

bool wordch(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9') || u >= 0x80;
}
bool spacech(char c) { return c == ' ' || c == '\n' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }
bool term(char c) { return c == '.' || c == '!' || c == '?'; }

std::string lower(std::string s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

// Step 1: sentence ranges [b, e).
std::vector<std::pair<std::size_t, std::size_t>> sentences(std::string_view t) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t start = 0, i = 0;
  while (i < t.size()) {
    if (t[i] == '\n') {
      out.push_back({start, i});
      start = ++i;
    } else if (term(t[i]) && (i == 0 || !term(t[i - 1]))) {
      std::size_t j = i;
      while (j < t.size() && term(t[j])) j++;
      if (j == t.size() || spacech(t[j])) {
        out.push_back({start, j});
        start = j;
      }
      i = j;
    } else {
      i++;
    }
  }
  out.push_back({start, t.size()});
  return out;
}

// Step 2 and 3: chunks, then words.
std::vector<W> words(std::string_view t) {
  std::vector<W> out;
  int sent = 0, chunk = 0;
  for (auto [b, e] : sentences(t)) {
    bool any_in_sentence = false;
    bool any_in_chunk = false;
    std::size_t i = b;
    while (i < e) {
      if (wordch(t[i])) {
        std::size_t j = i;
        for (;;) {
          while (j < e && wordch(t[j])) j++;
          if (j + 1 < e && (t[j] == '\'' || t[j] == '-') && wordch(t[j + 1])) {
            j++;
            continue;
          }
          break;
        }
        W w;
        w.raw = std::string(t.substr(i, j - i));
        w.low = lower(w.raw);
        w.begin = i;
        w.end = j;
        w.sentence = sent;
        w.chunk = chunk;
        w.first = !any_in_sentence;
        out.push_back(w);
        any_in_sentence = any_in_chunk = true;
        i = j;
      } else {
        if (!spacech(t[i]) && any_in_chunk) {
          chunk++;
          any_in_chunk = false;
        }
        i++;
      }
    }
    if (any_in_chunk) chunk++;
    if (any_in_sentence) sent++;
  }
  return out;
}

bool acronym(const std::string& w) {
  if (w.size() < 2) return false;
  bool letter = false;
  for (char c : w) {
    if (c >= 'A' && c <= 'Z')
      letter = true;
    else if (!(c >= '0' && c <= '9'))
      return false;
  }
  return letter;
}

}  // namespace

std::vector<YakePhrase> yake(std::string_view text, int max_n, const std::set<std::string>& stop) {
  const std::vector<W> ws = words(text);
  if (ws.empty()) return {};
  int n_sent = 0;
  for (const W& w : ws) n_sent = std::max(n_sent, w.sentence + 1);

  std::map<std::string, double> S;
  {
    std::set<std::string> terms;
    for (const W& w : ws) terms.insert(w.low);

    auto tf_of = [&](const std::string& t) {
      int c = 0;
      for (const W& w : ws) c += w.low == t;
      return c;
    };
    // Mean and standard deviation of TF over non-stopword terms.
    std::vector<double> tfs;
    double max_tf = 0;
    for (const auto& t : terms) {
      if (!stop.count(t)) tfs.push_back(tf_of(t));
      max_tf = std::max<double>(max_tf, tf_of(t));
    }
    if (tfs.empty())
      for (const auto& t : terms) tfs.push_back(tf_of(t));
    double mean = 0;
    for (double x : tfs) mean += x;
    mean /= tfs.size();
    double sq = 0;
    for (double x : tfs) sq += (x - mean) * (x - mean);
    const double sd = std::sqrt(sq / tfs.size());

    for (const auto& t : terms) {
      const double tf = tf_of(t);
      int tf_a = 0, tf_u = 0;
      std::set<int> sent;
      std::vector<std::string> left, right;
      for (std::size_t i = 0; i < ws.size(); i++) {
        if (ws[i].low != t) continue;
        if (acronym(ws[i].raw))
          tf_a++;
        else if (ws[i].raw[0] >= 'A' && ws[i].raw[0] <= 'Z' && !ws[i].first)
          tf_u++;
        sent.insert(ws[i].sentence);
        if (i > 0 && ws[i - 1].chunk == ws[i].chunk) left.push_back(ws[i - 1].low);
        if (i + 1 < ws.size() && ws[i + 1].chunk == ws[i].chunk) right.push_back(ws[i + 1].low);
      }
      const double casing = std::max(tf_a, tf_u) / (1.0 + std::log(tf));
      std::vector<int> sv(sent.begin(), sent.end());
      const double med = sv.size() % 2 ? sv[sv.size() / 2]
                                       : (sv[sv.size() / 2 - 1] + sv[sv.size() / 2]) / 2.0;
      const double position = std::log(std::log(3.0 + med));
      const double frequency = tf / (mean + sd);
      const double dl = left.empty() ? 0.0
                                     : double(std::set<std::string>(left.begin(), left.end()).size()) /
                                           left.size();
      const double dr = right.empty() ? 0.0
                                      : double(std::set<std::string>(right.begin(), right.end()).size()) /
                                            right.size();
      const double rel = 1.0 + (dl + dr) * (tf / max_tf);
      const double different = double(sent.size()) / n_sent;
      S[t] = (rel * position) / (casing + frequency / rel + different / rel);
    }
  }

  struct Acc {
    std::string surface;
    std::vector<std::string> terms;
    int tf = 0;
  };
  std::map<std::string, Acc> cands;
  for (std::size_t i = 0; i < ws.size(); i++) {
    for (int n = 1; n <= max_n; n++) {
      const std::size_t last = i + n - 1;
      if (last >= ws.size() || ws[last].chunk != ws[i].chunk) break;
      if (stop.count(ws[i].low) || stop.count(ws[last].low)) continue;
      std::string key;
      std::vector<std::string> terms;
      for (std::size_t k = i; k <= last; k++) {
        key += (k == i ? "" : " ") + ws[k].low;
        terms.push_back(ws[k].low);
      }
      Acc& a = cands[key];
      if (a.tf == 0) {
        a.surface = std::string(text.substr(ws[i].begin, ws[last].end - ws[i].begin));
        a.terms = terms;
      }
      a.tf++;
    }
  }

  std::vector<YakePhrase> out;
  for (const auto& [key, a] : cands) {
    double prod = 1, sum = 0;
    for (const auto& t : a.terms) {
      prod *= S[t];
      sum += S[t];
    }
    out.push_back({key, a.surface, prod / (a.tf * (1 + sum))});
  }
  std::sort(out.begin(), out.end(), [](const YakePhrase& x, const YakePhrase& y) {
    if (x.score != y.score) return x.score < y.score;
    return x.key < y.key;
  });
  return out;
}

}  // namespace oracle
