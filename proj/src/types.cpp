#include "rvs/types.hpp"

#include <charconv>
#include <cstdio>

#include "rvs/error.hpp"

namespace rvs {

namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return ec == std::errc() && ptr == s.data() + pos + len;
}

[[noreturn]] void bad_date(std::string_view s) {
  throw ValidationError("invalid ISO-8601 date '" + std::string(s) + "'");
}

}  // namespace

Date parse_iso_date(std::string_view s) {
  using namespace std::chrono;
  int y = 0, m = 0, d = 0;
  if (s.size() < 10 || !read_int(s, 0, 4, y) || s[4] != '-' || !read_int(s, 5, 2, m) ||
      s[7] != '-' || !read_int(s, 8, 2, d)) {
    bad_date(s);
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) bad_date(s);
  if (s.size() == 10) return ymd;

  // Date-time form.
  if (s[10] != 'T' && s[10] != 't' && s[10] != ' ') bad_date(s);
  int hh = 0, mm = 0, ss = 0;
  std::size_t pos = 11;
  if (s.size() < pos + 5 || !read_int(s, pos, 2, hh) || s[pos + 2] != ':' ||
      !read_int(s, pos + 3, 2, mm)) {
    bad_date(s);
  }
  pos += 5;
  if (pos < s.size() && s[pos] == ':') {
    if (!read_int(s, pos + 1, 2, ss)) bad_date(s);
    pos += 3;
    if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
      ++pos;
      const std::size_t start = pos;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
      if (pos == start) bad_date(s);
    }
  }
  if (hh > 23 || mm > 59 || ss > 60) bad_date(s);

  int offset_minutes = 0;
  if (pos < s.size()) {
    const char sign = s[pos];
    if ((sign == 'Z' || sign == 'z') && pos + 1 == s.size()) {
      // UTC
    } else if (sign == '+' || sign == '-') {
      int oh = 0, om = 0;
      const std::string_view rest = s.substr(pos + 1);
      if (rest.size() == 5 && rest[2] == ':') {
        if (!read_int(rest, 0, 2, oh) || !read_int(rest, 3, 2, om)) bad_date(s);
      } else if (rest.size() == 4) {
        if (!read_int(rest, 0, 2, oh) || !read_int(rest, 2, 2, om)) bad_date(s);
      } else if (rest.size() == 2) {
        if (!read_int(rest, 0, 2, oh)) bad_date(s);
      } else {
        bad_date(s);
      }
      if (oh > 23 || om > 59) bad_date(s);
      offset_minutes = (sign == '+' ? 1 : -1) * (oh * 60 + om);
    } else {
      bad_date(s);
    }
  }
  const auto local = sys_days{ymd} + hours{hh} + minutes{mm};
  const auto utc = local - minutes{offset_minutes};
  return year_month_day{floor<days>(utc)};
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

std::string_view to_string(SentimentClass s) {
  switch (s) {
    case SentimentClass::VeryNegative: return "Very negative";
    case SentimentClass::Negative: return "Negative";
    case SentimentClass::Neutral: return "Neutral";
    case SentimentClass::Positive: return "Positive";
    case SentimentClass::VeryPositive: return "Very positive";
  }
  return "Neutral";
}

std::optional<SentimentClass> parse_sentiment(std::string_view name) {
  for (SentimentClass s : kAllSentiments) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view to_string(ReleaseCategory c) {
  switch (c) {
    case ReleaseCategory::Enhancement: return "Enhancement";
    case ReleaseCategory::NewFeatures: return "New Features";
    case ReleaseCategory::ResolvedIssues: return "Resolved Issues";
  }
  return "Enhancement";
}

std::optional<ReleaseCategory> parse_release_category(std::string_view name) {
  for (ReleaseCategory c : kAllReleaseCategories) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view to_string(ClassificationMode m) {
  return m == ClassificationMode::Entailment ? "entailment" : "masked";
}

std::optional<ClassificationMode> parse_classification_mode(std::string_view name) {
  if (name == "entailment") return ClassificationMode::Entailment;
  if (name == "masked") return ClassificationMode::MaskedVerbalizer;
  return std::nullopt;
}

}  // namespace rvs
