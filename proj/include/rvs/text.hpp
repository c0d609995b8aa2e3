#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace rvs::text {

using StopwordSet = std::set<std::string, std::less<>>;

/// The fixed 30-word list shared by the stub backend and the keyphrase
/// extractor.
const StopwordSet& default_stopwords();

/// ASCII-only lowercasing; bytes outside A-Z pass through untouched so the
/// result never depends on the process locale.
std::string ascii_lower(std::string_view s);

std::string_view trim(std::string_view s);

bool is_ascii_alnum(unsigned char c);

/// Word byte for tokenization: ASCII alphanumerics and any byte of a
/// multi-byte UTF-8 sequence.
inline bool is_word_byte(unsigned char c) { return is_ascii_alnum(c) || c >= 0x80; }

/// Lowercases and splits on every non-word byte.
std::vector<std::string> tokenize(std::string_view s);

/// tokenize() minus stopwords.
std::vector<std::string> content_tokens(std::string_view s,
                                        const StopwordSet& stopwords = default_stopwords());

std::uint64_t fnv1a64(std::string_view s);

bool starts_with_upper(std::string_view word);

/// Replaces every occurrence of `from` (non-empty) with `to`.
std::string replace_all(std::string_view s, std::string_view from, std::string_view to);

std::size_t count_occurrences(std::string_view haystack, std::string_view needle);

}  // namespace rvs::text
