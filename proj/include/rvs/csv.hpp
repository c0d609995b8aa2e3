#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rvs::csv {

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line on which the record starts
};

/// RFC 4180 reader: quoted fields may hold commas, doubled quotes and line
/// breaks. Blank lines are skipped. Throws ValidationError on an unterminated
/// quote or on text after a closing quote.
std::vector<Record> parse(std::string_view text);

/// Quotes a field when it holds a comma, quote or line break.
std::string escape(std::string_view field);

}  // namespace rvs::csv
