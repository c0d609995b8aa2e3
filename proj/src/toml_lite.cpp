#include "rvs/toml_lite.hpp"

#include <charconv>

#include "rvs/error.hpp"

namespace rvs::toml {

void Table::set(std::string key, Value value) {
  if (find(key) != nullptr) {
    throw ValidationError("duplicate key '" + key + "'", value.line, key);
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

const Value* Table::find(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

namespace {

[[noreturn]] void type_error(std::string_view key, const Value& v, const char* expected) {
  throw ValidationError(std::string("expected ") + expected, v.line, std::string(key));
}

}  // namespace

std::optional<std::string> Table::get_string(std::string_view key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  if (!v->is_string()) type_error(key, *v, "a string");
  return std::get<std::string>(v->data);
}

std::optional<double> Table::get_number(std::string_view key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  if (const auto* i = std::get_if<std::int64_t>(&v->data)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v->data)) return *d;
  type_error(key, *v, "a number");
}

std::optional<std::int64_t> Table::get_integer(std::string_view key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  if (const auto* i = std::get_if<std::int64_t>(&v->data)) return *i;
  type_error(key, *v, "an integer");
}

std::optional<bool> Table::get_bool(std::string_view key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  if (const auto* b = std::get_if<bool>(&v->data)) return *b;
  type_error(key, *v, "a boolean");
}

std::optional<std::vector<std::string>> Table::get_string_array(std::string_view key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  if (!v->is_array()) type_error(key, *v, "an array of strings");
  std::vector<std::string> out;
  for (const Value& item : std::get<Array>(v->data)) {
    if (!item.is_string()) type_error(key, item, "an array of strings");
    out.push_back(std::get<std::string>(item.data));
  }
  return out;
}

const Table* Document::table(std::string_view name) const {
  auto it = tables.find(name);
  return it == tables.end() ? nullptr : &it->second;
}

const std::vector<Table>& Document::array_table(std::string_view name) const {
  static const std::vector<Table> empty;
  auto it = array_tables.find(name);
  return it == array_tables.end() ? empty : it->second;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Document run() {
    Document doc;
    Table* current = &doc.root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        current = header(doc);
      } else {
        std::size_t line = line_;
        std::string key = parse_key();
        skip_inline_ws();
        expect('=');
        skip_inline_ws();
        Value v = parse_value();
        v.line = line;
        current->set(std::move(key), std::move(v));
      }
      end_of_line();
    }
    return doc;
  }

 private:
  bool eof() const { return pos_ >= s_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0';
  }
  char get() {
    char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ValidationError(msg, line_); }

  void expect(char c) {
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }

  void skip_inline_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) get();
  }

  void skip_comment() {
    if (peek() == '#') {
      while (!eof() && peek() != '\n') get();
    }
  }

  void skip_blank_lines() {
    while (!eof()) {
      skip_inline_ws();
      skip_comment();
      if (peek() == '\r') get();
      if (!eof() && peek() == '\n') {
        get();
        continue;
      }
      break;
    }
  }

  // Whitespace, comments and newlines inside arrays.
  void skip_array_ws() {
    while (!eof()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
      } else if (c == '#') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  void end_of_line() {
    skip_inline_ws();
    skip_comment();
    if (peek() == '\r') get();
    if (eof()) return;
    if (peek() != '\n') fail("unexpected trailing characters");
    get();
  }

  Table* header(Document& doc) {
    std::size_t line = line_;
    get();
    bool array = false;
    if (peek() == '[') {
      get();
      array = true;
    }
    skip_inline_ws();
    std::string name = parse_key();
    skip_inline_ws();
    expect(']');
    if (array) expect(']');
    if (array) {
      auto& list = doc.array_tables[name];
      list.emplace_back();
      list.back().line = line;
      return &list.back();
    }
    if (doc.tables.contains(name)) fail("duplicate table [" + name + "]");
    Table& t = doc.tables[name];
    t.line = line;
    return &t;
  }

  static bool bare_key_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == '.';
  }

  std::string parse_key() {
    if (peek() == '"') return parse_string();
    std::string key;
    while (!eof() && bare_key_char(peek())) key.push_back(get());
    if (key.empty()) fail("expected a key");
    return key;
  }

  std::string parse_string() {
    expect('"');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = get();
      if (c == '"') break;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (eof()) fail("unterminated escape");
      char e = get();
      switch (e) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        default: fail(std::string("unsupported escape \\") + e);
      }
    }
    return out;
  }

  Value parse_value() {
    Value v;
    v.line = line_;
    char c = peek();
    if (c == '"') {
      v.data = parse_string();
    } else if (c == '[') {
      get();
      Array items;
      skip_array_ws();
      while (peek() != ']') {
        items.push_back(parse_value());
        skip_array_ws();
        if (peek() == ',') {
          get();
          skip_array_ws();
        } else if (peek() != ']') {
          fail("expected ',' or ']' in array");
        }
      }
      get();
      v.data = std::move(items);
    } else if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      v.data = true;
    } else if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      v.data = false;
    } else {
      v.data = parse_number();
    }
    return v;
  }

  std::variant<std::string, std::int64_t, double, bool, Array> parse_number() {
    std::string tok;
    while (!eof()) {
      char c = peek();
      if ((c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.' || c == 'e' || c == 'E' ||
          c == '_') {
        if (c != '_') tok.push_back(c);
        get();
      } else {
        break;
      }
    }
    if (tok.empty()) fail("expected a value");
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (*first == '+') ++first;
    if (tok.find_first_of(".eE") == std::string::npos) {
      std::int64_t i = 0;
      auto [ptr, ec] = std::from_chars(first, last, i);
      if (ec != std::errc() || ptr != last) fail("malformed integer '" + tok + "'");
      return i;
    }
    double d = 0;
    auto [ptr, ec] = std::from_chars(first, last, d);
    if (ec != std::errc() || ptr != last) fail("malformed number '" + tok + "'");
    return d;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

}  // namespace

Document parse(std::string_view text) { return Parser(text).run(); }

}  // namespace rvs::toml
