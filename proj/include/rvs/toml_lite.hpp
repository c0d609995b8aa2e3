#pragma once

// Reader for the flat TOML subset used by every configuration file in this
// project. The grammar is documented in docs/config-format.md.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rvs::toml {

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<std::string, std::int64_t, double, bool, Array> data;
  std::size_t line = 0;

  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_array() const { return std::holds_alternative<Array>(data); }
  bool is_number() const {
    return std::holds_alternative<std::int64_t>(data) || std::holds_alternative<double>(data);
  }
};

class Table {
 public:
  /// Throws ValidationError on a duplicate key.
  void set(std::string key, Value value);

  const Value* find(std::string_view key) const;
  bool contains(std::string_view key) const { return find(key) != nullptr; }
  const std::vector<std::pair<std::string, Value>>& entries() const { return entries_; }

  // Typed accessors; all throw ValidationError naming the key and line when
  // the key exists with the wrong type.
  std::optional<std::string> get_string(std::string_view key) const;
  std::optional<double> get_number(std::string_view key) const;
  std::optional<std::int64_t> get_integer(std::string_view key) const;
  std::optional<bool> get_bool(std::string_view key) const;
  std::optional<std::vector<std::string>> get_string_array(std::string_view key) const;

  std::size_t line = 0;  // line of the header, 0 for the root table

 private:
  std::vector<std::pair<std::string, Value>> entries_;
};

struct Document {
  Table root;
  std::map<std::string, Table, std::less<>> tables;
  std::map<std::string, std::vector<Table>, std::less<>> array_tables;

  const Table* table(std::string_view name) const;
  const std::vector<Table>& array_table(std::string_view name) const;
};

/// Throws ValidationError with the offending line on syntax errors.
Document parse(std::string_view text);

}  // namespace rvs::toml
