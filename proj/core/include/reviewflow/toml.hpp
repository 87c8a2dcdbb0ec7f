#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reviewflow/decimal.hpp"
#include "reviewflow/errors.hpp"

namespace reviewflow::toml {

/// Parse error carrying a 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// One parsed value. Decimal literals keep their exact base-10 value, so a
/// price like 0.15e-6 survives config round-trips without float drift.
struct Value {
  enum class Kind { string, integer, decimal, boolean, array, table };

  Kind kind = Kind::string;
  std::string str;
  long long integer = 0;
  Decimal decimal;
  bool boolean = false;
  std::vector<Value> array;
  std::vector<std::pair<std::string, Value>> table;  // insertion order
  std::size_t line = 0;

  const char* kind_name() const;
  // checked accessors; throw ParseError at this value's line
  const std::string& as_string() const;
  long long as_integer() const;
  Decimal as_decimal() const;  // integers widen to decimal
  bool as_boolean() const;
  const std::vector<Value>& as_array() const;
  const std::vector<std::pair<std::string, Value>>& as_table() const;
};

/// A `[name]` or `[[name]]` block with its key/value entries in file order.
struct Section {
  std::string name;
  bool is_array = false;
  std::size_t line = 0;
  std::vector<std::pair<std::string, Value>> entries;

  const Value* find(std::string_view key) const;
};

struct Document {
  std::vector<Section> sections;
};

/// Parses the supported TOML subset: [section] / [[section]] headers,
/// key = value entries, basic and '''/"""-style strings, integers, decimals,
/// booleans, arrays (multi-line allowed), inline tables, and # comments.
Document parse(std::string_view text);

/// Serialization helpers shared with the canonical config writer.
std::string escape_string(const std::string& value);

}  // namespace reviewflow::toml
