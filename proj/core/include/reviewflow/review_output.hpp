#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace reviewflow {

/// One validated output field: text, integer, or list of text.
using FieldValue =
    std::variant<std::string, long long, std::vector<std::string>>;

/// One agent's validated structured result for one row. Fields keep the
/// schema's declared order.
struct ReviewOutput {
  std::vector<std::pair<std::string, FieldValue>> fields;

  const FieldValue* find(std::string_view name) const;

  /// Flat JSON object, keys sorted, no insignificant whitespace. Stable
  /// byte-for-byte, which is what golden-file tests compare.
  std::string canonical_json() const;

  /// Rendering of one field for a table cell: text verbatim, integers in
  /// decimal, lists as a compact JSON array.
  std::string cell_text(std::string_view name) const;

  bool operator==(const ReviewOutput& other) const {
    return fields == other.fields;
  }
};

}  // namespace reviewflow
