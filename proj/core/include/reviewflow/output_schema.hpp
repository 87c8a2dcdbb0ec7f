#pragma once

#include <string>
#include <utility>
#include <vector>

#include "reviewflow/review_output.hpp"

namespace reviewflow {

/// Declared kind for one output field.
struct FieldKind {
  enum class Tag { text, integer, integer_in_set, integer_in_range, list_of_text };

  static FieldKind text(bool nonempty = false);
  static FieldKind integer();
  static FieldKind integer_in_set(std::vector<long long> allowed);
  static FieldKind integer_in_range(long long lo, long long hi);
  static FieldKind list_of_text();

  /// Compact spelling: "text", "integer", "integer_in_set(1,2,3)",
  /// "integer_in_range(0,100)", "list_of_text". Parse accepts the same forms.
  std::string to_string() const;
  static FieldKind parse(const std::string& spec);  // throws on bad spec

  bool operator==(const FieldKind& other) const = default;

  Tag tag = Tag::text;
  bool nonempty = false;             // text only
  std::vector<long long> allowed;    // integer_in_set, ascending
  long long lo = 0, hi = 0;          // integer_in_range
};

/// Ordered field-name -> kind contract for an agent's structured response.
struct OutputSchema {
  std::vector<std::pair<std::string, FieldKind>> fields;

  bool has_field(std::string_view name) const;
  const FieldKind* find(std::string_view name) const;

  /// One-line instruction fragment spelling out the required JSON fields,
  /// embedded at the end of every prompt.
  std::string describe_for_prompt() const;

  /// Parses raw model text and validates it against this schema. Tolerates a
  /// single ```-fenced block around the object but nothing else. On failure
  /// returns the human-readable violation via `error`.
  bool parse_and_validate(const std::string& raw_text, ReviewOutput& out,
                          std::string& error) const;

  bool operator==(const OutputSchema& other) const = default;
};

}  // namespace reviewflow
