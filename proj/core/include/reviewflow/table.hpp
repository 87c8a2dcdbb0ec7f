#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "reviewflow/errors.hpp"

namespace reviewflow {

/// One table cell. nullopt means "not produced" (row skipped by a filter or
/// a failed call), which is distinct from an agent returning empty text.
using Cell = std::optional<std::string>;

/// Ordered rows of named string-valued columns. Immutable by convention once
/// published: the engine builds a table single-owner, then shares it freely.
class ReviewTable {
 public:
  ReviewTable() = default;

  /// Column names must be unique and nonempty.
  explicit ReviewTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t column_count() const { return columns_.size(); }
  std::size_t row_count() const { return rows_.size(); }

  bool has_column(std::string_view name) const;
  std::size_t column_index(std::string_view name) const;  // throws TableError

  /// Row must match the column count exactly.
  void add_row(std::vector<Cell> row);

  const Cell& cell(std::size_t row, std::size_t col) const;
  const Cell& cell(std::size_t row, std::string_view column) const;
  const std::vector<Cell>& row(std::size_t i) const { return rows_.at(i); }

  bool operator==(const ReviewTable& other) const {
    return columns_ == other.columns_ && rows_ == other.rows_;
  }

 private:
  std::vector<std::string> columns_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<Cell>> rows_;
};

/// "round-{round_id}_{agent_name}_{field}", the column produced by one agent
/// field in one round. Concatenation is one-way and never parsed back.
std::string make_column_name(std::string_view round_id,
                             std::string_view agent_name,
                             std::string_view field);

/// Returns a new table with the original columns unchanged plus the given
/// columns appended in order. Each value vector must match the row count;
/// a name collision with an existing column is a hard error.
ReviewTable append_columns(
    const ReviewTable& table,
    const std::vector<std::pair<std::string, std::vector<Cell>>>& new_columns);

/// True for `[A-Za-z0-9_-]+`, the identifier alphabet for agent names and
/// output fields (keeps make_column_name unambiguous in practice).
bool is_identifier(std::string_view text);

/// True for `[A-Za-z0-9]+`, the round-id alphabet.
bool is_round_id(std::string_view text);

/// True for `[A-Za-z0-9_.-]+`, the set of column names a filter can reference.
bool is_column_name(std::string_view text);

}  // namespace reviewflow
