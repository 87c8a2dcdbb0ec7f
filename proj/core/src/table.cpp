#include "reviewflow/table.hpp"

#include <algorithm>

namespace reviewflow {

ReviewTable::ReviewTable(std::vector<std::string> columns)
    : columns_(std::move(columns)) {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].empty()) {
      throw TableError("column name must be nonempty");
    }
    if (!index_.emplace(columns_[i], i).second) {
      throw TableError("duplicate column '" + columns_[i] + "'");
    }
  }
}

bool ReviewTable::has_column(std::string_view name) const {
  return index_.find(std::string(name)) != index_.end();
}

std::size_t ReviewTable::column_index(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    throw TableError("no such column '" + std::string(name) + "'");
  }
  return it->second;
}

void ReviewTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw TableError("row has " + std::to_string(row.size()) +
                     " cells, table has " + std::to_string(columns_.size()) +
                     " columns");
  }
  rows_.push_back(std::move(row));
}

const Cell& ReviewTable::cell(std::size_t row, std::size_t col) const {
  return rows_.at(row).at(col);
}

const Cell& ReviewTable::cell(std::size_t row, std::string_view column) const {
  return rows_.at(row).at(column_index(column));
}

std::string make_column_name(std::string_view round_id,
                             std::string_view agent_name,
                             std::string_view field) {
  if (round_id.empty() || agent_name.empty() || field.empty()) {
    throw TableError("make_column_name: empty part");
  }
  std::string out;
  out.reserve(6 + round_id.size() + 1 + agent_name.size() + 1 + field.size());
  out += "round-";
  out += round_id;
  out += '_';
  out += agent_name;
  out += '_';
  out += field;
  return out;
}

ReviewTable append_columns(
    const ReviewTable& table,
    const std::vector<std::pair<std::string, std::vector<Cell>>>& new_columns) {
  std::vector<std::string> names = table.columns();
  for (const auto& [name, values] : new_columns) {
    if (table.has_column(name)) {
      throw TableError("column '" + name + "' already exists");
    }
    if (values.size() != table.row_count()) {
      throw TableError("column '" + name + "' has " +
                       std::to_string(values.size()) + " values for " +
                       std::to_string(table.row_count()) + " rows");
    }
    names.push_back(name);
  }
  ReviewTable out(std::move(names));
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    std::vector<Cell> row = table.row(r);
    row.reserve(row.size() + new_columns.size());
    for (const auto& [name, values] : new_columns) {
      row.push_back(values[r]);
    }
    out.add_row(std::move(row));
  }
  return out;
}

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

bool is_round_id(std::string_view text) {
  if (text.empty()) return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
           (c >= '0' && c <= '9');
  });
}

bool is_column_name(std::string_view text) {
  if (text.empty()) return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
  });
}

}  // namespace reviewflow
