#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "reviewflow/decimal.hpp"
#include "reviewflow/errors.hpp"
#include "reviewflow/table.hpp"

namespace reviewflow {

/// Syntax error with a 1-based character position into the source text.
class FilterParseError : public Error {
 public:
  FilterParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class FilterEvalError : public Error {
 public:
  enum class Kind { unknown_column, type_error };

  FilterEvalError(Kind kind, const std::string& message)
      : Error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class CompareOp { eq, ne, lt, le, gt, ge };

/// A comparison operand: bare column reference, quoted string, or decimal
/// number literal.
struct Operand {
  enum class Kind { column, string_lit, number_lit };

  static Operand column(std::string name);
  static Operand string_lit(std::string value);
  static Operand number_lit(Decimal value);

  bool operator==(const Operand& other) const;

  Kind kind = Kind::column;
  std::string text;  // column name or string value
  Decimal number;    // number_lit only
};

namespace detail {
struct FilterNode;
}

/// Serializable boolean filter over row cells.
///
/// Grammar (keywords lowercase, `not` > `and` > `or`, comparisons
/// non-associative):
///
///   expr    := or
///   or      := and ("or" and)*
///   and     := unary ("and" unary)*
///   unary   := "not" unary | cmp
///   cmp     := operand OPER operand | "(" expr ")"
///   operand := COLUMN | STRING | NUMBER
///
/// Column tokens match [A-Za-z0-9_.-]+; a token that parses as a decimal
/// number is a number literal, so `round-A_Alice_evaluation != 3` reads the
/// way it looks.
class FilterExpr {
 public:
  /// Looks up a cell by column name; nullptr means the column is unknown.
  using CellLookup = std::function<const Cell*(std::string_view)>;

  FilterExpr() = default;
  bool valid() const { return root_ != nullptr; }

  static FilterExpr parse(std::string_view source);

  static FilterExpr compare(CompareOp op, Operand lhs, Operand rhs);
  static FilterExpr logical_and(FilterExpr lhs, FilterExpr rhs);
  static FilterExpr logical_or(FilterExpr lhs, FilterExpr rhs);
  static FilterExpr logical_not(FilterExpr operand);

  /// Canonical source form; parse(to_string()) is structurally identical.
  std::string to_string() const;

  /// Evaluation rules: both operands numeric -> numeric comparison; ==/!= on
  /// non-numeric text -> exact string comparison; ordering on non-numeric ->
  /// type_error; any comparison touching a null cell is false.
  bool evaluate(const CellLookup& lookup) const;
  bool evaluate(const ReviewTable& table, std::size_t row) const;
  bool evaluate(const std::map<std::string, Cell>& row) const;

  /// Structural tree equality (number literals compared as exact decimals).
  bool operator==(const FilterExpr& other) const;

  /// Distinct column names referenced anywhere in the tree, in first-use order.
  std::vector<std::string> referenced_columns() const;

 private:
  explicit FilterExpr(std::shared_ptr<const detail::FilterNode> root)
      : root_(std::move(root)) {}

  std::shared_ptr<const detail::FilterNode> root_;
};

}  // namespace reviewflow
