#include "reviewflow/filter.hpp"

#include <cassert>
#include <cctype>
#include <optional>
#include <stdexcept>

namespace reviewflow {

Operand Operand::column(std::string name) {
  Operand o;
  o.kind = Kind::column;
  o.text = std::move(name);
  return o;
}

Operand Operand::string_lit(std::string value) {
  Operand o;
  o.kind = Kind::string_lit;
  o.text = std::move(value);
  return o;
}

Operand Operand::number_lit(Decimal value) {
  Operand o;
  o.kind = Kind::number_lit;
  o.number = value;
  return o;
}

bool Operand::operator==(const Operand& other) const {
  if (kind != other.kind) return false;
  if (kind == Kind::number_lit) return number == other.number;
  return text == other.text;
}

namespace detail {

struct FilterNode {
  enum class Type { compare, logical_and, logical_or, logical_not };

  Type type;
  // compare
  CompareOp op = CompareOp::eq;
  Operand lhs, rhs;
  // logical
  std::shared_ptr<const FilterNode> a, b;
};

using NodePtr = std::shared_ptr<const FilterNode>;

}  // namespace detail

namespace {

using detail::FilterNode;
using detail::NodePtr;

// ---------------------------------------------------------------------------
// Lexer

enum class TokType { word, number, string, oper, lparen, rparen, end };

struct Token {
  TokType type;
  std::string text;     // word/string payload, or operator spelling
  Decimal number;       // number tokens
  CompareOp op{};       // oper tokens
  std::size_t pos = 0;  // 1-based position of first character
};

bool is_word_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  while (i < n) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t pos = i + 1;
    if (c == '(') {
      out.push_back({TokType::lparen, "(", {}, {}, pos});
      ++i;
      continue;
    }
    if (c == ')') {
      out.push_back({TokType::rparen, ")", {}, {}, pos});
      ++i;
      continue;
    }
    if (c == '=' || c == '!' || c == '<' || c == '>') {
      CompareOp op;
      std::string spelled;
      if (c == '=' || c == '!') {
        if (i + 1 >= n || src[i + 1] != '=') {
          throw FilterParseError(
              std::string("expected '") + c + "=' operator", pos);
        }
        op = c == '=' ? CompareOp::eq : CompareOp::ne;
        spelled = {c, '='};
        i += 2;
      } else {
        const bool with_eq = i + 1 < n && src[i + 1] == '=';
        if (c == '<') {
          op = with_eq ? CompareOp::le : CompareOp::lt;
        } else {
          op = with_eq ? CompareOp::ge : CompareOp::gt;
        }
        spelled = with_eq ? std::string{c, '='} : std::string{c};
        i += with_eq ? 2 : 1;
      }
      out.push_back({TokType::oper, spelled, {}, op, pos});
      continue;
    }
    if (c == '"' || c == '\'') {
      const char quote = c;
      std::string value;
      ++i;
      bool closed = false;
      while (i < n) {
        const char d = src[i];
        if (d == '\\') {
          if (i + 1 >= n) throw FilterParseError("dangling escape", i + 1);
          const char e = src[i + 1];
          switch (e) {
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            case 'r': value += '\r'; break;
            case '\\': value += '\\'; break;
            case '"': value += '"'; break;
            case '\'': value += '\''; break;
            default:
              throw FilterParseError("unknown escape '\\" + std::string(1, e) +
                                         "'",
                                     i + 1);
          }
          i += 2;
          continue;
        }
        if (d == quote) {
          closed = true;
          ++i;
          break;
        }
        value += d;
        ++i;
      }
      if (!closed) throw FilterParseError("unterminated string", pos);
      out.push_back({TokType::string, std::move(value), {}, {}, pos});
      continue;
    }
    if (is_word_char(c)) {
      std::size_t j = i;
      while (j < n && is_word_char(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      if (auto num = Decimal::parse(word)) {
        out.push_back({TokType::number, std::move(word), *num, {}, pos});
      } else {
        out.push_back({TokType::word, std::move(word), {}, {}, pos});
      }
      i = j;
      continue;
    }
    throw FilterParseError("unexpected character '" + std::string(1, c) + "'",
                           pos);
  }
  out.push_back({TokType::end, "", {}, {}, n + 1});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  NodePtr parse() {
    NodePtr expr = parse_or();
    if (peek().type != TokType::end) {
      throw FilterParseError("unexpected trailing input", peek().pos);
    }
    return expr;
  }

 private:
  const Token& peek() const { return tokens_[cursor_]; }
  Token take() { return tokens_[cursor_++]; }

  bool at_keyword(std::string_view kw) const {
    return peek().type == TokType::word && peek().text == kw;
  }

  NodePtr parse_or() {
    NodePtr lhs = parse_and();
    while (at_keyword("or")) {
      take();
      NodePtr rhs = parse_and();
      auto node = std::make_shared<FilterNode>();
      node->type = FilterNode::Type::logical_or;
      node->a = std::move(lhs);
      node->b = std::move(rhs);
      lhs = std::move(node);
    }
    return lhs;
  }

  NodePtr parse_and() {
    NodePtr lhs = parse_unary();
    while (at_keyword("and")) {
      take();
      NodePtr rhs = parse_unary();
      auto node = std::make_shared<FilterNode>();
      node->type = FilterNode::Type::logical_and;
      node->a = std::move(lhs);
      node->b = std::move(rhs);
      lhs = std::move(node);
    }
    return lhs;
  }

  NodePtr parse_unary() {
    if (at_keyword("not")) {
      take();
      auto node = std::make_shared<FilterNode>();
      node->type = FilterNode::Type::logical_not;
      node->a = parse_unary();
      return node;
    }
    return parse_cmp();
  }

  NodePtr parse_cmp() {
    if (peek().type == TokType::lparen) {
      take();
      NodePtr inner = parse_or();
      if (peek().type != TokType::rparen) {
        throw FilterParseError("expected ')'", peek().pos);
      }
      take();
      return inner;
    }
    Operand lhs = parse_operand();
    if (peek().type != TokType::oper) {
      throw FilterParseError("expected comparison operator", peek().pos);
    }
    const CompareOp op = take().op;
    Operand rhs = parse_operand();
    auto node = std::make_shared<FilterNode>();
    node->type = FilterNode::Type::compare;
    node->op = op;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
  }

  Operand parse_operand() {
    const Token& t = peek();
    switch (t.type) {
      case TokType::word: {
        if (t.text == "and" || t.text == "or" || t.text == "not") {
          throw FilterParseError("'" + t.text + "' is a reserved word", t.pos);
        }
        return Operand::column(take().text);
      }
      case TokType::string:
        return Operand::string_lit(take().text);
      case TokType::number: {
        Token tok = take();
        return Operand::number_lit(tok.number);
      }
      default:
        throw FilterParseError("expected column, string, or number", t.pos);
    }
  }

  std::vector<Token> tokens_;
  std::size_t cursor_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

const char* op_spelling(CompareOp op) {
  switch (op) {
    case CompareOp::eq: return "==";
    case CompareOp::ne: return "!=";
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
  }
  return "==";
}

std::string quote_string(const std::string& value) {
  std::string out = "\"";
  for (char c : value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string print_operand(const Operand& o) {
  switch (o.kind) {
    case Operand::Kind::column: return o.text;
    case Operand::Kind::string_lit: return quote_string(o.text);
    case Operand::Kind::number_lit: return o.number.to_string();
  }
  return o.text;
}

int precedence(const FilterNode& n) {
  switch (n.type) {
    case FilterNode::Type::logical_or: return 1;
    case FilterNode::Type::logical_and: return 2;
    case FilterNode::Type::logical_not: return 3;
    case FilterNode::Type::compare: return 4;
  }
  return 4;
}

void print_node(const FilterNode& n, std::string& out) {
  auto child = [&](const FilterNode& c, int min_prec) {
    if (precedence(c) < min_prec) {
      out += '(';
      print_node(c, out);
      out += ')';
    } else {
      print_node(c, out);
    }
  };
  switch (n.type) {
    case FilterNode::Type::compare:
      out += print_operand(n.lhs);
      out += ' ';
      out += op_spelling(n.op);
      out += ' ';
      out += print_operand(n.rhs);
      return;
    case FilterNode::Type::logical_not:
      out += "not ";
      child(*n.a, 3);
      return;
    case FilterNode::Type::logical_and:
      // left-associative: the left child may be another `and` bare
      child(*n.a, 2);
      out += " and ";
      child(*n.b, 3);
      return;
    case FilterNode::Type::logical_or:
      child(*n.a, 1);
      out += " or ";
      child(*n.b, 2);
      return;
  }
}

// ---------------------------------------------------------------------------
// Evaluation

struct ResolvedOperand {
  bool null = false;
  std::string text;
  std::optional<Decimal> number;
};

ResolvedOperand resolve(const Operand& o, const FilterExpr::CellLookup& row) {
  ResolvedOperand r;
  switch (o.kind) {
    case Operand::Kind::column: {
      const Cell* cell = row(o.text);
      if (cell == nullptr) {
        throw FilterEvalError(FilterEvalError::Kind::unknown_column,
                              "unknown column '" + o.text + "'");
      }
      if (!cell->has_value()) {
        r.null = true;
        return r;
      }
      r.text = **cell;
      r.number = Decimal::parse(r.text);
      return r;
    }
    case Operand::Kind::string_lit:
      r.text = o.text;
      r.number = Decimal::parse(r.text);
      return r;
    case Operand::Kind::number_lit:
      r.number = o.number;
      r.text = o.number.to_string();
      return r;
  }
  return r;
}

bool eval_compare(const FilterNode& n, const FilterExpr::CellLookup& row) {
  const ResolvedOperand a = resolve(n.lhs, row);
  const ResolvedOperand b = resolve(n.rhs, row);
  // null absorbs: any comparison with a missing cell is false
  if (a.null || b.null) return false;
  if (a.number && b.number) {
    const auto cmp = *a.number <=> *b.number;
    switch (n.op) {
      case CompareOp::eq: return cmp == 0;
      case CompareOp::ne: return cmp != 0;
      case CompareOp::lt: return cmp < 0;
      case CompareOp::le: return cmp <= 0;
      case CompareOp::gt: return cmp > 0;
      case CompareOp::ge: return cmp >= 0;
    }
  }
  switch (n.op) {
    case CompareOp::eq: return a.text == b.text;
    case CompareOp::ne: return a.text != b.text;
    default:
      throw FilterEvalError(
          FilterEvalError::Kind::type_error,
          "ordering comparison on non-numeric operands ('" + a.text + "' " +
              op_spelling(n.op) + " '" + b.text + "')");
  }
}

bool eval_node(const FilterNode& n, const FilterExpr::CellLookup& row) {
  switch (n.type) {
    case FilterNode::Type::compare: return eval_compare(n, row);
    case FilterNode::Type::logical_not: return !eval_node(*n.a, row);
    case FilterNode::Type::logical_and:
      return eval_node(*n.a, row) && eval_node(*n.b, row);
    case FilterNode::Type::logical_or:
      return eval_node(*n.a, row) || eval_node(*n.b, row);
  }
  return false;
}

bool nodes_equal(const FilterNode& a, const FilterNode& b) {
  if (a.type != b.type) return false;
  switch (a.type) {
    case FilterNode::Type::compare:
      return a.op == b.op && a.lhs == b.lhs && a.rhs == b.rhs;
    case FilterNode::Type::logical_not:
      return nodes_equal(*a.a, *b.a);
    case FilterNode::Type::logical_and:
    case FilterNode::Type::logical_or:
      return nodes_equal(*a.a, *b.a) && nodes_equal(*a.b, *b.b);
  }
  return false;
}

void collect_columns(const FilterNode& n, std::vector<std::string>& out) {
  auto add = [&](const Operand& o) {
    if (o.kind != Operand::Kind::column) return;
    for (const auto& seen : out) {
      if (seen == o.text) return;
    }
    out.push_back(o.text);
  };
  switch (n.type) {
    case FilterNode::Type::compare:
      add(n.lhs);
      add(n.rhs);
      return;
    case FilterNode::Type::logical_not:
      collect_columns(*n.a, out);
      return;
    case FilterNode::Type::logical_and:
    case FilterNode::Type::logical_or:
      collect_columns(*n.a, out);
      collect_columns(*n.b, out);
      return;
  }
}

}  // namespace

FilterExpr FilterExpr::parse(std::string_view source) {
  auto tokens = tokenize(source);
  if (tokens.size() == 1) {
    throw FilterParseError("empty filter expression", 1);
  }
  return FilterExpr(Parser(std::move(tokens)).parse());
}

FilterExpr FilterExpr::compare(CompareOp op, Operand lhs, Operand rhs) {
  if (lhs.kind == Operand::Kind::column && !is_column_name(lhs.text)) {
    throw std::invalid_argument("bad column name '" + lhs.text + "'");
  }
  if (rhs.kind == Operand::Kind::column && !is_column_name(rhs.text)) {
    throw std::invalid_argument("bad column name '" + rhs.text + "'");
  }
  auto node = std::make_shared<FilterNode>();
  node->type = FilterNode::Type::compare;
  node->op = op;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return FilterExpr(std::move(node));
}

FilterExpr FilterExpr::logical_and(FilterExpr lhs, FilterExpr rhs) {
  auto node = std::make_shared<FilterNode>();
  node->type = FilterNode::Type::logical_and;
  node->a = std::move(lhs.root_);
  node->b = std::move(rhs.root_);
  return FilterExpr(std::move(node));
}

FilterExpr FilterExpr::logical_or(FilterExpr lhs, FilterExpr rhs) {
  auto node = std::make_shared<FilterNode>();
  node->type = FilterNode::Type::logical_or;
  node->a = std::move(lhs.root_);
  node->b = std::move(rhs.root_);
  return FilterExpr(std::move(node));
}

FilterExpr FilterExpr::logical_not(FilterExpr operand) {
  auto node = std::make_shared<FilterNode>();
  node->type = FilterNode::Type::logical_not;
  node->a = std::move(operand.root_);
  return FilterExpr(std::move(node));
}

std::string FilterExpr::to_string() const {
  if (!root_) return "";
  std::string out;
  print_node(*root_, out);
  return out;
}

bool FilterExpr::evaluate(const CellLookup& lookup) const {
  if (!root_) throw std::logic_error("evaluating an empty FilterExpr");
  return eval_node(*root_, lookup);
}

bool FilterExpr::evaluate(const ReviewTable& table, std::size_t row) const {
  return evaluate([&](std::string_view column) -> const Cell* {
    if (!table.has_column(column)) return nullptr;
    return &table.cell(row, table.column_index(column));
  });
}

bool FilterExpr::evaluate(const std::map<std::string, Cell>& row) const {
  return evaluate([&](std::string_view column) -> const Cell* {
    auto it = row.find(std::string(column));
    return it == row.end() ? nullptr : &it->second;
  });
}

bool FilterExpr::operator==(const FilterExpr& other) const {
  if (!root_ || !other.root_) return root_ == other.root_;
  return nodes_equal(*root_, *other.root_);
}

std::vector<std::string> FilterExpr::referenced_columns() const {
  std::vector<std::string> out;
  if (root_) collect_columns(*root_, out);
  return out;
}

}  // namespace reviewflow
