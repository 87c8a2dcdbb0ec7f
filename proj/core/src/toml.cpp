#include "reviewflow/toml.hpp"

#include <cctype>

namespace reviewflow::toml {

const char* Value::kind_name() const {
  switch (kind) {
    case Kind::string: return "string";
    case Kind::integer: return "integer";
    case Kind::decimal: return "decimal";
    case Kind::boolean: return "boolean";
    case Kind::array: return "array";
    case Kind::table: return "table";
  }
  return "value";
}

const std::string& Value::as_string() const {
  if (kind != Kind::string) {
    throw ParseError(std::string("expected a string, got ") + kind_name(), line);
  }
  return str;
}

long long Value::as_integer() const {
  if (kind != Kind::integer) {
    throw ParseError(std::string("expected an integer, got ") + kind_name(),
                     line);
  }
  return integer;
}

Decimal Value::as_decimal() const {
  if (kind == Kind::integer) return Decimal::from_int(integer);
  if (kind != Kind::decimal) {
    throw ParseError(std::string("expected a number, got ") + kind_name(), line);
  }
  return decimal;
}

bool Value::as_boolean() const {
  if (kind != Kind::boolean) {
    throw ParseError(std::string("expected a boolean, got ") + kind_name(),
                     line);
  }
  return boolean;
}

const std::vector<Value>& Value::as_array() const {
  if (kind != Kind::array) {
    throw ParseError(std::string("expected an array, got ") + kind_name(), line);
  }
  return array;
}

const std::vector<std::pair<std::string, Value>>& Value::as_table() const {
  if (kind != Kind::table) {
    throw ParseError(std::string("expected an inline table, got ") + kind_name(),
                     line);
  }
  return table;
}

const Value* Section::find(std::string_view key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

namespace {

bool is_bare_key_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
}

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char peek_at(std::size_t offset) const {
    return pos_ + offset < text_.size() ? text_[pos_ + offset] : '\0';
  }
  std::size_t line() const { return line_; }

  char take() {
    const char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  bool take_if(char c) {
    if (!eof() && peek() == c) {
      take();
      return true;
    }
    return false;
  }

  /// Skips spaces and tabs (not newlines).
  void skip_inline_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) take();
  }

  /// Skips whitespace, newlines, and comments.
  void skip_ws_and_comments() {
    for (;;) {
      if (eof()) return;
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        take();
      } else if (c == '#') {
        while (!eof() && peek() != '\n') take();
      } else {
        return;
      }
    }
  }

  /// Consumes the rest of the current line, requiring only whitespace or a
  /// comment before the newline.
  void expect_end_of_line() {
    skip_inline_ws();
    if (eof()) return;
    if (peek() == '#') {
      while (!eof() && peek() != '\n') take();
    }
    if (eof()) return;
    if (peek() == '\r') take();
    if (eof()) return;
    if (peek() != '\n') {
      throw ParseError("unexpected text after value", line_);
    }
    take();
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

std::string parse_basic_string(Cursor& cur) {
  const std::size_t start_line = cur.line();
  cur.take();  // opening quote
  std::string out;
  for (;;) {
    if (cur.eof()) throw ParseError("unterminated string", start_line);
    const char c = cur.take();
    if (c == '"') return out;
    if (c == '\n') throw ParseError("newline in basic string", start_line);
    if (c == '\\') {
      if (cur.eof()) throw ParseError("dangling escape", cur.line());
      const char e = cur.take();
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default:
          throw ParseError("unsupported escape '\\" + std::string(1, e) + "'",
                           cur.line());
      }
      continue;
    }
    out += c;
  }
}

std::string parse_multiline_string(Cursor& cur, char quote) {
  const std::size_t start_line = cur.line();
  cur.take();
  cur.take();
  cur.take();  // opening delimiter
  // a newline immediately after the opening delimiter is trimmed
  if (cur.peek_at(0) == '\r' && cur.peek_at(1) == '\n') {
    cur.take();
    cur.take();
  } else if (!cur.eof() && cur.peek() == '\n') {
    cur.take();
  }
  std::string out;
  for (;;) {
    if (cur.eof()) throw ParseError("unterminated multi-line string", start_line);
    if (cur.peek_at(0) == quote && cur.peek_at(1) == quote &&
        cur.peek_at(2) == quote) {
      cur.take();
      cur.take();
      cur.take();
      return out;
    }
    out += cur.take();
  }
}

std::string parse_literal_string(Cursor& cur) {
  const std::size_t start_line = cur.line();
  cur.take();  // '
  std::string out;
  for (;;) {
    if (cur.eof()) throw ParseError("unterminated string", start_line);
    const char c = cur.take();
    if (c == '\'') return out;
    if (c == '\n') throw ParseError("newline in literal string", start_line);
    out += c;
  }
}

Value parse_value(Cursor& cur);

Value parse_array(Cursor& cur) {
  Value v;
  v.kind = Value::Kind::array;
  v.line = cur.line();
  cur.take();  // [
  for (;;) {
    cur.skip_ws_and_comments();
    if (cur.eof()) throw ParseError("unterminated array", v.line);
    if (cur.take_if(']')) return v;
    v.array.push_back(parse_value(cur));
    cur.skip_ws_and_comments();
    if (cur.take_if(',')) continue;
    if (cur.take_if(']')) return v;
    throw ParseError("expected ',' or ']' in array", cur.line());
  }
}

Value parse_inline_table(Cursor& cur) {
  Value v;
  v.kind = Value::Kind::table;
  v.line = cur.line();
  cur.take();  // {
  for (;;) {
    cur.skip_ws_and_comments();
    if (cur.eof()) throw ParseError("unterminated inline table", v.line);
    if (cur.take_if('}')) return v;
    std::string key;
    while (!cur.eof() && is_bare_key_char(cur.peek())) key += cur.take();
    if (key.empty()) throw ParseError("expected key in inline table", cur.line());
    cur.skip_inline_ws();
    if (!cur.take_if('=')) throw ParseError("expected '=' after key", cur.line());
    cur.skip_inline_ws();
    v.table.emplace_back(std::move(key), parse_value(cur));
    cur.skip_ws_and_comments();
    if (cur.take_if(',')) continue;
    if (cur.take_if('}')) return v;
    throw ParseError("expected ',' or '}' in inline table", cur.line());
  }
}

Value parse_value(Cursor& cur) {
  cur.skip_inline_ws();
  if (cur.eof()) throw ParseError("expected a value", cur.line());
  const char c = cur.peek();
  Value v;
  v.line = cur.line();

  if (c == '"') {
    v.kind = Value::Kind::string;
    if (cur.peek_at(1) == '"' && cur.peek_at(2) == '"') {
      v.str = parse_multiline_string(cur, '"');
    } else {
      v.str = parse_basic_string(cur);
    }
    return v;
  }
  if (c == '\'') {
    v.kind = Value::Kind::string;
    if (cur.peek_at(1) == '\'' && cur.peek_at(2) == '\'') {
      v.str = parse_multiline_string(cur, '\'');
    } else {
      v.str = parse_literal_string(cur);
    }
    return v;
  }
  if (c == '[') return parse_array(cur);
  if (c == '{') return parse_inline_table(cur);

  // bare token: boolean or number
  std::string token;
  while (!cur.eof() && (is_bare_key_char(cur.peek()) || cur.peek() == '+')) {
    token += cur.take();
  }
  if (token == "true" || token == "false") {
    v.kind = Value::Kind::boolean;
    v.boolean = token == "true";
    return v;
  }
  if (token.empty()) {
    throw ParseError("expected a value", v.line);
  }
  // integer first (no dot, no exponent), otherwise exact decimal
  const bool plain_integer =
      token.find('.') == std::string::npos &&
      token.find('e') == std::string::npos &&
      token.find('E') == std::string::npos;
  if (plain_integer) {
    try {
      std::size_t used = 0;
      const long long parsed = std::stoll(token, &used);
      if (used == token.size()) {
        v.kind = Value::Kind::integer;
        v.integer = parsed;
        return v;
      }
    } catch (const std::exception&) {
      // fall through to decimal / error below
    }
  }
  if (auto dec = Decimal::parse(token)) {
    v.kind = Value::Kind::decimal;
    v.decimal = *dec;
    return v;
  }
  throw ParseError("cannot parse value '" + token + "'", v.line);
}

}  // namespace

Document parse(std::string_view text) {
  Document doc;
  Cursor cur(text);
  Section* current = nullptr;

  for (;;) {
    cur.skip_ws_and_comments();
    if (cur.eof()) return doc;

    if (cur.peek() == '[') {
      Section section;
      section.line = cur.line();
      cur.take();
      section.is_array = cur.take_if('[');
      std::string name;
      while (!cur.eof() && is_bare_key_char(cur.peek())) name += cur.take();
      if (name.empty()) throw ParseError("expected section name", cur.line());
      if (!cur.take_if(']')) throw ParseError("expected ']'", cur.line());
      if (section.is_array && !cur.take_if(']')) {
        throw ParseError("expected ']]'", cur.line());
      }
      section.name = std::move(name);
      cur.expect_end_of_line();
      doc.sections.push_back(std::move(section));
      current = &doc.sections.back();
      continue;
    }

    std::string key;
    const std::size_t key_line = cur.line();
    while (!cur.eof() && is_bare_key_char(cur.peek())) key += cur.take();
    if (key.empty()) {
      throw ParseError("expected a key or section header", key_line);
    }
    if (current == nullptr) {
      throw ParseError("key '" + key + "' appears before any [section]",
                       key_line);
    }
    cur.skip_inline_ws();
    if (!cur.take_if('=')) {
      throw ParseError("expected '=' after key '" + key + "'", cur.line());
    }
    Value value = parse_value(cur);
    cur.expect_end_of_line();
    if (current->find(key) != nullptr) {
      throw ParseError("duplicate key '" + key + "' in section [" +
                           current->name + "]",
                       key_line);
    }
    current->entries.emplace_back(std::move(key), std::move(value));
  }
}

std::string escape_string(const std::string& value) {
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

}  // namespace reviewflow::toml
