#include "reviewflow/output_schema.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace reviewflow {

using nlohmann::json;

const FieldValue* ReviewOutput::find(std::string_view name) const {
  for (const auto& [field, value] : fields) {
    if (field == name) return &value;
  }
  return nullptr;
}

std::string ReviewOutput::canonical_json() const {
  json obj = json::object();  // nlohmann objects iterate in sorted key order
  for (const auto& [field, value] : fields) {
    if (const auto* s = std::get_if<std::string>(&value)) {
      obj[field] = *s;
    } else if (const auto* i = std::get_if<long long>(&value)) {
      obj[field] = *i;
    } else {
      obj[field] = std::get<std::vector<std::string>>(value);
    }
  }
  return obj.dump();
}

std::string ReviewOutput::cell_text(std::string_view name) const {
  const FieldValue* value = find(name);
  if (value == nullptr) {
    throw std::out_of_range("no output field '" + std::string(name) + "'");
  }
  if (const auto* s = std::get_if<std::string>(value)) return *s;
  if (const auto* i = std::get_if<long long>(value)) return std::to_string(*i);
  return json(std::get<std::vector<std::string>>(*value)).dump();
}

FieldKind FieldKind::text(bool nonempty) {
  FieldKind k;
  k.tag = Tag::text;
  k.nonempty = nonempty;
  return k;
}

FieldKind FieldKind::integer() {
  FieldKind k;
  k.tag = Tag::integer;
  return k;
}

FieldKind FieldKind::integer_in_set(std::vector<long long> allowed) {
  if (allowed.empty()) throw std::invalid_argument("empty integer set");
  std::sort(allowed.begin(), allowed.end());
  if (std::adjacent_find(allowed.begin(), allowed.end()) != allowed.end()) {
    throw std::invalid_argument("duplicate value in integer set");
  }
  FieldKind k;
  k.tag = Tag::integer_in_set;
  k.allowed = std::move(allowed);
  return k;
}

FieldKind FieldKind::integer_in_range(long long lo, long long hi) {
  if (lo > hi) throw std::invalid_argument("empty integer range");
  FieldKind k;
  k.tag = Tag::integer_in_range;
  k.lo = lo;
  k.hi = hi;
  return k;
}

FieldKind FieldKind::list_of_text() {
  FieldKind k;
  k.tag = Tag::list_of_text;
  return k;
}

std::string FieldKind::to_string() const {
  switch (tag) {
    case Tag::text:
      return "text";
    case Tag::integer:
      return "integer";
    case Tag::integer_in_set: {
      std::string out = "integer_in_set(";
      for (std::size_t i = 0; i < allowed.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(allowed[i]);
      }
      return out + ")";
    }
    case Tag::integer_in_range:
      return "integer_in_range(" + std::to_string(lo) + "," +
             std::to_string(hi) + ")";
    case Tag::list_of_text:
      return "list_of_text";
  }
  return "text";
}

FieldKind FieldKind::parse(const std::string& spec) {
  if (spec == "text") return text();
  if (spec == "integer") return integer();
  if (spec == "list_of_text") return list_of_text();
  auto parse_args = [&](std::string_view head) -> std::vector<long long> {
    if (spec.substr(0, head.size()) != head || spec.back() != ')') {
      throw std::invalid_argument("bad field kind '" + spec + "'");
    }
    std::string body = spec.substr(head.size(), spec.size() - head.size() - 1);
    std::vector<long long> values;
    std::size_t start = 0;
    while (start <= body.size()) {
      std::size_t comma = body.find(',', start);
      std::string part = body.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      if (part.empty()) throw std::invalid_argument("bad field kind '" + spec + "'");
      std::size_t used = 0;
      long long v = std::stoll(part, &used);
      if (used != part.size()) {
        throw std::invalid_argument("bad field kind '" + spec + "'");
      }
      values.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return values;
  };
  if (spec.rfind("integer_in_set(", 0) == 0) {
    return integer_in_set(parse_args("integer_in_set("));
  }
  if (spec.rfind("integer_in_range(", 0) == 0) {
    auto args = parse_args("integer_in_range(");
    if (args.size() != 2) {
      throw std::invalid_argument("integer_in_range wants (lo,hi)");
    }
    return integer_in_range(args[0], args[1]);
  }
  throw std::invalid_argument("bad field kind '" + spec + "'");
}

bool OutputSchema::has_field(std::string_view name) const {
  return find(name) != nullptr;
}

const FieldKind* OutputSchema::find(std::string_view name) const {
  for (const auto& [field, kind] : fields) {
    if (field == name) return &kind;
  }
  return nullptr;
}

std::string OutputSchema::describe_for_prompt() const {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto& [name, kind] = fields[i];
    if (i > 0) out += ", ";
    out += '"' + name + "\": ";
    switch (kind.tag) {
      case FieldKind::Tag::text:
        out += kind.nonempty ? "nonempty string" : "string";
        break;
      case FieldKind::Tag::integer:
        out += "integer";
        break;
      case FieldKind::Tag::integer_in_set: {
        out += "integer, one of [";
        for (std::size_t j = 0; j < kind.allowed.size(); ++j) {
          if (j > 0) out += ", ";
          out += std::to_string(kind.allowed[j]);
        }
        out += ']';
        break;
      }
      case FieldKind::Tag::integer_in_range:
        out += "integer between " + std::to_string(kind.lo) + " and " +
               std::to_string(kind.hi);
        break;
      case FieldKind::Tag::list_of_text:
        out += "list of strings";
        break;
    }
  }
  return out;
}

namespace {

// Strips one leading/trailing ``` fence (with optional language tag) if the
// whole payload is wrapped in it.
std::string strip_fence(const std::string& raw) {
  std::size_t begin = raw.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return raw;
  std::size_t end = raw.find_last_not_of(" \t\r\n") + 1;
  std::string body = raw.substr(begin, end - begin);
  if (body.size() < 6 || body.compare(0, 3, "```") != 0 ||
      body.compare(body.size() - 3, 3, "```") != 0) {
    return body;
  }
  std::size_t open_end = body.find('\n');
  if (open_end == std::string::npos) return body;
  std::string inner = body.substr(open_end + 1, body.size() - open_end - 1 - 3);
  // trim the trailing newline before the closing fence
  while (!inner.empty() && (inner.back() == '\n' || inner.back() == '\r')) {
    inner.pop_back();
  }
  return inner;
}

bool check_integer(const json& v, const FieldKind& kind, const std::string& name,
                   std::string& error, long long& out) {
  if (!v.is_number_integer()) {
    error = "field '" + name + "' must be an integer, got " + v.dump();
    return false;
  }
  out = v.get<long long>();
  if (kind.tag == FieldKind::Tag::integer_in_set) {
    if (std::find(kind.allowed.begin(), kind.allowed.end(), out) ==
        kind.allowed.end()) {
      error = "field '" + name + "' value " + std::to_string(out) +
              " is not in the allowed set";
      return false;
    }
  } else if (kind.tag == FieldKind::Tag::integer_in_range) {
    if (out < kind.lo || out > kind.hi) {
      error = "field '" + name + "' value " + std::to_string(out) +
              " is outside [" + std::to_string(kind.lo) + ", " +
              std::to_string(kind.hi) + "]";
      return false;
    }
  }
  return true;
}

}  // namespace

bool OutputSchema::parse_and_validate(const std::string& raw_text,
                                      ReviewOutput& out,
                                      std::string& error) const {
  const std::string body = strip_fence(raw_text);
  json parsed = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) {
    error = "response is not valid JSON";
    return false;
  }
  if (!parsed.is_object()) {
    error = "response must be a JSON object";
    return false;
  }
  for (const auto& [key, value] : parsed.items()) {
    if (!has_field(key)) {
      error = "unexpected field '" + key + "'";
      return false;
    }
    (void)value;
  }
  ReviewOutput result;
  for (const auto& [name, kind] : fields) {
    auto it = parsed.find(name);
    if (it == parsed.end()) {
      error = "missing field '" + name + "'";
      return false;
    }
    switch (kind.tag) {
      case FieldKind::Tag::text: {
        if (!it->is_string()) {
          error = "field '" + name + "' must be a string, got " + it->dump();
          return false;
        }
        std::string s = it->get<std::string>();
        if (kind.nonempty && s.empty()) {
          error = "field '" + name + "' must be a nonempty string";
          return false;
        }
        result.fields.emplace_back(name, std::move(s));
        break;
      }
      case FieldKind::Tag::integer:
      case FieldKind::Tag::integer_in_set:
      case FieldKind::Tag::integer_in_range: {
        long long v = 0;
        if (!check_integer(*it, kind, name, error, v)) return false;
        result.fields.emplace_back(name, v);
        break;
      }
      case FieldKind::Tag::list_of_text: {
        if (!it->is_array()) {
          error = "field '" + name + "' must be a list of strings";
          return false;
        }
        std::vector<std::string> items;
        for (const auto& elem : *it) {
          if (!elem.is_string()) {
            error = "field '" + name + "' must contain only strings";
            return false;
          }
          items.push_back(elem.get<std::string>());
        }
        result.fields.emplace_back(name, std::move(items));
        break;
      }
    }
  }
  out = std::move(result);
  error.clear();
  return true;
}

}  // namespace reviewflow
