#include "reviewflow/dataset.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace reviewflow {

using ordered_json = nlohmann::ordered_json;

DataFormat data_format_from_name(std::string_view name) {
  if (name == "csv") return DataFormat::csv;
  if (name == "jsonl") return DataFormat::jsonl;
  throw IoError("unknown dataset format '" + std::string(name) +
                "' (expected csv or jsonl)");
}

const char* data_format_name(DataFormat format) {
  return format == DataFormat::csv ? "csv" : "jsonl";
}

namespace {

constexpr const char* kNullSentinel = "\\N";

struct CsvField {
  std::string text;
  bool quoted = false;
};

// One RFC-4180 record, possibly spanning raw lines when quoted fields embed
// newlines. `line` tracks the record's first line for error messages.
class CsvReader {
 public:
  explicit CsvReader(std::string_view text) : text_(text) {}

  bool next_record(std::vector<CsvField>& fields, std::size_t& record_line) {
    fields.clear();
    if (pos_ >= text_.size()) return false;
    record_line = line_;

    CsvField field;
    bool in_quotes = false;
    for (;;) {
      if (pos_ >= text_.size()) {
        if (in_quotes) {
          throw IoError("line " + std::to_string(record_line) +
                        ": unterminated quoted field");
        }
        fields.push_back(std::move(field));
        return true;
      }
      const char c = text_[pos_];
      if (in_quotes) {
        if (c == '"') {
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
            field.text += '"';
            pos_ += 2;
          } else {
            in_quotes = false;
            ++pos_;
          }
        } else {
          if (c == '\n') ++line_;
          field.text += c;
          ++pos_;
        }
        continue;
      }
      switch (c) {
        case '"':
          if (!field.text.empty() || field.quoted) {
            throw IoError("line " + std::to_string(line_) +
                          ": quote inside unquoted field");
          }
          field.quoted = true;
          in_quotes = true;
          ++pos_;
          break;
        case ',':
          fields.push_back(std::move(field));
          field = {};
          ++pos_;
          break;
        case '\r':
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') {
            pos_ += 2;
          } else {
            ++pos_;
          }
          ++line_;
          fields.push_back(std::move(field));
          return true;
        case '\n':
          ++pos_;
          ++line_;
          fields.push_back(std::move(field));
          return true;
        default:
          field.text += c;
          ++pos_;
          break;
      }
    }
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

Cell field_to_cell(const CsvField& field) {
  if (!field.quoted && field.text == kNullSentinel) return std::nullopt;
  return field.text;
}

std::string csv_escape(const std::string& value) {
  const bool needs_quotes =
      value.find_first_of(",\"\n\r") != std::string::npos ||
      value == kNullSentinel;
  if (!needs_quotes) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

ReviewTable parse_csv(std::string_view text) {
  CsvReader reader(text);
  std::vector<CsvField> fields;
  std::size_t line = 0;

  if (!reader.next_record(fields, line)) {
    throw IoError("empty CSV input (no header row)");
  }
  std::vector<std::string> header;
  header.reserve(fields.size());
  for (const auto& f : fields) {
    if (!is_column_name(f.text)) {
      throw IoError("line 1: header '" + f.text +
                    "' is not a valid column identifier");
    }
    for (const auto& existing : header) {
      if (existing == f.text) {
        throw IoError("line 1: duplicate header '" + f.text + "'");
      }
    }
    header.push_back(f.text);
  }

  ReviewTable table(header);
  while (reader.next_record(fields, line)) {
    // A blank line is tolerated in multi-column files; in a one-column file
    // it is a legitimate record holding an empty cell.
    if (header.size() > 1 && fields.size() == 1 && !fields[0].quoted &&
        fields[0].text.empty()) {
      continue;
    }
    if (fields.size() != header.size()) {
      throw IoError("line " + std::to_string(line) + ": expected " +
                    std::to_string(header.size()) + " fields, got " +
                    std::to_string(fields.size()));
    }
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(field_to_cell(f));
    table.add_row(std::move(row));
  }
  return table;
}

std::string to_csv(const ReviewTable& table) {
  std::string out;
  const auto& columns = table.columns();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c > 0) out += ',';
    out += csv_escape(columns[c]);
  }
  out += '\n';
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c > 0) out += ',';
      const Cell& cell = table.cell(r, c);
      out += cell.has_value() ? csv_escape(*cell) : kNullSentinel;
    }
    out += '\n';
  }
  return out;
}

ReviewTable parse_jsonl(std::string_view text) {
  std::vector<std::string> columns;
  std::vector<std::vector<std::pair<std::string, Cell>>> parsed_rows;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = eol == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    while (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    ordered_json doc =
        ordered_json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) {
      throw IoError("line " + std::to_string(line_no) +
                    ": not a JSON object");
    }
    std::vector<std::pair<std::string, Cell>> row;
    for (const auto& [key, value] : doc.items()) {
      if (!is_column_name(key)) {
        throw IoError("line " + std::to_string(line_no) + ": key '" + key +
                      "' is not a valid column identifier");
      }
      Cell cell;
      if (value.is_null()) {
        cell = std::nullopt;
      } else if (value.is_string()) {
        cell = value.get<std::string>();
      } else if (value.is_number() || value.is_boolean()) {
        cell = value.dump();
      } else {
        throw IoError("line " + std::to_string(line_no) + ": key '" + key +
                      "' holds a nested value; objects must be flat");
      }
      if (std::find(columns.begin(), columns.end(), key) == columns.end()) {
        columns.push_back(key);
      }
      row.emplace_back(key, std::move(cell));
    }
    parsed_rows.push_back(std::move(row));
  }

  ReviewTable table(columns);
  for (const auto& parsed : parsed_rows) {
    std::vector<Cell> row(columns.size(), std::nullopt);
    for (const auto& [key, cell] : parsed) {
      row[table.column_index(key)] = cell;
    }
    table.add_row(std::move(row));
  }
  return table;
}

std::string to_jsonl(const ReviewTable& table) {
  std::string out;
  const auto& columns = table.columns();
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    ordered_json obj = ordered_json::object();
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const Cell& cell = table.cell(r, c);
      if (cell.has_value()) obj[columns[c]] = *cell;  // null keys omitted
    }
    out += obj.dump();
    out += '\n';
  }
  return out;
}

Dataset read_dataset(const std::filesystem::path& path, DataFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  Dataset dataset;
  dataset.format = format;
  dataset.table = format == DataFormat::csv ? parse_csv(buf.str())
                                            : parse_jsonl(buf.str());
  return dataset;
}

void write_dataset(const ReviewTable& table, const std::filesystem::path& path,
                   DataFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << (format == DataFormat::csv ? to_csv(table) : to_jsonl(table));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace reviewflow
