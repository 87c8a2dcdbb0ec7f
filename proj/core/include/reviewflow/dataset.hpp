#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "reviewflow/table.hpp"

namespace reviewflow {

enum class DataFormat { csv, jsonl };

DataFormat data_format_from_name(std::string_view name);  // "csv" | "jsonl"
const char* data_format_name(DataFormat format);

/// A table plus the format it came from.
struct Dataset {
  ReviewTable table;
  DataFormat format = DataFormat::csv;
};

/// CSV: RFC 4180, first row is the header, empty cell = empty string, the
/// unquoted cell \N = null (a literal "\N" value is written quoted).
/// Malformed rows and duplicate headers report line numbers.
ReviewTable parse_csv(std::string_view text);
std::string to_csv(const ReviewTable& table);

/// JSONL: one flat object per line; columns are the union of keys in
/// first-appearance order; a missing key = null. Scalars are stringified;
/// nested objects/arrays are errors. Writing omits null keys.
ReviewTable parse_jsonl(std::string_view text);
std::string to_jsonl(const ReviewTable& table);

Dataset read_dataset(const std::filesystem::path& path, DataFormat format);
void write_dataset(const ReviewTable& table, const std::filesystem::path& path,
                   DataFormat format);

}  // namespace reviewflow
