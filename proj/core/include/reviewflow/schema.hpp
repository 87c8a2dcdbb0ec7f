#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reviewflow/filter.hpp"

namespace reviewflow {

/// One stage of a workflow: which agents review which columns, optionally
/// gated by a row filter.
struct RoundSpec {
  std::string round_id;                    // [A-Za-z0-9]+
  std::vector<std::string> reviewers;      // nonempty, distinct
  std::vector<std::string> text_inputs;    // nonempty
  std::vector<std::string> image_inputs;   // cells hold file paths
  std::optional<FilterExpr> filter;
  std::string filter_source;               // original text, for serialization
};

struct WorkflowSchema {
  std::vector<RoundSpec> rounds;  // round_ids unique across the schema
  int max_concurrency = 10;
};

}  // namespace reviewflow
