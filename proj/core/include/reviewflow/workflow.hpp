#pragma once

#include <string>
#include <vector>

#include "reviewflow/cost.hpp"
#include "reviewflow/registry.hpp"
#include "reviewflow/schema.hpp"
#include "reviewflow/table.hpp"

namespace reviewflow {

struct RoundStats {
  std::string round_id;
  long long rows_considered = 0;
  long long rows_passed_filter = 0;
};

struct RunFailure {
  std::string round_id;
  std::string agent;  // empty for filter-evaluation failures
  long long row = 0;
  std::string kind;
  std::string message;
};

struct RunReport {
  ReviewTable table;
  CostLedger ledger;
  std::vector<RoundStats> round_stats;
  std::vector<RunFailure> failures;

  /// Canonical JSON (sorted keys, 2-space indent, costs as exact decimal
  /// strings). Byte-stable across runs and concurrency settings.
  std::string to_json() const;
};

struct SchemaIssue {
  enum class Kind {
    duplicate_round,
    invalid_round,
    duplicate_reviewer,
    unknown_agent,
    unknown_provider,
    unknown_column,
    column_collision,
  };

  Kind kind;
  std::string round_id;
  std::string detail;

  std::string to_string() const;
};

/// Checks round ids, agent and provider references, and that every
/// text/image/filter column is available at its round given the columns
/// produced by earlier rounds. Returns all problems, not just the first.
std::vector<SchemaIssue> validate_schema(const WorkflowSchema& schema,
                                         const std::vector<std::string>& base_columns,
                                         const AgentRegistry& agents,
                                         const ProviderRegistry& providers);

/// Row indices passing the round's filter (all rows when absent), ascending.
/// Filter evaluation errors skip the row and append a failure record.
std::vector<std::size_t> rows_in_scope(const RoundSpec& round,
                                       const ReviewTable& table,
                                       std::vector<RunFailure>* failures = nullptr);

/// Executes the workflow: rounds sequentially, agents x rows within a round
/// concurrently up to schema.max_concurrency in-flight calls. Appends one
/// column per agent output field plus the composite `output` column per
/// agent. Per-call failures never abort the run; filtered-out and failed
/// rows hold nulls. Identical inputs and scripts yield identical reports
/// regardless of the concurrency limit.
RunReport run_workflow(const WorkflowSchema& schema, const ReviewTable& table,
                       const AgentRegistry& agents, ProviderRegistry& providers);

}  // namespace reviewflow
