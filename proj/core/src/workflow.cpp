#include "reviewflow/workflow.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "reviewflow/concurrency.hpp"

namespace reviewflow {

using nlohmann::json;

std::string RunReport::to_json() const {
  json doc;
  json rounds = json::array();
  for (const auto& s : round_stats) {
    json r;
    r["round"] = s.round_id;
    r["rows_considered"] = s.rows_considered;
    r["rows_passed_filter"] = s.rows_passed_filter;
    rounds.push_back(std::move(r));
  }
  doc["rounds"] = std::move(rounds);

  json fails = json::array();
  for (const auto& f : failures) {
    json e;
    e["round"] = f.round_id;
    e["agent"] = f.agent;
    e["row"] = f.row;
    e["kind"] = f.kind;
    e["message"] = f.message;
    fails.push_back(std::move(e));
  }
  doc["failures"] = std::move(fails);

  json entries = json::array();
  for (const auto& e : ledger.entries()) {
    json item;
    item["agent"] = e.agent;
    item["round"] = e.round_id;
    item["row"] = e.row;
    item["input_tokens"] = e.input_tokens;
    item["output_tokens"] = e.output_tokens;
    item["cost"] = e.cost.to_string();
    entries.push_back(std::move(item));
  }
  json ledger_doc;
  ledger_doc["entries"] = std::move(entries);
  ledger_doc["total_cost"] = ledger.total_cost().to_string();
  ledger_doc["total_input_tokens"] = ledger.total_input_tokens();
  ledger_doc["total_output_tokens"] = ledger.total_output_tokens();
  doc["ledger"] = std::move(ledger_doc);

  doc["rows"] = table.row_count();
  return doc.dump(2);
}

std::string SchemaIssue::to_string() const {
  std::string name;
  switch (kind) {
    case Kind::duplicate_round: name = "duplicate_round"; break;
    case Kind::invalid_round: name = "invalid_round"; break;
    case Kind::duplicate_reviewer: name = "duplicate_reviewer"; break;
    case Kind::unknown_agent: name = "unknown_agent"; break;
    case Kind::unknown_provider: name = "unknown_provider"; break;
    case Kind::unknown_column: name = "unknown_column"; break;
    case Kind::column_collision: name = "column_collision"; break;
  }
  return name + " (round " + round_id + "): " + detail;
}

namespace {

/// Columns one agent contributes to one round: the schema fields plus the
/// composite `output` column.
std::vector<std::string> agent_output_fields(const AgentSpec& agent) {
  std::vector<std::string> fields;
  for (const auto& [name, kind] : output_schema_for(agent).fields) {
    fields.push_back(name);
  }
  fields.push_back("output");
  return fields;
}

}  // namespace

std::vector<SchemaIssue> validate_schema(const WorkflowSchema& schema,
                                         const std::vector<std::string>& base_columns,
                                         const AgentRegistry& agents,
                                         const ProviderRegistry& providers) {
  std::vector<SchemaIssue> issues;
  std::set<std::string> seen_rounds;
  std::set<std::string> available(base_columns.begin(), base_columns.end());

  for (const auto& round : schema.rounds) {
    const std::string& id = round.round_id;
    if (!is_round_id(id)) {
      issues.push_back({SchemaIssue::Kind::invalid_round, id,
                        "round id must match [A-Za-z0-9]+"});
    }
    if (!seen_rounds.insert(id).second) {
      issues.push_back({SchemaIssue::Kind::duplicate_round, id,
                        "round id used more than once"});
    }
    if (round.reviewers.empty()) {
      issues.push_back(
          {SchemaIssue::Kind::invalid_round, id, "round has no reviewers"});
    }
    if (round.text_inputs.empty()) {
      issues.push_back(
          {SchemaIssue::Kind::invalid_round, id, "round has no text_inputs"});
    }

    std::set<std::string> round_reviewers;
    for (const auto& reviewer : round.reviewers) {
      if (!round_reviewers.insert(reviewer).second) {
        issues.push_back({SchemaIssue::Kind::duplicate_reviewer, id,
                          "reviewer '" + reviewer + "' listed twice"});
        continue;
      }
      if (!agents.contains(reviewer)) {
        issues.push_back({SchemaIssue::Kind::unknown_agent, id,
                          "agent '" + reviewer + "' is not defined"});
        continue;
      }
      const AgentSpec& spec = agents.get(reviewer);
      if (!providers.contains(spec.provider)) {
        issues.push_back({SchemaIssue::Kind::unknown_provider, id,
                          "agent '" + reviewer + "' references provider '" +
                              spec.provider + "'"});
      }
    }

    auto check_column = [&](const std::string& column, const char* role) {
      if (available.find(column) == available.end()) {
        issues.push_back({SchemaIssue::Kind::unknown_column, id,
                          std::string(role) + " column '" + column +
                              "' is not available at this round"});
      }
    };
    for (const auto& column : round.text_inputs) check_column(column, "text input");
    for (const auto& column : round.image_inputs) {
      check_column(column, "image input");
    }
    if (round.filter) {
      for (const auto& column : round.filter->referenced_columns()) {
        check_column(column, "filter");
      }
    }

    // columns land after the round completes, never visible to itself
    for (const auto& reviewer : round.reviewers) {
      if (!agents.contains(reviewer)) continue;
      for (const auto& field : agent_output_fields(agents.get(reviewer))) {
        const std::string column = make_column_name(id, reviewer, field);
        if (!available.insert(column).second) {
          issues.push_back({SchemaIssue::Kind::column_collision, id,
                            "produced column '" + column +
                                "' collides with an existing column"});
        }
      }
    }
  }
  return issues;
}

std::vector<std::size_t> rows_in_scope(const RoundSpec& round,
                                       const ReviewTable& table,
                                       std::vector<RunFailure>* failures) {
  std::vector<std::size_t> scope;
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    if (!round.filter) {
      scope.push_back(r);
      continue;
    }
    try {
      if (round.filter->evaluate(table, r)) scope.push_back(r);
    } catch (const FilterEvalError& e) {
      if (failures != nullptr) {
        failures->push_back({round.round_id, "", static_cast<long long>(r),
                             "filter_error", e.what()});
      }
    }
  }
  return scope;
}

RunReport run_workflow(const WorkflowSchema& schema, const ReviewTable& table,
                       const AgentRegistry& agents, ProviderRegistry& providers) {
  {
    const auto issues =
        validate_schema(schema, table.columns(), agents, providers);
    if (!issues.empty()) {
      std::string message = "workflow schema is invalid:";
      for (const auto& issue : issues) message += "\n  " + issue.to_string();
      throw Error(message);
    }
  }
  if (table.column_count() == 0) {
    throw Error("input table has no columns");
  }

  RunReport report;
  report.table = table;

  for (const auto& round : schema.rounds) {
    RoundStats stats;
    stats.round_id = round.round_id;
    stats.rows_considered = static_cast<long long>(report.table.row_count());

    const std::vector<std::size_t> scope =
        rows_in_scope(round, report.table, &report.failures);
    stats.rows_passed_filter = static_cast<long long>(scope.size());
    report.round_stats.push_back(stats);

    // resolve agents and backends up front; workers get plain references
    struct RoundAgent {
      const AgentSpec* spec;
      const ProviderConfig* provider_config;
      Provider* backend;
      OutputSchema schema;
    };
    std::vector<RoundAgent> round_agents;
    round_agents.reserve(round.reviewers.size());
    for (const auto& reviewer : round.reviewers) {
      const AgentSpec& spec = agents.get(reviewer);
      round_agents.push_back({&spec, &providers.config(spec.provider),
                              &providers.instance(spec.provider),
                              output_schema_for(spec)});
    }

    // one work item per (agent, in-scope row); a single pool bounds the
    // total number of in-flight calls for the round
    const std::size_t per_agent = scope.size();
    const std::size_t work_count = round_agents.size() * per_agent;
    std::vector<ReviewResult> results(work_count);

    auto run_one = [&](std::size_t w) {
      const std::size_t agent_idx = w / per_agent;
      const std::size_t row = scope[w % per_agent];
      const RoundAgent& ra = round_agents[agent_idx];

      ItemFields item;
      item.reserve(round.text_inputs.size());
      for (const auto& column : round.text_inputs) {
        item.emplace_back(column, report.table.cell(row, column));
      }
      std::vector<std::string> images;
      for (const auto& column : round.image_inputs) {
        const Cell& cell = report.table.cell(row, column);
        if (cell.has_value() && !cell->empty()) images.push_back(*cell);
      }

      results[w] = review_item(*ra.spec, *ra.backend, *ra.provider_config, item,
                               images, static_cast<long long>(row));
    };
    if (work_count > 0) {
      parallel_for_index(work_count, schema.max_concurrency, run_one);
    }

    // single-owner assembly, deterministic (agent, row) order
    std::vector<std::pair<std::string, std::vector<Cell>>> new_columns;
    for (std::size_t a = 0; a < round_agents.size(); ++a) {
      const RoundAgent& ra = round_agents[a];
      const auto fields = agent_output_fields(*ra.spec);

      std::vector<std::vector<Cell>> columns(
          fields.size(), std::vector<Cell>(report.table.row_count()));

      for (std::size_t s = 0; s < per_agent; ++s) {
        const std::size_t row = scope[s];
        const ReviewResult& result = results[a * per_agent + s];

        if (result.ok()) {
          for (std::size_t f = 0; f + 1 < fields.size(); ++f) {
            columns[f][row] = result.output->cell_text(fields[f]);
          }
          columns[fields.size() - 1][row] = result.output->canonical_json();
        } else if (result.failure) {
          report.failures.push_back({round.round_id, ra.spec->name,
                                     static_cast<long long>(row),
                                     result.failure->kind,
                                     result.failure->message});
        }

        if (result.ok() || result.usage.input_tokens > 0 ||
            result.usage.output_tokens > 0) {
          report.ledger.add({ra.spec->name, round.round_id,
                             static_cast<long long>(row),
                             result.usage.input_tokens,
                             result.usage.output_tokens, result.cost});
        }
      }
      for (std::size_t f = 0; f < fields.size(); ++f) {
        new_columns.emplace_back(
            make_column_name(round.round_id, ra.spec->name, fields[f]),
            std::move(columns[f]));
      }
    }
    report.table = append_columns(report.table, new_columns);
  }
  return report;
}

}  // namespace reviewflow
