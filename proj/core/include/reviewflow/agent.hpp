#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "reviewflow/decimal.hpp"
#include "reviewflow/output_schema.hpp"
#include "reviewflow/provider.hpp"
#include "reviewflow/table.hpp"

namespace reviewflow {

/// Raised for prompt-template problems, e.g. a custom template referencing an
/// undeclared placeholder.
class PromptError : public Error {
 public:
  using Error::Error;
};

enum class AgentKind { scoring, title_abstract, abstraction, custom };
enum class ReasoningStyle { brief, cot };

const char* agent_kind_name(AgentKind kind);
const char* reasoning_style_name(ReasoningStyle style);

struct ScoringSpec {
  std::string scoring_task;
  std::vector<long long> scoring_set;  // nonempty, distinct, kept ascending
  std::string scoring_rules;
};

struct TitleAbstractSpec {
  std::string inclusion_criteria;   // nonempty
  std::string exclusion_criteria;   // may be "Not specified"
};

struct AbstractionSpec {
  /// Key order is the output field order. Kinds restricted to text, integer,
  /// list_of_text.
  std::vector<std::pair<std::string, FieldKind>> keys;
  std::vector<std::pair<std::string, std::string>> key_descriptions;

  const std::string* description_for(std::string_view key) const;
};

struct CustomSpec {
  /// Template with ${placeholder} variables; allowed placeholders are item,
  /// additional_context, examples plus the agent fields name, backstory and
  /// input_description.
  std::string prompt_template;
  OutputSchema response_schema;
  std::string input_description;
};

/// Static text, or a per-item lookup keyed by the rendered item text (the
/// RAG hook). A dynamic lookup is lenient by default: failures become empty
/// context rather than failed items.
struct ContextSource {
  std::string static_text;
  std::function<std::string(const std::string&)> dynamic;
  bool strict = false;

  bool configured() const { return !static_text.empty() || dynamic != nullptr; }
};

struct AgentSpec {
  std::string name;      // identifier, unique within a workflow
  std::string provider;  // provider name
  AgentKind kind = AgentKind::scoring;
  std::string backstory;
  ReasoningStyle reasoning = ReasoningStyle::brief;  // scoring/title_abstract
  ContextSource additional_context;
  std::vector<std::pair<std::string, std::string>> examples;  // input, expected
  std::variant<ScoringSpec, TitleAbstractSpec, AbstractionSpec, CustomSpec>
      kind_spec;
  ModelArgs model_args;  // merged over the provider's defaults
};

/// The structured-output contract for one agent:
///   scoring        -> reasoning, score in scoring_set, certainty 0..100
///   title_abstract -> reasoning, evaluation 1..5, certainty 0..100
///   abstraction    -> one field per abstraction key
///   custom         -> the declared response schema
OutputSchema output_schema_for(const AgentSpec& agent);

/// Ordered (column, cell) pairs for one row, in the round's input order.
using ItemFields = std::vector<std::pair<std::string, Cell>>;

/// "col: value" per input column, newline-separated. Null cells render as
/// empty values.
std::string render_item_text(const ItemFields& item);

/// Renders the agent's prompt for one item. Every prompt ends with a JSON-only
/// output instruction listing the schema fields. Throws PromptError for an
/// unresolved custom placeholder.
std::string build_prompt(const AgentSpec& agent, const ItemFields& item,
                         const std::string& context_text);

/// Checks a custom template's placeholders without rendering.
void check_custom_template(const CustomSpec& spec);

struct ItemFailure {
  std::string kind;     // provider error kind, invalid_image, ...
  std::string message;
};

struct ReviewResult {
  std::optional<ReviewOutput> output;
  Usage usage;
  Decimal cost;
  std::optional<ItemFailure> failure;

  bool ok() const { return output.has_value(); }
};

struct ImageIssue {
  enum class Kind { missing_file, bad_extension };
  std::string path;
  Kind kind;
};

/// Every path must exist and carry one of {png, jpg, jpeg, webp, gif}.
/// Returns all violations, not just the first.
std::vector<ImageIssue> validate_images(const std::vector<std::string>& paths);

/// One review call: resolves context, builds the prompt, runs the structured
/// completion, prices the usage. Provider errors are captured in the result,
/// never thrown.
ReviewResult review_item(const AgentSpec& agent, Provider& backend,
                         const ProviderConfig& provider_config,
                         const ItemFields& item,
                         const std::vector<std::string>& images,
                         long long row_index);

/// Reviews items concurrently (at most `concurrency` calls in flight);
/// results[i] always corresponds to items[i]. Per-item failures are captured
/// in place. Returns the exact total cost.
std::pair<std::vector<ReviewResult>, Decimal> review_items(
    const AgentSpec& agent, Provider& backend,
    const ProviderConfig& provider_config, const std::vector<ItemFields>& items,
    int concurrency);

}  // namespace reviewflow
