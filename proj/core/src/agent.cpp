#include "reviewflow/agent.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>

#include "reviewflow/concurrency.hpp"

namespace reviewflow {

const char* agent_kind_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::scoring: return "scoring";
    case AgentKind::title_abstract: return "title_abstract";
    case AgentKind::abstraction: return "abstraction";
    case AgentKind::custom: return "custom";
  }
  return "scoring";
}

const char* reasoning_style_name(ReasoningStyle style) {
  return style == ReasoningStyle::brief ? "brief" : "cot";
}

const std::string* AbstractionSpec::description_for(std::string_view key) const {
  for (const auto& [k, d] : key_descriptions) {
    if (k == key) return &d;
  }
  return nullptr;
}

OutputSchema output_schema_for(const AgentSpec& agent) {
  OutputSchema schema;
  switch (agent.kind) {
    case AgentKind::scoring: {
      const auto& spec = std::get<ScoringSpec>(agent.kind_spec);
      schema.fields.emplace_back("reasoning", FieldKind::text(/*nonempty=*/true));
      schema.fields.emplace_back("score",
                                 FieldKind::integer_in_set(spec.scoring_set));
      schema.fields.emplace_back("certainty", FieldKind::integer_in_range(0, 100));
      return schema;
    }
    case AgentKind::title_abstract:
      schema.fields.emplace_back("reasoning", FieldKind::text(/*nonempty=*/true));
      schema.fields.emplace_back("evaluation", FieldKind::integer_in_range(1, 5));
      schema.fields.emplace_back("certainty", FieldKind::integer_in_range(0, 100));
      return schema;
    case AgentKind::abstraction: {
      const auto& spec = std::get<AbstractionSpec>(agent.kind_spec);
      schema.fields = spec.keys;
      return schema;
    }
    case AgentKind::custom:
      return std::get<CustomSpec>(agent.kind_spec).response_schema;
  }
  return schema;
}

std::string render_item_text(const ItemFields& item) {
  std::string out;
  for (std::size_t i = 0; i < item.size(); ++i) {
    if (i > 0) out += '\n';
    out += item[i].first;
    out += ": ";
    if (item[i].second.has_value()) out += *item[i].second;
  }
  return out;
}

namespace {

// Frozen prompt fixtures, version 1. Tests assert on these fragments; change
// them only together with the tests.
constexpr const char* kBriefDirective =
    "In the \"reasoning\" field, reason in 1-2 sentences before deciding.";
constexpr const char* kCotDirective =
    "In the \"reasoning\" field, lay out a step-by-step chain of thought: "
    "restate what the item says, check it against each rule or criterion in "
    "turn, then conclude.";
constexpr const char* kLikertScale =
    "1 = absolutely exclude, 2 = better to exclude, 3 = not sure (ambiguous), "
    "4 = better to include, 5 = absolutely include";

std::string persona_line(const AgentSpec& agent) {
  if (agent.backstory.empty()) return "You are " + agent.name + ".";
  return "You are " + agent.name + ", " + agent.backstory + ".";
}

std::string reasoning_directive(const AgentSpec& agent) {
  return agent.reasoning == ReasoningStyle::brief ? kBriefDirective
                                                  : kCotDirective;
}

void append_context_section(std::string& prompt, const std::string& context) {
  if (context.empty()) return;  // section omitted entirely when empty
  prompt += "\n\nAdditional context:\n" + context;
}

void append_examples_section(const AgentSpec& agent, std::string& prompt) {
  if (agent.examples.empty()) return;
  prompt += "\n\nExamples:";
  for (const auto& [input, expected] : agent.examples) {
    prompt += "\nInput:\n" + input + "\nExpected output:\n" + expected;
  }
}

std::string json_instruction(const OutputSchema& schema) {
  return "Respond with a single JSON object with exactly these fields: {" +
         schema.describe_for_prompt() +
         "}. Output only the JSON object, with no surrounding prose or code "
         "fences.";
}

std::string scoring_set_text(const std::vector<long long>& set) {
  std::string out = "[";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(set[i]);
  }
  return out + "]";
}

std::string render_custom_template(const AgentSpec& agent,
                                   const CustomSpec& spec,
                                   const std::string& item_text,
                                   const std::string& context_text) {
  std::string examples_text;
  for (const auto& [input, expected] : agent.examples) {
    if (!examples_text.empty()) examples_text += '\n';
    examples_text += "Input:\n" + input + "\nExpected output:\n" + expected;
  }

  const std::string& tpl = spec.prompt_template;
  std::string out;
  out.reserve(tpl.size() + item_text.size());
  std::size_t i = 0;
  while (i < tpl.size()) {
    if (tpl[i] == '$' && i + 1 < tpl.size() && tpl[i + 1] == '{') {
      const std::size_t close = tpl.find('}', i + 2);
      if (close == std::string::npos) {
        throw PromptError("unterminated ${...} placeholder in custom template");
      }
      const std::string name = tpl.substr(i + 2, close - i - 2);
      if (name == "item") {
        out += item_text;
      } else if (name == "additional_context") {
        out += context_text;
      } else if (name == "examples") {
        out += examples_text;
      } else if (name == "name") {
        out += agent.name;
      } else if (name == "backstory") {
        out += agent.backstory;
      } else if (name == "input_description") {
        out += spec.input_description;
      } else {
        throw PromptError("unresolved placeholder '${" + name +
                          "}' in custom template");
      }
      i = close + 1;
      continue;
    }
    out += tpl[i];
    ++i;
  }
  return out;
}

}  // namespace

void check_custom_template(const CustomSpec& spec) {
  AgentSpec probe;
  probe.kind = AgentKind::custom;
  probe.kind_spec = spec;
  render_custom_template(probe, spec, "", "");
}

std::string build_prompt(const AgentSpec& agent, const ItemFields& item,
                         const std::string& context_text) {
  const OutputSchema schema = output_schema_for(agent);
  const std::string item_text = render_item_text(item);

  if (agent.kind == AgentKind::custom) {
    const auto& spec = std::get<CustomSpec>(agent.kind_spec);
    std::string prompt =
        render_custom_template(agent, spec, item_text, context_text);
    prompt += "\n\n" + json_instruction(schema);
    return prompt;
  }

  std::string prompt = persona_line(agent);
  switch (agent.kind) {
    case AgentKind::scoring: {
      const auto& spec = std::get<ScoringSpec>(agent.kind_spec);
      prompt += "\n\nTask: " + spec.scoring_task;
      prompt += "\n\nScoring rules:\n" + spec.scoring_rules;
      prompt += "\nAssign \"score\" as one of the allowed values: " +
                scoring_set_text(spec.scoring_set) + ".";
      prompt +=
          "\nAssign \"certainty\" as an integer from 0 to 100 expressing how "
          "confident you are in the score.";
      prompt += "\n\n" + reasoning_directive(agent);
      break;
    }
    case AgentKind::title_abstract: {
      const auto& spec = std::get<TitleAbstractSpec>(agent.kind_spec);
      prompt +=
          "\n\nTask: screen the following study against the inclusion and "
          "exclusion criteria and decide whether it belongs in the review.";
      prompt += "\n\nInclusion criteria:\n" + spec.inclusion_criteria;
      prompt += "\n\nExclusion criteria:\n" + spec.exclusion_criteria;
      prompt +=
          "\n\nScoring rules:\nA study qualifies only if it meets every "
          "inclusion criterion and violates none of the exclusion criteria.";
      prompt += std::string("\nAssign \"evaluation\" on the 5-point scale: ") +
                kLikertScale + ".";
      prompt +=
          "\nAssign \"certainty\" as an integer from 0 to 100 expressing how "
          "confident you are in the evaluation.";
      prompt += "\n\n" + reasoning_directive(agent);
      break;
    }
    case AgentKind::abstraction: {
      const auto& spec = std::get<AbstractionSpec>(agent.kind_spec);
      prompt += "\n\nTask: extract the following fields from the item.";
      for (const auto& [key, kind] : spec.keys) {
        const std::string* desc = spec.description_for(key);
        prompt += "\n- " + key + ": " + (desc ? *desc : "") + " (" +
                  kind.to_string() + ")";
      }
      break;
    }
    case AgentKind::custom:
      break;  // handled above
  }

  append_context_section(prompt, context_text);
  append_examples_section(agent, prompt);
  prompt += "\n\nReview the following item:\n" + item_text;
  prompt += "\n\n" + json_instruction(schema);
  return prompt;
}

std::vector<ImageIssue> validate_images(const std::vector<std::string>& paths) {
  static const char* kAllowed[] = {"png", "jpg", "jpeg", "webp", "gif"};
  std::vector<ImageIssue> issues;
  for (const auto& path : paths) {
    const std::size_t dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    for (char& c : ext) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    const bool ext_ok = std::any_of(std::begin(kAllowed), std::end(kAllowed),
                                    [&](const char* a) { return ext == a; });
    if (!ext_ok) {
      issues.push_back({path, ImageIssue::Kind::bad_extension});
      continue;
    }
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) {
      issues.push_back({path, ImageIssue::Kind::missing_file});
    }
  }
  return issues;
}

namespace {

std::string resolve_context(const AgentSpec& agent, const std::string& item_text,
                            std::optional<ItemFailure>& failure) {
  const ContextSource& source = agent.additional_context;
  if (source.dynamic) {
    try {
      return source.dynamic(item_text);
    } catch (const std::exception& e) {
      if (source.strict) {
        failure = ItemFailure{"context_lookup_failed", e.what()};
      }
      return "";
    }
  }
  return source.static_text;
}

}  // namespace

ReviewResult review_item(const AgentSpec& agent, Provider& backend,
                         const ProviderConfig& provider_config,
                         const ItemFields& item,
                         const std::vector<std::string>& images,
                         long long row_index) {
  ReviewResult result;

  const auto image_issues = validate_images(images);
  if (!image_issues.empty()) {
    std::string message;
    for (const auto& issue : image_issues) {
      if (!message.empty()) message += "; ";
      message += issue.path;
      message += issue.kind == ImageIssue::Kind::missing_file
                     ? ": missing file"
                     : ": extension not allowed";
    }
    result.failure = ItemFailure{"invalid_image", message};
    return result;
  }

  const std::string item_text = render_item_text(item);
  std::optional<ItemFailure> context_failure;
  const std::string context = resolve_context(agent, item_text, context_failure);
  if (context_failure) {
    result.failure = std::move(context_failure);
    return result;
  }

  CompletionRequest request;
  request.prompt = build_prompt(agent, item, context);
  request.image_paths = images;
  request.agent_name = agent.name;
  request.row_index = row_index;
  request.model_args = agent.model_args;

  try {
    const OutputSchema schema = output_schema_for(agent);
    auto [output, usage] =
        complete_structured(backend, provider_config, request, schema);
    result.output = std::move(output);
    result.usage = usage;
  } catch (const ProviderError& e) {
    result.usage = e.usage;
    result.failure =
        ItemFailure{ProviderError::kind_name(e.kind()), e.what()};
  }

  if (provider_config.price) {
    result.cost = estimate_cost(result.usage, *provider_config.price);
  }
  return result;
}

std::pair<std::vector<ReviewResult>, Decimal> review_items(
    const AgentSpec& agent, Provider& backend,
    const ProviderConfig& provider_config, const std::vector<ItemFields>& items,
    int concurrency) {
  std::vector<ReviewResult> results(items.size());
  parallel_for_index(items.size(), concurrency, [&](std::size_t i) {
    results[i] = review_item(agent, backend, provider_config, items[i], {},
                             static_cast<long long>(i));
  });
  Decimal total;
  for (const auto& r : results) total += r.cost;
  return {std::move(results), total};
}

}  // namespace reviewflow
