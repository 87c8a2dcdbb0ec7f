#include "reviewflow/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "reviewflow/filter.hpp"
#include "reviewflow/toml.hpp"

namespace reviewflow {

namespace {

using toml::Section;
using toml::Value;

[[noreturn]] void fail(const Section& section, const std::string& message) {
  throw ConfigError("[" + section.name + "] (line " +
                    std::to_string(section.line) + "): " + message);
}

const Value& require(const Section& section, const char* key) {
  const Value* v = section.find(key);
  if (v == nullptr) fail(section, std::string("missing key '") + key + "'");
  return *v;
}

std::string require_string(const Section& section, const char* key) {
  return require(section, key).as_string();
}

std::string optional_string(const Section& section, const char* key,
                            std::string fallback = {}) {
  const Value* v = section.find(key);
  return v == nullptr ? fallback : v->as_string();
}

std::vector<std::string> string_array(const Value& value) {
  std::vector<std::string> out;
  for (const auto& item : value.as_array()) out.push_back(item.as_string());
  return out;
}

ConfigValue to_config_value(const Value& value) {
  switch (value.kind) {
    case Value::Kind::string: return value.str;
    case Value::Kind::integer: return value.integer;
    case Value::Kind::decimal: return value.decimal;
    case Value::Kind::boolean: return value.boolean;
    default:
      throw ConfigError("line " + std::to_string(value.line) +
                        ": model_args values must be scalars");
  }
}

ModelArgs parse_model_args(const Value& value) {
  ModelArgs args;
  for (const auto& [key, v] : value.as_table()) {
    args.emplace_back(key, to_config_value(v));
  }
  return args;
}

void check_known_keys(const Section& section,
                      const std::set<std::string>& known) {
  for (const auto& [key, value] : section.entries) {
    if (known.find(key) == known.end()) {
      throw ConfigError("[" + section.name + "] line " +
                        std::to_string(value.line) + ": unknown key '" + key +
                        "'");
    }
  }
}

// ---------------------------------------------------------------------------
// section parsers

ProviderConfig parse_provider(const Section& section) {
  check_known_keys(section,
                   {"name", "kind", "model", "base_url", "api_key_env",
                    "model_args", "price", "max_retries", "backoff_ms",
                    "timeout_seconds", "supports_images", "script"});
  ProviderConfig config;
  config.name = require_string(section, "name");
  if (!is_identifier(config.name)) {
    fail(section, "provider name '" + config.name + "' is not an identifier");
  }
  const std::string kind = require_string(section, "kind");
  if (kind == "openai_compatible") {
    config.kind = ProviderKind::openai_compatible;
  } else if (kind == "mock") {
    config.kind = ProviderKind::mock;
  } else {
    fail(section, "unknown provider kind '" + kind +
                      "' (expected openai_compatible or mock)");
  }
  config.model = require_string(section, "model");
  config.base_url = optional_string(section, "base_url", config.base_url);
  config.api_key_env = optional_string(section, "api_key_env", config.api_key_env);
  config.mock_script = optional_string(section, "script");

  if (config.kind == ProviderKind::mock && config.mock_script.empty()) {
    fail(section, "mock provider requires a script reference");
  }
  if (config.kind == ProviderKind::openai_compatible &&
      config.api_key_env.empty()) {
    fail(section, "openai_compatible provider requires api_key_env");
  }

  if (const Value* v = section.find("model_args")) {
    config.model_args = parse_model_args(*v);
  }
  if (const Value* v = section.find("price")) {
    Price price;
    bool have_input = false, have_output = false;
    for (const auto& [key, pv] : v->as_table()) {
      if (key == "input") {
        price.input_cost_per_token = pv.as_decimal();
        have_input = true;
      } else if (key == "output") {
        price.output_cost_per_token = pv.as_decimal();
        have_output = true;
      } else {
        fail(section, "price table keys are 'input' and 'output'");
      }
    }
    if (!have_input || !have_output) {
      fail(section, "price requires both input and output costs");
    }
    if (price.input_cost_per_token.is_negative() ||
        price.output_cost_per_token.is_negative()) {
      fail(section, "price components must be nonnegative");
    }
    config.price = price;
  }
  if (const Value* v = section.find("max_retries")) {
    const long long n = v->as_integer();
    if (n < 0) fail(section, "max_retries must be >= 0");
    config.max_retries = static_cast<int>(n);
  }
  if (const Value* v = section.find("backoff_ms")) {
    config.backoff_ms.clear();
    for (const auto& item : v->as_array()) {
      const long long ms = item.as_integer();
      if (ms < 0) fail(section, "backoff_ms entries must be >= 0");
      config.backoff_ms.push_back(static_cast<int>(ms));
    }
  }
  if (const Value* v = section.find("timeout_seconds")) {
    config.timeout_seconds = v->as_decimal();
    if (config.timeout_seconds.is_negative()) {
      fail(section, "timeout_seconds must be >= 0");
    }
  }
  if (const Value* v = section.find("supports_images")) {
    config.supports_images = v->as_boolean();
  }
  return config;
}

std::vector<std::pair<std::string, FieldKind>> parse_schema_table(
    const Section& section, const Value& value, bool abstraction_kinds_only) {
  std::vector<std::pair<std::string, FieldKind>> fields;
  for (const auto& [key, v] : value.as_table()) {
    if (!is_identifier(key)) {
      fail(section, "field name '" + key + "' is not an identifier");
    }
    FieldKind kind;
    try {
      kind = FieldKind::parse(v.as_string());
    } catch (const std::exception& e) {
      fail(section, std::string("field '") + key + "': " + e.what());
    }
    if (abstraction_kinds_only && kind.tag != FieldKind::Tag::text &&
        kind.tag != FieldKind::Tag::integer &&
        kind.tag != FieldKind::Tag::list_of_text) {
      fail(section, "abstraction key '" + key +
                        "' must be text, integer, or list_of_text");
    }
    for (const auto& [existing, k] : fields) {
      if (existing == key) fail(section, "duplicate field '" + key + "'");
    }
    fields.emplace_back(key, std::move(kind));
  }
  if (fields.empty()) fail(section, "schema table must declare at least one field");
  return fields;
}

AgentSpec parse_agent(const Section& section) {
  check_known_keys(
      section,
      {"name", "provider", "kind", "backstory", "reasoning",
       "additional_context", "examples", "model_args", "scoring_task",
       "scoring_set", "scoring_rules", "inclusion_criteria",
       "exclusion_criteria", "abstraction_keys", "key_descriptions",
       "prompt_template", "response_format", "input_description"});

  AgentSpec agent;
  agent.name = require_string(section, "name");
  if (!is_identifier(agent.name)) {
    fail(section, "agent name '" + agent.name + "' is not an identifier");
  }
  agent.provider = require_string(section, "provider");
  agent.backstory = optional_string(section, "backstory");

  const std::string kind = require_string(section, "kind");
  if (const Value* v = section.find("additional_context")) {
    agent.additional_context.static_text = v->as_string();
  }
  if (const Value* v = section.find("examples")) {
    for (const auto& pair : v->as_array()) {
      const auto& arr = pair.as_array();
      if (arr.size() != 2) {
        fail(section, "each example must be [input, expected_output]");
      }
      agent.examples.emplace_back(arr[0].as_string(), arr[1].as_string());
    }
  }
  if (const Value* v = section.find("model_args")) {
    agent.model_args = parse_model_args(*v);
  }

  const Value* reasoning = section.find("reasoning");
  auto apply_reasoning = [&]() {
    if (reasoning == nullptr) return;  // defaults to brief
    const std::string& style = reasoning->as_string();
    if (style == "brief") agent.reasoning = ReasoningStyle::brief;
    else if (style == "cot") agent.reasoning = ReasoningStyle::cot;
    else fail(section, "reasoning must be 'brief' or 'cot'");
  };

  if (kind == "scoring") {
    agent.kind = AgentKind::scoring;
    apply_reasoning();
    ScoringSpec spec;
    spec.scoring_task = require_string(section, "scoring_task");
    spec.scoring_rules = require_string(section, "scoring_rules");
    for (const auto& item : require(section, "scoring_set").as_array()) {
      spec.scoring_set.push_back(item.as_integer());
    }
    if (spec.scoring_set.empty()) fail(section, "scoring_set must be nonempty");
    std::sort(spec.scoring_set.begin(), spec.scoring_set.end());
    if (std::adjacent_find(spec.scoring_set.begin(), spec.scoring_set.end()) !=
        spec.scoring_set.end()) {
      fail(section, "scoring_set values must be distinct");
    }
    agent.kind_spec = std::move(spec);
  } else if (kind == "title_abstract") {
    agent.kind = AgentKind::title_abstract;
    apply_reasoning();
    TitleAbstractSpec spec;
    spec.inclusion_criteria = require_string(section, "inclusion_criteria");
    if (spec.inclusion_criteria.empty()) {
      fail(section, "inclusion_criteria must be nonempty");
    }
    spec.exclusion_criteria =
        optional_string(section, "exclusion_criteria", "Not specified");
    agent.kind_spec = std::move(spec);
  } else if (kind == "abstraction") {
    agent.kind = AgentKind::abstraction;
    if (reasoning != nullptr) {
      fail(section, "reasoning applies only to scoring/title_abstract agents");
    }
    AbstractionSpec spec;
    spec.keys = parse_schema_table(section, require(section, "abstraction_keys"),
                                   /*abstraction_kinds_only=*/true);
    for (const auto& [key, v] : require(section, "key_descriptions").as_table()) {
      spec.key_descriptions.emplace_back(key, v.as_string());
    }
    for (const auto& [key, k] : spec.keys) {
      if (spec.description_for(key) == nullptr) {
        fail(section, "abstraction key '" + key + "' has no description");
      }
    }
    agent.kind_spec = std::move(spec);
  } else if (kind == "custom") {
    agent.kind = AgentKind::custom;
    if (reasoning != nullptr) {
      fail(section, "reasoning applies only to scoring/title_abstract agents");
    }
    CustomSpec spec;
    spec.prompt_template = require_string(section, "prompt_template");
    spec.input_description = optional_string(section, "input_description");
    spec.response_schema.fields =
        parse_schema_table(section, require(section, "response_format"),
                           /*abstraction_kinds_only=*/false);
    try {
      check_custom_template(spec);
    } catch (const PromptError& e) {
      fail(section, e.what());
    }
    agent.kind_spec = std::move(spec);
  } else {
    fail(section, "unknown agent kind '" + kind + "'");
  }
  return agent;
}

RoundSpec parse_round(const Section& section) {
  check_known_keys(section,
                   {"id", "reviewers", "text_inputs", "image_inputs", "filter"});
  RoundSpec round;
  round.round_id = require_string(section, "id");
  if (!is_round_id(round.round_id)) {
    fail(section, "round id '" + round.round_id + "' must match [A-Za-z0-9]+");
  }
  round.reviewers = string_array(require(section, "reviewers"));
  if (round.reviewers.empty()) fail(section, "reviewers must be nonempty");
  round.text_inputs = string_array(require(section, "text_inputs"));
  if (round.text_inputs.empty()) fail(section, "text_inputs must be nonempty");
  if (const Value* v = section.find("image_inputs")) {
    round.image_inputs = string_array(*v);
  }
  for (const auto& column : round.text_inputs) {
    if (!is_column_name(column)) {
      fail(section, "text input '" + column + "' is not a valid column name");
    }
  }
  for (const auto& column : round.image_inputs) {
    if (!is_column_name(column)) {
      fail(section, "image input '" + column + "' is not a valid column name");
    }
  }
  if (const Value* v = section.find("filter")) {
    round.filter_source = v->as_string();
    try {
      round.filter = FilterExpr::parse(round.filter_source);
    } catch (const FilterParseError& e) {
      fail(section, std::string("filter: ") + e.what());
    }
  }
  return round;
}

ConsensusConfig parse_consensus(const Section& section) {
  check_known_keys(section, {"junior_columns", "senior_column", "output_column",
                             "neutral_score"});
  ConsensusConfig config;
  const auto juniors = string_array(require(section, "junior_columns"));
  if (juniors.size() != 2) {
    fail(section, "junior_columns must list exactly two columns");
  }
  config.junior1_column = juniors[0];
  config.junior2_column = juniors[1];
  config.senior_column = require_string(section, "senior_column");
  config.output_column =
      optional_string(section, "output_column", config.output_column);
  if (const Value* v = section.find("neutral_score")) {
    config.neutral_score = static_cast<int>(v->as_integer());
  }
  const std::set<std::string> distinct{config.junior1_column,
                                       config.junior2_column,
                                       config.senior_column};
  if (distinct.size() != 3) {
    fail(section, "junior and senior columns must be three distinct columns");
  }
  return config;
}

}  // namespace

WorkflowSchema WorkflowConfig::schema() const {
  WorkflowSchema s;
  s.rounds = rounds;
  s.max_concurrency = settings.max_concurrency;
  return s;
}

AgentRegistry WorkflowConfig::build_agent_registry() const {
  AgentRegistry registry;
  for (const auto& agent : agents) registry.add(agent);
  return registry;
}

ProviderRegistry WorkflowConfig::build_provider_registry() const {
  ProviderRegistry registry;
  for (const auto& provider : providers) {
    if (provider.kind == ProviderKind::mock) {
      std::filesystem::path script_path(provider.mock_script);
      if (script_path.is_relative()) script_path = base_dir / script_path;
      MockScript script = MockScript::load(script_path);
      if (settings.seed != 0 && script.seed() == 0) {
        script.set_seed(settings.seed);
      }
      registry.add_mock(provider, std::move(script));
    } else {
      registry.add(provider);
    }
  }
  return registry;
}

const ProviderConfig* WorkflowConfig::find_provider(std::string_view name) const {
  for (const auto& p : providers) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

WorkflowConfig parse_config(std::string_view text,
                            const std::filesystem::path& base_dir) {
  const toml::Document doc = toml::parse(text);
  WorkflowConfig config;
  config.base_dir = base_dir;

  for (const auto& section : doc.sections) {
    if (section.name == "settings") {
      if (section.is_array) fail(section, "[settings] is a single section");
      check_known_keys(section, {"max_concurrency", "seed", "env_file"});
      if (const Value* v = section.find("max_concurrency")) {
        const long long n = v->as_integer();
        if (n < 1) fail(section, "max_concurrency must be >= 1");
        config.settings.max_concurrency = static_cast<int>(n);
      }
      if (const Value* v = section.find("seed")) {
        const long long n = v->as_integer();
        if (n < 0) fail(section, "seed must be >= 0");
        config.settings.seed = static_cast<std::uint64_t>(n);
      }
      config.settings.env_file = optional_string(section, "env_file");
    } else if (section.name == "provider") {
      if (!section.is_array) fail(section, "use [[provider]] (array section)");
      config.providers.push_back(parse_provider(section));
    } else if (section.name == "agent") {
      if (!section.is_array) fail(section, "use [[agent]] (array section)");
      config.agents.push_back(parse_agent(section));
    } else if (section.name == "round") {
      if (!section.is_array) fail(section, "use [[round]] (array section)");
      config.rounds.push_back(parse_round(section));
    } else if (section.name == "consensus") {
      if (section.is_array) fail(section, "[consensus] is a single section");
      if (config.consensus) fail(section, "[consensus] given twice");
      config.consensus = parse_consensus(section);
    } else {
      fail(section, "unknown section");
    }
  }

  // cross-reference checks
  std::set<std::string> provider_names;
  for (const auto& p : config.providers) {
    if (!provider_names.insert(p.name).second) {
      throw ConfigError("duplicate provider '" + p.name + "'");
    }
  }
  std::set<std::string> agent_names;
  for (const auto& a : config.agents) {
    if (!agent_names.insert(a.name).second) {
      throw ConfigError("duplicate agent '" + a.name + "'");
    }
    if (provider_names.find(a.provider) == provider_names.end()) {
      throw ConfigError("agent '" + a.name + "' references unknown provider '" +
                        a.provider + "'");
    }
  }
  std::set<std::string> round_ids;
  for (const auto& r : config.rounds) {
    if (!round_ids.insert(r.round_id).second) {
      throw ConfigError("duplicate round id '" + r.round_id + "'");
    }
    std::set<std::string> reviewers;
    for (const auto& reviewer : r.reviewers) {
      if (!reviewers.insert(reviewer).second) {
        throw ConfigError("round '" + r.round_id + "' lists reviewer '" +
                          reviewer + "' twice");
      }
      if (agent_names.find(reviewer) == agent_names.end()) {
        throw ConfigError("round '" + r.round_id +
                          "' references unknown agent '" + reviewer + "'");
      }
    }
  }
  return config;
}

WorkflowConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  WorkflowConfig config =
      parse_config(buf.str(), path.has_parent_path() ? path.parent_path()
                                                     : std::filesystem::path("."));
  if (!config.settings.env_file.empty()) {
    std::filesystem::path env_path(config.settings.env_file);
    if (env_path.is_relative()) env_path = config.base_dir / env_path;
    load_env_file(env_path);
  }
  return config;
}

// ---------------------------------------------------------------------------
// canonical serialization

namespace {

std::string quote(const std::string& value) { return toml::escape_string(value); }

void write_model_args(std::string& out, const char* key, const ModelArgs& args) {
  if (args.empty()) return;
  out += key;
  out += " = { ";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ", ";
    out += args[i].first + " = ";
    const ConfigValue& v = args[i].second;
    if (const auto* s = std::get_if<std::string>(&v)) out += quote(*s);
    else if (const auto* n = std::get_if<long long>(&v)) out += std::to_string(*n);
    else if (const auto* d = std::get_if<Decimal>(&v)) out += d->to_string();
    else out += std::get<bool>(v) ? "true" : "false";
  }
  out += " }\n";
}

void write_string_array(std::string& out, const char* key,
                        const std::vector<std::string>& values) {
  out += key;
  out += " = [";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += quote(values[i]);
  }
  out += "]\n";
}

void write_schema_table(std::string& out, const char* key,
                        const std::vector<std::pair<std::string, FieldKind>>& fields) {
  out += key;
  out += " = { ";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ", ";
    out += fields[i].first + " = " + quote(fields[i].second.to_string());
  }
  out += " }\n";
}

}  // namespace

std::string serialize_config(const WorkflowConfig& config) {
  std::string out;
  const ProviderConfig provider_defaults;

  out += "[settings]\n";
  out += "max_concurrency = " + std::to_string(config.settings.max_concurrency) +
         "\n";
  if (config.settings.seed != 0) {
    out += "seed = " + std::to_string(config.settings.seed) + "\n";
  }
  if (!config.settings.env_file.empty()) {
    out += "env_file = " + quote(config.settings.env_file) + "\n";
  }

  for (const auto& p : config.providers) {
    out += "\n[[provider]]\n";
    out += "name = " + quote(p.name) + "\n";
    out += std::string("kind = ") +
           (p.kind == ProviderKind::mock ? "\"mock\"" : "\"openai_compatible\"") +
           "\n";
    out += "model = " + quote(p.model) + "\n";
    if (p.kind == ProviderKind::mock) {
      out += "script = " + quote(p.mock_script) + "\n";
    } else {
      if (p.base_url != provider_defaults.base_url) {
        out += "base_url = " + quote(p.base_url) + "\n";
      }
      out += "api_key_env = " + quote(p.api_key_env) + "\n";
    }
    write_model_args(out, "model_args", p.model_args);
    if (p.price) {
      out += "price = { input = " + p.price->input_cost_per_token.to_string() +
             ", output = " + p.price->output_cost_per_token.to_string() + " }\n";
    }
    if (p.max_retries != provider_defaults.max_retries) {
      out += "max_retries = " + std::to_string(p.max_retries) + "\n";
    }
    if (p.backoff_ms != provider_defaults.backoff_ms) {
      out += "backoff_ms = [";
      for (std::size_t i = 0; i < p.backoff_ms.size(); ++i) {
        if (i > 0) out += ", ";
        out += std::to_string(p.backoff_ms[i]);
      }
      out += "]\n";
    }
    if (!(p.timeout_seconds == provider_defaults.timeout_seconds)) {
      out += "timeout_seconds = " + p.timeout_seconds.to_string() + "\n";
    }
    if (!p.supports_images) out += "supports_images = false\n";
  }

  for (const auto& a : config.agents) {
    out += "\n[[agent]]\n";
    out += "name = " + quote(a.name) + "\n";
    out += "provider = " + quote(a.provider) + "\n";
    out += std::string("kind = \"") + agent_kind_name(a.kind) + "\"\n";
    if (!a.backstory.empty()) out += "backstory = " + quote(a.backstory) + "\n";
    if (a.kind == AgentKind::scoring || a.kind == AgentKind::title_abstract) {
      out += std::string("reasoning = \"") + reasoning_style_name(a.reasoning) +
             "\"\n";
    }
    if (!a.additional_context.static_text.empty()) {
      out += "additional_context = " + quote(a.additional_context.static_text) +
             "\n";
    }
    if (!a.examples.empty()) {
      out += "examples = [";
      for (std::size_t i = 0; i < a.examples.size(); ++i) {
        if (i > 0) out += ", ";
        out += "[" + quote(a.examples[i].first) + ", " +
               quote(a.examples[i].second) + "]";
      }
      out += "]\n";
    }
    write_model_args(out, "model_args", a.model_args);

    switch (a.kind) {
      case AgentKind::scoring: {
        const auto& spec = std::get<ScoringSpec>(a.kind_spec);
        out += "scoring_task = " + quote(spec.scoring_task) + "\n";
        out += "scoring_set = [";
        for (std::size_t i = 0; i < spec.scoring_set.size(); ++i) {
          if (i > 0) out += ", ";
          out += std::to_string(spec.scoring_set[i]);
        }
        out += "]\n";
        out += "scoring_rules = " + quote(spec.scoring_rules) + "\n";
        break;
      }
      case AgentKind::title_abstract: {
        const auto& spec = std::get<TitleAbstractSpec>(a.kind_spec);
        out += "inclusion_criteria = " + quote(spec.inclusion_criteria) + "\n";
        out += "exclusion_criteria = " + quote(spec.exclusion_criteria) + "\n";
        break;
      }
      case AgentKind::abstraction: {
        const auto& spec = std::get<AbstractionSpec>(a.kind_spec);
        write_schema_table(out, "abstraction_keys", spec.keys);
        out += "key_descriptions = { ";
        for (std::size_t i = 0; i < spec.key_descriptions.size(); ++i) {
          if (i > 0) out += ", ";
          out += spec.key_descriptions[i].first + " = " +
                 quote(spec.key_descriptions[i].second);
        }
        out += " }\n";
        break;
      }
      case AgentKind::custom: {
        const auto& spec = std::get<CustomSpec>(a.kind_spec);
        out += "prompt_template = " + quote(spec.prompt_template) + "\n";
        if (!spec.input_description.empty()) {
          out += "input_description = " + quote(spec.input_description) + "\n";
        }
        write_schema_table(out, "response_format", spec.response_schema.fields);
        break;
      }
    }
  }

  for (const auto& r : config.rounds) {
    out += "\n[[round]]\n";
    out += "id = " + quote(r.round_id) + "\n";
    write_string_array(out, "reviewers", r.reviewers);
    write_string_array(out, "text_inputs", r.text_inputs);
    if (!r.image_inputs.empty()) {
      write_string_array(out, "image_inputs", r.image_inputs);
    }
    if (r.filter) {
      // canonical filter text, not the original spelling
      out += "filter = " + quote(r.filter->to_string()) + "\n";
    }
  }

  if (config.consensus) {
    const auto& c = *config.consensus;
    out += "\n[consensus]\n";
    write_string_array(out, "junior_columns",
                       {c.junior1_column, c.junior2_column});
    out += "senior_column = " + quote(c.senior_column) + "\n";
    out += "output_column = " + quote(c.output_column) + "\n";
    if (c.neutral_score != 3) {
      out += "neutral_score = " + std::to_string(c.neutral_score) + "\n";
    }
  }
  return out;
}

void load_env_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open env file " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
      line.pop_back();
    }
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    if (line.compare(start, 7, "export ") == 0) start += 7;
    const std::size_t eq = line.find('=', start);
    if (eq == std::string::npos) continue;
    std::string key = line.substr(start, eq - start);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) {
      key.pop_back();
    }
    std::string value = line.substr(eq + 1);
    std::size_t vstart = value.find_first_not_of(" \t");
    value = vstart == std::string::npos ? "" : value.substr(vstart);
    while (!value.empty() && (value.back() == ' ' || value.back() == '\t')) {
      value.pop_back();
    }
    if (value.size() >= 2 &&
        ((value.front() == '"' && value.back() == '"') ||
         (value.front() == '\'' && value.back() == '\''))) {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) continue;
    // existing variables always win
    ::setenv(key.c_str(), value.c_str(), /*overwrite=*/0);
  }
}

}  // namespace reviewflow
