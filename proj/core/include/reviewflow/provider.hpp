#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "reviewflow/decimal.hpp"
#include "reviewflow/errors.hpp"
#include "reviewflow/output_schema.hpp"
#include "reviewflow/review_output.hpp"

namespace reviewflow {

struct Usage {
  long long input_tokens = 0;
  long long output_tokens = 0;
  int retries_used = 0;
  bool operator==(const Usage&) const = default;
};

class ProviderError : public Error {
 public:
  enum class Kind {
    auth_missing,
    transport_error,
    schema_violation,
    unsupported_feature,
  };

  ProviderError(Kind kind, const std::string& message,
                std::string raw_text = {})
      : Error(message), kind_(kind), raw_text_(std::move(raw_text)) {}

  Kind kind() const { return kind_; }
  /// Last raw model text for schema_violation errors.
  const std::string& raw_text() const { return raw_text_; }

  static const char* kind_name(Kind kind);

  /// Tokens consumed before the call gave up; failed calls still cost money.
  Usage usage;

 private:
  Kind kind_;
  std::string raw_text_;
};

/// Scalar config value as written: strings, integers, exact decimals, bools.
using ConfigValue = std::variant<std::string, long long, Decimal, bool>;
using ModelArgs = std::vector<std::pair<std::string, ConfigValue>>;

/// Per-token prices in currency units.
struct Price {
  Decimal input_cost_per_token;
  Decimal output_cost_per_token;
  bool operator==(const Price&) const = default;
};

enum class ProviderKind { openai_compatible, mock };

struct ProviderConfig {
  std::string name;
  ProviderKind kind = ProviderKind::openai_compatible;
  std::string model;
  /// openai_compatible only; a local server is just a different base_url.
  std::string base_url = "https://api.openai.com/v1";
  /// Environment variable holding the credential (the value itself is never
  /// stored in config).
  std::string api_key_env = "OPENAI_API_KEY";
  ModelArgs model_args;
  std::optional<Price> price;
  int max_retries = 3;
  /// Backoff before retry k (transport and validation failures alike).
  std::vector<int> backoff_ms = {500, 1000, 2000};
  Decimal timeout_seconds = Decimal(60, 0);
  bool supports_images = true;
  /// mock kind only: path to the script file (relative to the config file).
  std::string mock_script;
};

/// One structured-completion call as the agents module issues it. agent_name
/// and row_index key the mock script and diagnostics; attempt counts from 0.
struct CompletionRequest {
  std::string prompt;
  std::vector<std::string> image_paths;
  std::string agent_name;
  long long row_index = 0;
  int attempt = 0;
  /// Per-agent generation parameters layered over the provider's defaults.
  ModelArgs model_args;
};

/// One raw backend response with backend-reported token counts.
struct RawCompletion {
  std::string text;
  long long input_tokens = 0;
  long long output_tokens = 0;
};

/// A chat-completion backend. Implementations must be safe for concurrent
/// complete() calls.
class Provider {
 public:
  virtual ~Provider() = default;
  /// One attempt. Throws ProviderError(transport_error) on transport failure.
  virtual RawCompletion complete(const CompletionRequest& request) = 0;
  virtual bool supports_images() const { return true; }
};

/// Runs the parse-validate-retry loop: calls the backend, validates the raw
/// text against `schema`, and on parse/validation failure retries up to
/// config.max_retries with the validation error appended to the prompt.
/// Usage sums token counts over all attempts. Throws ProviderError:
/// transport_error once retries are exhausted, schema_violation (carrying the
/// last raw text) when the response never validates, unsupported_feature when
/// images reach a text-only backend.
std::pair<ReviewOutput, Usage> complete_structured(
    Provider& backend, const ProviderConfig& config,
    const CompletionRequest& request, const OutputSchema& schema);

/// input_tokens * input_cost + output_tokens * output_cost, exact decimal.
Decimal estimate_cost(const Usage& usage, const Price& price);

/// Looks up config.api_key_env in the given environment map. Never logs the
/// value. Throws ProviderError(auth_missing) when unset or empty.
std::string resolve_credential(const ProviderConfig& config,
                               const std::map<std::string, std::string>& env);

/// Snapshot of the process environment.
std::map<std::string, std::string> environment_snapshot();

}  // namespace reviewflow
