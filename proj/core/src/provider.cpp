#include "reviewflow/provider.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

extern char** environ;

namespace reviewflow {

const char* ProviderError::kind_name(Kind kind) {
  switch (kind) {
    case Kind::auth_missing: return "auth_missing";
    case Kind::transport_error: return "transport_error";
    case Kind::schema_violation: return "schema_violation";
    case Kind::unsupported_feature: return "unsupported_feature";
  }
  return "unknown";
}

namespace {

void backoff_sleep(const ProviderConfig& config, int retry_index) {
  if (config.backoff_ms.empty()) return;
  const std::size_t i =
      std::min(static_cast<std::size_t>(retry_index), config.backoff_ms.size() - 1);
  const int ms = config.backoff_ms[i];
  if (ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(ms));
}

}  // namespace

std::pair<ReviewOutput, Usage> complete_structured(
    Provider& backend, const ProviderConfig& config,
    const CompletionRequest& request, const OutputSchema& schema) {
  if (request.prompt.empty()) {
    throw std::invalid_argument("complete_structured: empty prompt");
  }
  if (!request.image_paths.empty() && !config.supports_images) {
    throw ProviderError(ProviderError::Kind::unsupported_feature,
                        "provider '" + config.name +
                            "' is configured text-only but images were given");
  }

  Usage usage;
  std::string prompt = request.prompt;
  std::string last_raw;
  std::string last_error;
  const int max_attempts = config.max_retries + 1;

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    CompletionRequest attempt_request = request;
    attempt_request.prompt = prompt;
    attempt_request.attempt = attempt;

    RawCompletion raw;
    try {
      raw = backend.complete(attempt_request);
    } catch (ProviderError e) {
      if (e.kind() != ProviderError::Kind::transport_error ||
          attempt + 1 >= max_attempts) {
        e.usage = usage;
        throw e;
      }
      backoff_sleep(config, attempt);
      continue;
    }
    usage.input_tokens += raw.input_tokens;
    usage.output_tokens += raw.output_tokens;

    ReviewOutput output;
    std::string error;
    if (schema.parse_and_validate(raw.text, output, error)) {
      usage.retries_used = attempt;
      return {std::move(output), usage};
    }
    last_raw = raw.text;
    last_error = error;
    if (attempt + 1 < max_attempts) {
      prompt = request.prompt +
               "\n\nYour previous response was rejected: " + error +
               "\nRespond again with a single valid JSON object only.";
      backoff_sleep(config, attempt);
    }
  }
  ProviderError err(
      ProviderError::Kind::schema_violation,
      "response failed validation after " + std::to_string(max_attempts) +
          " attempts: " + last_error,
      last_raw);
  usage.retries_used = config.max_retries;
  err.usage = usage;
  throw err;
}

Decimal estimate_cost(const Usage& usage, const Price& price) {
  return Decimal::from_int(usage.input_tokens) * price.input_cost_per_token +
         Decimal::from_int(usage.output_tokens) * price.output_cost_per_token;
}

std::string resolve_credential(const ProviderConfig& config,
                               const std::map<std::string, std::string>& env) {
  if (config.kind == ProviderKind::mock) {
    throw std::logic_error("resolve_credential called for a mock provider");
  }
  auto it = env.find(config.api_key_env);
  if (it == env.end() || it->second.empty()) {
    throw ProviderError(ProviderError::Kind::auth_missing,
                        "environment variable '" + config.api_key_env +
                            "' is unset or empty");
  }
  return it->second;
}

std::map<std::string, std::string> environment_snapshot() {
  std::map<std::string, std::string> env;
  for (char** p = environ; p != nullptr && *p != nullptr; ++p) {
    const std::string entry(*p);
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos) continue;
    env.emplace(entry.substr(0, eq), entry.substr(eq + 1));
  }
  return env;
}

}  // namespace reviewflow
