#pragma once

#include <string>

#include "reviewflow/provider.hpp"

namespace reviewflow {

/// Set this environment variable to any nonempty value to make every HTTP
/// provider call fail fast instead of opening a connection. Tests use it to
/// prove that validate-only and mock-only paths never touch the network.
inline constexpr const char* kNoNetworkEnvVar = "REVIEWFLOW_NO_NETWORK";

/// Chat-completions client for any OpenAI-compatible endpoint, cloud or
/// local: POST {base_url}/chat/completions with system+user messages and
/// model_args passed through; images attached as data-URL content parts.
class OpenAiClient : public Provider {
 public:
  OpenAiClient(ProviderConfig config, std::string api_key);

  RawCompletion complete(const CompletionRequest& request) override;
  bool supports_images() const override { return config_.supports_images; }

 private:
  ProviderConfig config_;
  std::string api_key_;
  std::string origin_;       // scheme://host[:port]
  std::string path_prefix_;  // e.g. "/v1"
};

}  // namespace reviewflow
