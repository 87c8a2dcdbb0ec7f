#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reviewflow/agent.hpp"
#include "reviewflow/consensus.hpp"
#include "reviewflow/errors.hpp"
#include "reviewflow/provider.hpp"
#include "reviewflow/registry.hpp"
#include "reviewflow/schema.hpp"

namespace reviewflow {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct WorkflowSettings {
  int max_concurrency = 10;
  std::uint64_t seed = 0;   // forwarded to mock scripts (latency jitter)
  std::string env_file;     // optional, resolved against the config directory
};

/// The declarative form of a whole review run: providers, agents, rounds,
/// optional consensus step, and engine settings.
struct WorkflowConfig {
  std::vector<ProviderConfig> providers;
  std::vector<AgentSpec> agents;
  std::vector<RoundSpec> rounds;
  std::optional<ConsensusConfig> consensus;
  WorkflowSettings settings;
  std::filesystem::path base_dir = ".";

  WorkflowSchema schema() const;
  AgentRegistry build_agent_registry() const;
  /// Loads mock scripts (paths resolved against base_dir); HTTP backends stay
  /// lazy so building the registry never touches credentials or the network.
  ProviderRegistry build_provider_registry() const;

  const ProviderConfig* find_provider(std::string_view name) const;
};

/// Parses the TOML-style config text: [settings], [[provider]], [[agent]],
/// [[round]], [consensus]. Compiles filter strings, validates every
/// cross-reference, and reports locations on error.
WorkflowConfig parse_config(std::string_view text,
                            const std::filesystem::path& base_dir = ".");

/// parse_config over a file; afterwards loads settings.env_file (if set)
/// into the process environment without overriding existing variables.
WorkflowConfig load_config(const std::filesystem::path& path);

/// Canonical serialization: fixed section and key order, escaped single-line
/// strings, exact decimals. parse(serialize(c)) == serialize-stable.
std::string serialize_config(const WorkflowConfig& config);

/// Loads KEY=VALUE lines (with # comments and optional quotes) into the
/// process environment; existing variables always win.
void load_env_file(const std::filesystem::path& path);

}  // namespace reviewflow
