#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "reviewflow/agent.hpp"
#include "reviewflow/mock_provider.hpp"
#include "reviewflow/provider.hpp"

namespace reviewflow {

/// Named agent specs, insertion-ordered.
class AgentRegistry {
 public:
  void add(AgentSpec spec);
  bool contains(const std::string& name) const;
  const AgentSpec& get(const std::string& name) const;  // throws Error
  const std::vector<AgentSpec>& all() const { return agents_; }

 private:
  std::vector<AgentSpec> agents_;
};

/// Named provider configs plus their backend instances. Mock backends are
/// built eagerly from their scripts; HTTP backends are built on first use so
/// that validate-only paths never resolve credentials or open connections.
class ProviderRegistry {
 public:
  /// openai_compatible config; the client is created lazily.
  void add(ProviderConfig config);
  /// mock config with its script.
  void add_mock(ProviderConfig config, MockScript script);
  /// Any custom backend (tests, embedding callers).
  void add_instance(ProviderConfig config, std::shared_ptr<Provider> instance);

  bool contains(const std::string& name) const;
  const ProviderConfig& config(const std::string& name) const;
  Provider& instance(const std::string& name);

  /// The mock backend for `name`, or nullptr when it is not a mock.
  /// Tests read its attempt and in-flight counters.
  MockProvider* mock(const std::string& name);

 private:
  struct Entry {
    ProviderConfig config;
    std::shared_ptr<Provider> instance;
  };

  Entry& entry(const std::string& name);
  const Entry& entry(const std::string& name) const;

  std::map<std::string, Entry> entries_;
  std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
};

}  // namespace reviewflow
