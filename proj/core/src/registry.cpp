#include "reviewflow/registry.hpp"

#include "reviewflow/openai_client.hpp"

namespace reviewflow {

void AgentRegistry::add(AgentSpec spec) {
  if (contains(spec.name)) {
    throw Error("duplicate agent '" + spec.name + "'");
  }
  agents_.push_back(std::move(spec));
}

bool AgentRegistry::contains(const std::string& name) const {
  for (const auto& a : agents_) {
    if (a.name == name) return true;
  }
  return false;
}

const AgentSpec& AgentRegistry::get(const std::string& name) const {
  for (const auto& a : agents_) {
    if (a.name == name) return a;
  }
  throw Error("unknown agent '" + name + "'");
}

void ProviderRegistry::add(ProviderConfig config) {
  const std::string name = config.name;
  if (contains(name)) throw Error("duplicate provider '" + name + "'");
  entries_.emplace(name, Entry{std::move(config), nullptr});
}

void ProviderRegistry::add_mock(ProviderConfig config, MockScript script) {
  const std::string name = config.name;
  if (contains(name)) throw Error("duplicate provider '" + name + "'");
  auto instance = std::make_shared<MockProvider>(std::move(script));
  entries_.emplace(name, Entry{std::move(config), std::move(instance)});
}

void ProviderRegistry::add_instance(ProviderConfig config,
                                    std::shared_ptr<Provider> instance) {
  const std::string name = config.name;
  if (contains(name)) throw Error("duplicate provider '" + name + "'");
  entries_.emplace(name, Entry{std::move(config), std::move(instance)});
}

bool ProviderRegistry::contains(const std::string& name) const {
  return entries_.find(name) != entries_.end();
}

ProviderRegistry::Entry& ProviderRegistry::entry(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error("unknown provider '" + name + "'");
  return it->second;
}

const ProviderRegistry::Entry& ProviderRegistry::entry(
    const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error("unknown provider '" + name + "'");
  return it->second;
}

const ProviderConfig& ProviderRegistry::config(const std::string& name) const {
  return entry(name).config;
}

Provider& ProviderRegistry::instance(const std::string& name) {
  std::lock_guard<std::mutex> lock(*mutex_);
  Entry& e = entry(name);
  if (!e.instance) {
    if (e.config.kind == ProviderKind::mock) {
      e.instance = std::make_shared<MockProvider>(
          MockScript::load(e.config.mock_script));
    } else {
      const std::string key = resolve_credential(e.config, environment_snapshot());
      e.instance = std::make_shared<OpenAiClient>(e.config, key);
    }
  }
  return *e.instance;
}

MockProvider* ProviderRegistry::mock(const std::string& name) {
  std::lock_guard<std::mutex> lock(*mutex_);
  Entry& e = entry(name);
  return dynamic_cast<MockProvider*>(e.instance.get());
}

}  // namespace reviewflow
