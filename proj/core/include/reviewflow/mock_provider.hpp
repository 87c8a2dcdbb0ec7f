#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "reviewflow/provider.hpp"

namespace reviewflow {

/// Makes the first `fail_first` attempts for a key misbehave: either return
/// `fail_text` (exercises the validation-retry path) or throw a transport
/// error.
struct MockInjection {
  int fail_first = 0;
  std::string fail_text = "not json";
  bool fail_transport = false;
};

/// Deterministic backend script: (agent_name, row_index) -> raw response
/// text, with an optional default and per-key failure injections. Lookups
/// are pure functions of the key, so two runs over the same script are
/// byte-identical.
class MockScript {
 public:
  void set_default(std::string text) { default_response_ = std::move(text); }
  void set_response(const std::string& agent, long long row, std::string text);
  void set_injection(const std::string& agent, long long row, MockInjection inj);

  /// Optional simulated latency: base plus a deterministic per-(key, attempt)
  /// jitter derived from `seed`. Output bytes never depend on it.
  void set_latency(int base_ms, int jitter_ms, std::uint64_t seed);
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  const std::string* response_for(const std::string& agent, long long row) const;
  const MockInjection* injection_for(const std::string& agent, long long row) const;

  int latency_base_ms() const { return latency_base_ms_; }
  int latency_jitter_ms() const { return latency_jitter_ms_; }
  std::uint64_t seed() const { return seed_; }

  static MockScript from_json_text(const std::string& text);
  static MockScript load(const std::filesystem::path& path);

 private:
  using Key = std::pair<std::string, long long>;
  std::map<Key, std::string> responses_;
  std::map<Key, MockInjection> injections_;
  std::optional<std::string> default_response_;
  int latency_base_ms_ = 0;
  int latency_jitter_ms_ = 0;
  std::uint64_t seed_ = 0;
};

/// In-process scriptable backend. Reports token counts as ceil(len/4) of the
/// prompt and the response text, and instruments attempt and in-flight
/// counters so tests can verify retry and concurrency bounds.
class MockProvider : public Provider {
 public:
  explicit MockProvider(MockScript script) : script_(std::move(script)) {}

  RawCompletion complete(const CompletionRequest& request) override;

  long long total_attempts() const { return total_attempts_.load(); }
  int max_in_flight() const { return max_in_flight_.load(); }
  void reset_counters();

  const MockScript& script() const { return script_; }

 private:
  MockScript script_;
  std::atomic<long long> total_attempts_{0};
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_in_flight_{0};
};

}  // namespace reviewflow
