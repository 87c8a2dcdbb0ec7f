#include "reviewflow/mock_provider.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "reviewflow/errors.hpp"

namespace reviewflow {

using nlohmann::json;

void MockScript::set_response(const std::string& agent, long long row,
                              std::string text) {
  responses_[{agent, row}] = std::move(text);
}

void MockScript::set_injection(const std::string& agent, long long row,
                               MockInjection inj) {
  injections_[{agent, row}] = std::move(inj);
}

void MockScript::set_latency(int base_ms, int jitter_ms, std::uint64_t seed) {
  latency_base_ms_ = base_ms;
  latency_jitter_ms_ = jitter_ms;
  seed_ = seed;
}

const std::string* MockScript::response_for(const std::string& agent,
                                            long long row) const {
  auto it = responses_.find({agent, row});
  if (it != responses_.end()) return &it->second;
  if (default_response_) return &*default_response_;
  return nullptr;
}

const MockInjection* MockScript::injection_for(const std::string& agent,
                                               long long row) const {
  auto it = injections_.find({agent, row});
  return it == injections_.end() ? nullptr : &it->second;
}

MockScript MockScript::from_json_text(const std::string& text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw IoError("mock script is not a JSON object");
  }
  MockScript script;
  if (doc.contains("default")) {
    script.set_default(doc["default"].get<std::string>());
  }
  script.latency_base_ms_ = doc.value("latency_ms", 0);
  script.latency_jitter_ms_ = doc.value("jitter_ms", 0);
  script.seed_ = doc.value("seed", std::uint64_t{0});
  if (doc.contains("responses")) {
    for (const auto& entry : doc["responses"]) {
      const std::string agent = entry.at("agent").get<std::string>();
      const long long row = entry.at("row").get<long long>();
      if (entry.contains("text")) {
        script.set_response(agent, row, entry["text"].get<std::string>());
      }
      if (entry.value("fail_first", 0) > 0) {
        MockInjection inj;
        inj.fail_first = entry["fail_first"].get<int>();
        inj.fail_text = entry.value("fail_text", std::string("not json"));
        inj.fail_transport = entry.value("fail_kind", std::string("invalid")) ==
                             "transport";
        script.set_injection(agent, row, std::move(inj));
      }
    }
  }
  return script;
}

MockScript MockScript::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open mock script " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

namespace {

long long mock_tokens(const std::string& text) {
  return static_cast<long long>((text.size() + 3) / 4);
}

std::uint64_t mix_hash(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

void MockProvider::reset_counters() {
  total_attempts_.store(0);
  in_flight_.store(0);
  max_in_flight_.store(0);
}

RawCompletion MockProvider::complete(const CompletionRequest& request) {
  total_attempts_.fetch_add(1);
  const int current = in_flight_.fetch_add(1) + 1;
  int seen = max_in_flight_.load();
  while (current > seen &&
         !max_in_flight_.compare_exchange_weak(seen, current)) {
  }

  struct InFlightGuard {
    std::atomic<int>& counter;
    ~InFlightGuard() { counter.fetch_sub(1); }
  } guard{in_flight_};

  if (script_.latency_base_ms() > 0 || script_.latency_jitter_ms() > 0) {
    std::uint64_t h = script_.seed();
    for (char c : request.agent_name) h = mix_hash(h, static_cast<unsigned char>(c));
    h = mix_hash(h, static_cast<std::uint64_t>(request.row_index));
    h = mix_hash(h, static_cast<std::uint64_t>(request.attempt));
    int ms = script_.latency_base_ms();
    if (script_.latency_jitter_ms() > 0) {
      ms += static_cast<int>(h % static_cast<std::uint64_t>(
                                     script_.latency_jitter_ms() + 1));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(ms));
  }

  const MockInjection* inj =
      script_.injection_for(request.agent_name, request.row_index);
  std::string text;
  if (inj != nullptr && request.attempt < inj->fail_first) {
    if (inj->fail_transport) {
      throw ProviderError(ProviderError::Kind::transport_error,
                          "injected transport failure for agent '" +
                              request.agent_name + "' row " +
                              std::to_string(request.row_index));
    }
    text = inj->fail_text;
  } else {
    const std::string* scripted =
        script_.response_for(request.agent_name, request.row_index);
    if (scripted == nullptr) {
      throw ProviderError(ProviderError::Kind::transport_error,
                          "mock script has no response for agent '" +
                              request.agent_name + "' row " +
                              std::to_string(request.row_index));
    }
    text = *scripted;
  }

  RawCompletion out;
  out.input_tokens = mock_tokens(request.prompt);
  out.output_tokens = mock_tokens(text);
  out.text = std::move(text);
  return out;
}

}  // namespace reviewflow
