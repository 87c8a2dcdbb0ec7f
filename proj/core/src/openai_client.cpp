#include "reviewflow/openai_client.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>

namespace reviewflow {

using nlohmann::json;

namespace {

ProviderError transport(const std::string& message) {
  return ProviderError(ProviderError::Kind::transport_error, message);
}

std::string base64_encode(const std::string& bytes) {
  static const char alphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 3 <= bytes.size()) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                       static_cast<unsigned char>(bytes[i + 2]);
    out += alphabet[(v >> 18) & 63];
    out += alphabet[(v >> 12) & 63];
    out += alphabet[(v >> 6) & 63];
    out += alphabet[v & 63];
    i += 3;
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
    out += alphabet[(v >> 18) & 63];
    out += alphabet[(v >> 12) & 63];
    out += "==";
  } else if (rest == 2) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out += alphabet[(v >> 18) & 63];
    out += alphabet[(v >> 12) & 63];
    out += alphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::string mime_for(const std::string& path) {
  const std::size_t dot = path.find_last_of('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == "png") return "image/png";
  if (ext == "jpg" || ext == "jpeg") return "image/jpeg";
  if (ext == "webp") return "image/webp";
  if (ext == "gif") return "image/gif";
  return "application/octet-stream";
}

json data_url_part(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw transport("cannot read image file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  json part;
  part["type"] = "image_url";
  part["image_url"]["url"] =
      "data:" + mime_for(path) + ";base64," + base64_encode(buf.str());
  return part;
}

json config_value_to_json(const ConfigValue& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  if (const auto* i = std::get_if<long long>(&value)) return *i;
  if (const auto* d = std::get_if<Decimal>(&value)) return d->to_double();
  return std::get<bool>(value);
}

bool network_disabled() {
  const char* flag = std::getenv(kNoNetworkEnvVar);
  return flag != nullptr && *flag != '\0';
}

}  // namespace

OpenAiClient::OpenAiClient(ProviderConfig config, std::string api_key)
    : config_(std::move(config)), api_key_(std::move(api_key)) {
  std::string url = config_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw transport("base_url must include a scheme: " + url);
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    origin_ = url;
    path_prefix_.clear();
  } else {
    origin_ = url.substr(0, path_start);
    path_prefix_ = url.substr(path_start);
  }
}

RawCompletion OpenAiClient::complete(const CompletionRequest& request) {
  if (network_disabled()) {
    throw transport(std::string("network access disabled via ") +
                    kNoNetworkEnvVar);
  }

  json body;
  body["model"] = config_.model;
  json system_msg;
  system_msg["role"] = "system";
  system_msg["content"] =
      "You are a meticulous reviewer. Respond with a single JSON object and "
      "nothing else.";
  json user_msg;
  user_msg["role"] = "user";
  if (request.image_paths.empty()) {
    user_msg["content"] = request.prompt;
  } else {
    json parts = json::array();
    json text_part;
    text_part["type"] = "text";
    text_part["text"] = request.prompt;
    parts.push_back(std::move(text_part));
    for (const auto& path : request.image_paths) {
      parts.push_back(data_url_part(path));
    }
    user_msg["content"] = std::move(parts);
  }
  body["messages"] = json::array({system_msg, user_msg});
  for (const auto& [key, value] : config_.model_args) {
    body[key] = config_value_to_json(value);
  }
  for (const auto& [key, value] : request.model_args) {
    body[key] = config_value_to_json(value);
  }

  httplib::Client client(origin_);
  const auto timeout_s =
      static_cast<time_t>(config_.timeout_seconds.to_double());
  client.set_connection_timeout(timeout_s, 0);
  client.set_read_timeout(timeout_s, 0);
  client.set_write_timeout(timeout_s, 0);
  client.set_bearer_token_auth(api_key_);

  auto res = client.Post(path_prefix_ + "/chat/completions", body.dump(),
                         "application/json");
  if (!res) {
    throw transport("request to " + origin_ +
                    " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    std::string snippet = res->body.substr(0, 400);
    throw transport("HTTP " + std::to_string(res->status) + " from " +
                    origin_ + ": " + snippet);
  }
  json doc = json::parse(res->body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw transport("response from " + origin_ + " is not JSON");
  }

  RawCompletion out;
  try {
    out.text = doc.at("choices").at(0).at("message").at("content")
                   .get<std::string>();
  } catch (const json::exception&) {
    throw transport("response has no choices[0].message.content");
  }
  if (doc.contains("usage") && doc["usage"].is_object()) {
    out.input_tokens = doc["usage"].value("prompt_tokens", 0LL);
    out.output_tokens = doc["usage"].value("completion_tokens", 0LL);
  }
  return out;
}

}  // namespace reviewflow
