#include "ner.hpp"

#include <cstdlib>
#include <thread>

#include "error.hpp"
#include "httplib.h"
#include "json.hpp"
#include "utf8.hpp"

namespace eae {

std::vector<EntityMention> MockNerProvider::Recognize(
    std::string_view text, std::string_view /*sentence_id*/) {
  auto it = script_.find(text);
  return it == script_.end() ? std::vector<EntityMention>{} : it->second;
}

GoldNerProvider::GoldNerProvider(const Corpus& corpus) {
  for (const auto& s : corpus.sentences()) {
    by_id_.emplace(s.id, s.entities);
    by_text_.emplace(s.text, s.entities);
  }
}

std::vector<EntityMention> GoldNerProvider::Recognize(
    std::string_view text, std::string_view sentence_id) {
  if (!sentence_id.empty()) {
    if (auto it = by_id_.find(sentence_id); it != by_id_.end()) {
      return it->second;
    }
  }
  auto it = by_text_.find(utf8::NormalizeWhitespace(text));
  return it == by_text_.end() ? std::vector<EntityMention>{} : it->second;
}

RemoteNerConfig RemoteNerConfig::FromEnvironment() {
  RemoteNerConfig c;
  if (const char* v = std::getenv("EAE_NER_ENDPOINT")) c.endpoint = v;
  if (const char* v = std::getenv("EAE_NER_TOKEN")) c.token = v;
  if (const char* v = std::getenv("EAE_NER_TIMEOUT_MS")) {
    c.timeout = std::chrono::milliseconds(std::atol(v));
  }
  return c;
}

RemoteNerProvider::RemoteNerProvider(RemoteNerConfig config)
    : config_(std::move(config)) {
  const auto scheme_end = config_.endpoint.find("://");
  if (config_.endpoint.empty() || scheme_end == std::string::npos) {
    throw Error(ErrorCode::kConfig,
                "remote NER endpoint must look like http(s)://host/path, got '" +
                    config_.endpoint + "'");
  }
  const auto path_start = config_.endpoint.find('/', scheme_end + 3);
  scheme_host_port_ = config_.endpoint.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/"
                                          : config_.endpoint.substr(path_start);
  if (config_.max_attempts < 1) config_.max_attempts = 1;
}

std::vector<EntityMention> ParseNerResponse(std::string_view body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kProtocol,
                std::string("NER response is not JSON: ") + e.what());
  }
  std::vector<EntityMention> out;
  try {
    for (const auto& e : doc.at("entities")) {
      EntityMention m;
      m.type = e.at("type").get<std::string>();
      m.start = e.at("start").get<std::size_t>();
      m.end = e.at("end").get<std::size_t>();
      m.id = e.value("id", "");
      m.surface = e.value("surface", "");
      out.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kProtocol,
                std::string("malformed NER response: ") + e.what());
  }
  return out;
}

std::vector<EntityMention> RemoteNerProvider::Recognize(
    std::string_view text, std::string_view /*sentence_id*/) {
  httplib::Client client(scheme_host_port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
      config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!config_.token.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.token);
  }
  const std::string body = nlohmann::json{{"text", text}}.dump();

  std::string last_error;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    if (attempt > 1) std::this_thread::sleep_for(config_.backoff * (attempt - 1));
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500 || res->status == 429) {
      last_error = "server returned HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kProtocol,
                  "NER service returned HTTP " + std::to_string(res->status));
    }
    return ParseNerResponse(res->body);
  }
  throw Error(ErrorCode::kTransport,
              "NER service unreachable after " +
                  std::to_string(config_.max_attempts) + " attempt(s): " +
                  last_error);
}

}  // namespace eae
