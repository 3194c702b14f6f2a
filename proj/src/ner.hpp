#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"

namespace eae {

// Source of typed entity mentions for raw sentence text. Mentions carry
// code point offsets into the text; ids may be left empty.
class NerProvider {
 public:
  virtual ~NerProvider() = default;
  virtual std::string_view kind() const = 0;
  // `sentence_id` is a lookup hint for providers that can use it.
  virtual std::vector<EntityMention> Recognize(std::string_view text,
                                               std::string_view sentence_id) = 0;
};

// Returns scripted mentions keyed by exact text; unknown text yields none.
class MockNerProvider final : public NerProvider {
 public:
  explicit MockNerProvider(
      std::map<std::string, std::vector<EntityMention>, std::less<>> script)
      : script_(std::move(script)) {}

  std::string_view kind() const override { return "mock"; }
  std::vector<EntityMention> Recognize(std::string_view text,
                                       std::string_view sentence_id) override;

 private:
  std::map<std::string, std::vector<EntityMention>, std::less<>> script_;
};

// Gold entities from an annotated corpus, looked up by sentence id and
// falling back to normalized text.
class GoldNerProvider final : public NerProvider {
 public:
  explicit GoldNerProvider(const Corpus& corpus);

  std::string_view kind() const override { return "gold"; }
  std::vector<EntityMention> Recognize(std::string_view text,
                                       std::string_view sentence_id) override;

 private:
  std::map<std::string, std::vector<EntityMention>, std::less<>> by_id_;
  std::map<std::string, std::vector<EntityMention>, std::less<>> by_text_;
};

struct RemoteNerConfig {
  std::string endpoint;  // http(s)://host[:port]/path
  std::string token;     // sent as a bearer token when nonempty
  std::chrono::milliseconds timeout{10000};
  int max_attempts = 3;
  std::chrono::milliseconds backoff{200};

  // EAE_NER_ENDPOINT, EAE_NER_TOKEN, EAE_NER_TIMEOUT_MS.
  static RemoteNerConfig FromEnvironment();
};

// POSTs {"text": ...} and expects {"entities": [{"type", "start", "end",
// optional "id", optional "surface"}]}. Transport failures and 5xx/429
// responses are retried up to max_attempts, then raised as kTransport;
// anything unparseable is kProtocol.
class RemoteNerProvider final : public NerProvider {
 public:
  explicit RemoteNerProvider(RemoteNerConfig config);

  std::string_view kind() const override { return "remote"; }
  std::vector<EntityMention> Recognize(std::string_view text,
                                       std::string_view sentence_id) override;

 private:
  RemoteNerConfig config_;
  std::string scheme_host_port_;
  std::string path_;
};

// Parses a provider response body; shared by the remote client and tests.
std::vector<EntityMention> ParseNerResponse(std::string_view body);

}  // namespace eae
