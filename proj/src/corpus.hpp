#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schema.hpp"

namespace eae {

// A typed span over a sentence. Offsets are code points into the
// whitespace-normalized sentence text, half-open.
struct EntityMention {
  std::string id;
  std::string sentence_id;
  std::string surface;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string type;

  bool IsEvent() const { return type == kEventType; }

  friend bool operator==(const EntityMention&, const EntityMention&) = default;
};

struct RelationTriple {
  std::string event_id;
  Relation relation = Relation::kHasAgent;
  std::string argument_id;

  friend auto operator<=>(const RelationTriple&,
                          const RelationTriple&) = default;
  friend bool operator==(const RelationTriple&,
                         const RelationTriple&) = default;
};

std::string ToString(const RelationTriple& triple);

struct AnnotatedSentence {
  std::string id;
  std::string text;
  std::vector<EntityMention> entities;
  std::vector<RelationTriple> relations;

  const EntityMention* FindEntity(std::string_view entity_id) const;
  bool HasEvent() const;
  bool HasRelation(const RelationTriple& triple) const;

  friend bool operator==(const AnnotatedSentence&,
                         const AnnotatedSentence&) = default;
};

struct CorpusMetadata {
  std::string name;
  std::string source;
  std::vector<std::string> domains;

  friend bool operator==(const CorpusMetadata&,
                         const CorpusMetadata&) = default;
};

// Immutable once constructed; construction validates every invariant and
// reports all violations together.
class Corpus {
 public:
  Corpus() = default;
  Corpus(CorpusMetadata metadata, std::vector<AnnotatedSentence> sentences);

  const CorpusMetadata& metadata() const { return metadata_; }
  std::span<const AnnotatedSentence> sentences() const { return sentences_; }
  const AnnotatedSentence* FindSentence(std::string_view id) const;
  std::size_t relation_count() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  CorpusMetadata metadata_;
  std::vector<AnnotatedSentence> sentences_;
};

// Returns every invariant violation, empty when valid.
std::vector<std::string> ValidateSentences(
    std::span<const AnnotatedSentence> sentences);

enum class CorpusFormat {
  kJsonLines,  // canonical: one sentence record per line
  kBio,        // token-per-line nested BIO with a relation sidecar
};

CorpusFormat ParseCorpusFormat(std::string_view name);

// `source_name` is used in error locators. `relations` is the sidecar
// stream for kBio and ignored for kJsonLines.
Corpus LoadCorpus(std::istream& in, CorpusFormat format,
                  const std::string& source_name,
                  std::istream* relations = nullptr);

Corpus LoadCorpusFile(const std::filesystem::path& path, CorpusFormat format,
                      const std::optional<std::filesystem::path>&
                          relations_path = std::nullopt);

// Canonical JSON-lines serialization, header record first.
void WriteCorpus(const Corpus& corpus, std::ostream& out);

struct CorpusStats {
  std::size_t sentences = 0;
  std::size_t entities = 0;
  std::size_t events = 0;
  std::map<Relation, std::size_t> relations;
  std::size_t relations_total = 0;
  std::size_t events_with_arguments = 0;
  std::size_t events_without_arguments = 0;
  std::size_t events_with_two_or_more_arguments = 0;
  // Two readings of "annotated with multiple agents": events, and the
  // hasAgent relations those events hold.
  std::size_t events_with_multiple_agents = 0;
  std::size_t agent_relations_in_multi_agent_events = 0;
};

CorpusStats ComputeStats(const Corpus& corpus);

// Sentences with at least one EVENT mention, corpus order preserved.
std::vector<AnnotatedSentence> EventSentences(const Corpus& corpus);

}  // namespace eae
