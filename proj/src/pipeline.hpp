#pragma once

#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"
#include "graph.hpp"
#include "ner.hpp"
#include "nli/scorer.hpp"
#include "templates.hpp"

namespace eae {

// Runs the provider over normalized text and validates the mentions.
// Missing ids become "<sentence_id>:T<k>", missing surfaces are filled in
// from the text. The result carries no relations.
AnnotatedSentence RecognizeEntities(std::string_view text,
                                    std::string_view sentence_id,
                                    NerProvider& provider);

struct Candidate {
  const EntityMention* event = nullptr;
  const EntityMention* entity = nullptr;
  Relation relation = Relation::kHasAgent;
};

// Every EVENT mention paired with every mention whose type is an argument
// type, in mention order. Events are never arguments.
std::vector<Candidate> CandidatePairs(const AnnotatedSentence& sentence);

// Scores 1 for gold triples and 0 otherwise.
class OracleScorer final : public nli::EntailmentScorer {
 public:
  explicit OracleScorer(std::span<const AnnotatedSentence> gold);

  std::vector<double> Score(
      std::span<const nli::PairQuery> queries) const override;

 private:
  std::set<std::tuple<std::string, std::string, Relation, std::string>> gold_;
};

struct ExtractionOptions {
  double threshold = 0.5;
  std::size_t batch_size = 64;
};

// One scorer call per candidate using each relation's test template.
// Edges with confidence >= threshold are kept, sorted.
EventArgumentGraph ExtractArguments(const AnnotatedSentence& sentence,
                                    const nli::EntailmentScorer& scorer,
                                    const TemplateRegistry& templates,
                                    const ExtractionOptions& options = {});

// Rule-based segmentation on . ! ? and their Arabic forms, and on newlines.
// Terminal punctuation stays with its sentence. Results are
// whitespace-normalized and nonempty.
std::vector<std::string> SplitSentences(std::string_view document);

struct SentenceFailure {
  std::string sentence_id;
  std::string message;
};

struct DocumentResult {
  std::vector<EventArgumentGraph> graphs;  // event-bearing sentences only
  std::vector<SentenceFailure> failures;
};

// Sentence ids are "<document_id>:<n>" with n counted from 1.
DocumentResult ProcessDocument(std::string_view document,
                               std::string_view document_id,
                               NerProvider& provider,
                               const nli::EntailmentScorer& scorer,
                               const TemplateRegistry& templates,
                               const ExtractionOptions& options = {});

// Extraction over an annotated corpus with entities taken from `provider`
// (normally GoldNerProvider). Sentences without events are skipped.
DocumentResult ExtractCorpus(const Corpus& corpus, NerProvider& provider,
                             const nli::EntailmentScorer& scorer,
                             const TemplateRegistry& templates,
                             const ExtractionOptions& options = {});

void WriteGraphs(std::span<const EventArgumentGraph> graphs, std::ostream& out);
std::vector<EventArgumentGraph> ReadGraphs(std::istream& in,
                                           const std::string& source_name);

}  // namespace eae
