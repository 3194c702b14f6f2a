#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "corpus.hpp"
#include "templates.hpp"

namespace eae {

enum class Label { kNegative = 0, kPositive = 1 };

std::string_view ToString(Label label);
Label ParseLabel(std::string_view name);

struct NliPair {
  std::string premise;
  std::string hypothesis;
  Label label = Label::kNegative;
  Phase split = Phase::kTrain;
  Relation relation = Relation::kHasAgent;
  std::string template_id;
  std::string sentence_id;
  std::string event_id;
  std::string entity_id;

  friend bool operator==(const NliPair&, const NliPair&) = default;
};

struct SplitConfig {
  double train_fraction = 0.70;
  std::uint64_t seed = 42;
  // Every event sentence goes to the test split (out-of-domain evaluation).
  bool test_only = false;
};

struct PremiseSplit {
  std::vector<AnnotatedSentence> train;
  std::vector<AnnotatedSentence> test;
};

// Sentence-level partition of the event sentences; deterministic in seed.
// Throws when the corpus has no event sentence.
PremiseSplit SplitPremises(const Corpus& corpus, const SplitConfig& cfg);

// One pair per gold relation and applicable template.
std::vector<NliPair> GeneratePositivePairs(
    std::span<const AnnotatedSentence> sentences, Phase phase,
    const TemplateRegistry& templates);

// One pair per non-gold type-compatible (event, entity) candidate and
// applicable template; the relation is dictated by the entity type.
std::vector<NliPair> GenerateNegativePairs(
    std::span<const AnnotatedSentence> sentences, Phase phase,
    const TemplateRegistry& templates);

// Cell counts keyed by (split, relation, label).
using DatasetStats = std::map<std::tuple<Phase, Relation, Label>, std::size_t>;

struct NliDataset {
  std::vector<NliPair> pairs;

  std::vector<NliPair> Split(Phase phase) const;
  DatasetStats Stats() const;
};

NliDataset BuildNliDataset(const Corpus& corpus, const SplitConfig& cfg,
                           const TemplateRegistry& templates);

// Line-delimited records, fields in the order: premise, hypothesis, label,
// split, relation, template_id, sentence_id, event_id, entity_id.
void WriteDataset(const NliDataset& dataset, std::ostream& out);
NliDataset ReadDataset(std::istream& in, const std::string& source_name);
NliDataset ReadDatasetFile(const std::filesystem::path& path);

}  // namespace eae
