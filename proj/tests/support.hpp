#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "corpus.hpp"
#include "pairgen.hpp"
#include "templates.hpp"

namespace eae::testing {

std::filesystem::path FixturePath(const std::string& name);

// Fresh empty directory under the system temp dir.
std::filesystem::path TempDir(const std::string& tag);

// Random corpus of single- and two-token mentions over all 21 types, with
// gold relations drawn from the compatible (event, entity) pairs. Some
// sentences carry no event and some events carry no argument.
Corpus SyntheticCorpus(std::uint64_t seed, std::size_t sentences);

// Relation admissible for an argument type, written out independently of
// the schema module.
std::optional<Relation> OracleRelationFor(const std::string& type);

using PairKey = std::tuple<std::string, std::string, std::string, std::string,
                           std::string, int>;  // sid, template, event, entity,
                                               // hypothesis, label

// Nested loops over templates x mentions x mentions with plain string
// replacement and a linear scan of the gold triples.
std::vector<PairKey> BruteForcePairs(std::span<const AnnotatedSentence> sentences,
                                     Phase phase,
                                     const TemplateRegistry& templates);

std::vector<PairKey> Keys(std::span<const NliPair> pairs);

// (event_id, entity_id, relation) for every candidate by brute force.
std::vector<std::tuple<std::string, std::string, Relation>> BruteForceCandidates(
    const AnnotatedSentence& sentence);

// Linearly separable NLI pairs: the hypothesis verbalizer decides the label.
std::vector<NliPair> SeparablePairs(std::uint64_t seed, std::size_t n);

}  // namespace eae::testing
