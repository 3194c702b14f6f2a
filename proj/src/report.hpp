#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "corpus.hpp"
#include "evaluator.hpp"
#include "iaa.hpp"
#include "json.hpp"
#include "nli/trainer.hpp"
#include "pairgen.hpp"

// JSON shapes of every report the library emits. Undefined metrics are
// null rather than zero.
namespace eae::report {

using nlohmann::ordered_json;

ordered_json ToJson(const CorpusStats& stats);
// Rows per relation with train/test positive/negative cells, totals, and
// the train_positives / 4 + test_positives identity.
ordered_json ToJson(const DatasetStats& stats, std::size_t train_templates = 4);
ordered_json ToJson(const ClassMetrics& m);
ordered_json ToJson(const NliMetrics& m);
ordered_json ToJson(const IaaReport& r);
ordered_json ToJson(const ExtractionMetrics& m);
ordered_json ToJson(const nli::EpochMetrics& m);
ordered_json ToJson(const nli::FoldReport& f);

// Parses {"hasAgent": {"tp":..,"fn":..,"fp":..,"tn"?:..}, ...}.
IaaReport IaaFromCountsJson(const nlohmann::json& j);

// Lowercase hex SHA-256 of a file's bytes.
std::string Sha256File(const std::filesystem::path& path);

}  // namespace eae::report
