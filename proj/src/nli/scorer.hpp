#pragma once

#include <span>
#include <string>
#include <vector>

#include "schema.hpp"

namespace eae::nli {

// One candidate (premise, hypothesis) with the provenance it was built from.
// Text-based models read only premise/hypothesis.
struct PairQuery {
  std::string premise;
  std::string hypothesis;
  std::string sentence_id;
  std::string event_id;
  std::string entity_id;
  Relation relation = Relation::kHasAgent;
};

// Anything that assigns an entailment probability to candidate pairs.
// Implementations are safe for concurrent const use.
class EntailmentScorer {
 public:
  virtual ~EntailmentScorer() = default;
  virtual std::vector<double> Score(std::span<const PairQuery> queries) const = 0;
};

}  // namespace eae::nli
