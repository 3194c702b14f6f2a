#pragma once

#include <string>
#include <vector>

#include "corpus.hpp"

namespace eae {

struct GraphEdge {
  std::string event_id;
  Relation relation = Relation::kHasAgent;
  std::string argument_id;
  double confidence = 0.0;

  RelationTriple triple() const { return {event_id, relation, argument_id}; }
  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

// Extraction result for one sentence. Edges are sorted by
// (event_id, relation, argument_id).
struct EventArgumentGraph {
  std::string sentence_id;
  std::string text;
  std::vector<EntityMention> nodes;
  std::vector<GraphEdge> edges;

  friend bool operator==(const EventArgumentGraph&,
                         const EventArgumentGraph&) = default;
};

}  // namespace eae
