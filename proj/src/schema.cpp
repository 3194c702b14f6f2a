#include "schema.hpp"

#include <algorithm>

#include "error.hpp"

namespace eae {
namespace {

constexpr std::array<std::string_view, 21> kCorpusTypes = {
    "PERS",     "NORP",    "OCC",     "ORG",      "GPE",     "LOC",
    "FAC",      "EVENT",   "DATE",    "TIME",     "CARDINAL", "ORDINAL",
    "PERCENT",  "LANGUAGE", "QUANTITY", "WEBSITE", "UNIT",    "LAW",
    "MONEY",    "PRODUCT", "CURR"};

constexpr std::array<std::string_view, 4> kAgentTypes = {"PERS", "ORG", "OCC",
                                                         "NORP"};
constexpr std::array<std::string_view, 3> kLocationTypes = {"GPE", "LOC",
                                                            "FAC"};
constexpr std::array<std::string_view, 2> kDateTypes = {"TIME", "DATE"};

}  // namespace

std::string_view ToString(Relation relation) {
  switch (relation) {
    case Relation::kHasAgent:
      return "hasAgent";
    case Relation::kHasLocation:
      return "hasLocation";
    case Relation::kHasDate:
      return "hasDate";
  }
  return "unknown";
}

std::optional<Relation> ParseRelation(std::string_view name) {
  for (Relation r : kAllRelations) {
    if (ToString(r) == name) return r;
  }
  return std::nullopt;
}

Relation RelationFromString(std::string_view name) {
  if (auto r = ParseRelation(name)) return *r;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown relation '" + std::string(name) + "'");
}

std::span<const std::string_view> CorpusEntityTypes() { return kCorpusTypes; }

bool IsCorpusEntityType(std::string_view type) {
  return std::find(kCorpusTypes.begin(), kCorpusTypes.end(), type) !=
         kCorpusTypes.end();
}

std::span<const std::string_view> CompatibleTypes(Relation relation) {
  switch (relation) {
    case Relation::kHasAgent:
      return kAgentTypes;
    case Relation::kHasLocation:
      return kLocationTypes;
    case Relation::kHasDate:
      return kDateTypes;
  }
  return {};
}

bool IsCompatible(Relation relation, std::string_view entity_type) {
  const auto types = CompatibleTypes(relation);
  return std::find(types.begin(), types.end(), entity_type) != types.end();
}

std::optional<Relation> RelationForEntityType(std::string_view entity_type) {
  for (Relation r : kAllRelations) {
    if (IsCompatible(r, entity_type)) return r;
  }
  return std::nullopt;
}

bool IsInterpretedType(std::string_view entity_type) {
  return entity_type == kEventType ||
         RelationForEntityType(entity_type).has_value();
}

}  // namespace eae
