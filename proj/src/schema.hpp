#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace eae {

enum class Relation { kHasAgent, kHasLocation, kHasDate };

inline constexpr std::array<Relation, 3> kAllRelations = {
    Relation::kHasAgent, Relation::kHasLocation, Relation::kHasDate};

std::string_view ToString(Relation relation);
std::optional<Relation> ParseRelation(std::string_view name);
// Throws Error(kInvalidArgument) for unknown names.
Relation RelationFromString(std::string_view name);

inline constexpr std::string_view kEventType = "EVENT";

// The full Wojood tag inventory (21 types).
std::span<const std::string_view> CorpusEntityTypes();
bool IsCorpusEntityType(std::string_view type);

// Argument types admissible for `relation`:
//   hasAgent    -> PERS ORG OCC NORP
//   hasLocation -> GPE LOC FAC
//   hasDate     -> TIME DATE
std::span<const std::string_view> CompatibleTypes(Relation relation);

bool IsCompatible(Relation relation, std::string_view entity_type);

// Inverse of CompatibleTypes; nullopt for EVENT and for the eleven tags the
// schema does not interpret.
std::optional<Relation> RelationForEntityType(std::string_view entity_type);

// EVENT plus every type that is a possible argument.
bool IsInterpretedType(std::string_view entity_type);

}  // namespace eae
