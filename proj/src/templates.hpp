#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"

namespace eae {

enum class Phase { kTrain, kTest };

std::string_view ToString(Phase phase);
Phase ParsePhase(std::string_view name);

struct Template {
  enum class Use { kTrain, kTest, kBoth };

  std::string id;     // e.g. "hasDate/t2"
  std::string index;  // "t1".."t4"
  Relation relation = Relation::kHasAgent;
  Use use = Use::kTrain;
  std::string pattern;  // contains {event} and {entity} exactly once each
  std::string gloss;
  bool reconstructed = false;

  bool UsedIn(Phase phase) const;
};

struct Hypothesis {
  std::string text;
  Relation relation = Relation::kHasAgent;
  std::string event_id;
  std::string entity_id;
  std::string template_id;
};

inline constexpr std::string_view kEventMarker = "{event}";
inline constexpr std::string_view kEntityMarker = "{entity}";

// Placeholder substitution only; mention surfaces are inserted verbatim.
std::string FillPattern(std::string_view pattern, std::string_view event,
                        std::string_view entity);

// Throws on an incompatible argument type or a non-EVENT event mention.
Hypothesis Instantiate(const Template& t, const EntityMention& event,
                       const EntityMention& entity);

class TemplateRegistry {
 public:
  static TemplateRegistry FromJson(std::string_view text,
                                   const std::string& source_name);
  static TemplateRegistry LoadFile(const std::filesystem::path& path);
  // The shipped default (train t1..t4, test t2).
  static TemplateRegistry Default();

  std::span<const Template> all() const { return templates_; }
  const Template* Find(std::string_view id) const;

  // Train: every train/both template of the relation. Test: the single
  // test/both template.
  std::vector<Template> For(Relation relation, Phase phase) const;

  // Copy whose test template for every relation is `index`.
  TemplateRegistry WithTestTemplate(std::string_view index) const;

 private:
  explicit TemplateRegistry(std::vector<Template> templates);

  std::vector<Template> templates_;
};

}  // namespace eae
