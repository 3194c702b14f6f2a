#include "templates.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "builtin_data.hpp"
#include "error.hpp"
#include "json.hpp"

namespace eae {

std::string_view ToString(Phase phase) {
  return phase == Phase::kTrain ? "train" : "test";
}

Phase ParsePhase(std::string_view name) {
  if (name == "train") return Phase::kTrain;
  if (name == "test") return Phase::kTest;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown phase '" + std::string(name) + "'");
}

bool Template::UsedIn(Phase phase) const {
  if (use == Use::kBoth) return true;
  return (phase == Phase::kTrain) == (use == Use::kTrain);
}

namespace {

std::size_t CountOccurrences(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace

std::string FillPattern(std::string_view pattern, std::string_view event,
                        std::string_view entity) {
  if (CountOccurrences(pattern, kEventMarker) != 1 ||
      CountOccurrences(pattern, kEntityMarker) != 1) {
    throw Error(ErrorCode::kConfig,
                "template pattern '" + std::string(pattern) +
                    "' must contain {event} and {entity} exactly once");
  }
  std::string out;
  std::size_t pos = 0;
  while (pos < pattern.size()) {
    if (pattern.compare(pos, kEventMarker.size(), kEventMarker) == 0) {
      out += event;
      pos += kEventMarker.size();
    } else if (pattern.compare(pos, kEntityMarker.size(), kEntityMarker) == 0) {
      out += entity;
      pos += kEntityMarker.size();
    } else {
      out += pattern[pos++];
    }
  }
  return out;
}

Hypothesis Instantiate(const Template& t, const EntityMention& event,
                       const EntityMention& entity) {
  if (!event.IsEvent()) {
    throw Error(ErrorCode::kInvalidArgument,
                "mention '" + event.id + "' is " + event.type + ", not EVENT");
  }
  if (!IsCompatible(t.relation, entity.type)) {
    throw Error(ErrorCode::kInvalidArgument,
                "entity '" + entity.id + "' of type " + entity.type +
                    " cannot fill " + t.id);
  }
  Hypothesis h;
  h.text = FillPattern(t.pattern, event.surface, entity.surface);
  h.relation = t.relation;
  h.event_id = event.id;
  h.entity_id = entity.id;
  h.template_id = t.id;
  return h;
}

TemplateRegistry::TemplateRegistry(std::vector<Template> templates)
    : templates_(std::move(templates)) {
  std::vector<std::string> issues;
  std::map<std::string, int> ids;
  for (const auto& t : templates_) {
    if (++ids[t.id] > 1) issues.push_back("duplicate template id " + t.id);
    if (CountOccurrences(t.pattern, kEventMarker) != 1 ||
        CountOccurrences(t.pattern, kEntityMarker) != 1) {
      issues.push_back(t.id + ": pattern must contain {event} and {entity} "
                              "exactly once");
    }
  }
  for (Relation r : kAllRelations) {
    std::size_t train = 0;
    std::size_t test = 0;
    for (const auto& t : templates_) {
      if (t.relation != r) continue;
      if (t.UsedIn(Phase::kTrain)) ++train;
      if (t.UsedIn(Phase::kTest)) ++test;
    }
    const std::string name(ToString(r));
    if (train == 0) issues.push_back(name + ": no train templates");
    if (test != 1) {
      issues.push_back(name + ": expected exactly one test template, found " +
                       std::to_string(test));
    }
  }
  if (!issues.empty()) {
    std::string msg = "invalid template registry:";
    for (const auto& i : issues) msg += "\n  " + i;
    throw Error(ErrorCode::kConfig, msg);
  }
}

TemplateRegistry TemplateRegistry::FromJson(std::string_view text,
                                            const std::string& source_name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source_name, e.what());
  }
  std::vector<Template> templates;
  try {
    std::size_t k = 0;
    for (const auto& rec : doc.at("templates")) {
      ++k;
      const std::string locator = source_name + "#" + std::to_string(k);
      Template t;
      t.relation = RelationFromString(rec.at("relation").get<std::string>());
      t.index = rec.at("index").get<std::string>();
      t.id = rec.value("id", std::string(ToString(t.relation)) + "/" + t.index);
      const auto phase = rec.at("phase").get<std::string>();
      if (phase == "train") {
        t.use = Template::Use::kTrain;
      } else if (phase == "test") {
        t.use = Template::Use::kTest;
      } else if (phase == "both") {
        t.use = Template::Use::kBoth;
      } else {
        throw ParseError(locator, "unknown phase '" + phase + "'");
      }
      t.pattern = rec.at("pattern").get<std::string>();
      t.gloss = rec.value("gloss", "");
      t.reconstructed = rec.value("reconstructed", false);
      templates.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source_name, e.what());
  }
  return TemplateRegistry(std::move(templates));
}

TemplateRegistry TemplateRegistry::LoadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open templates '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return FromJson(ss.str(), path.filename().string());
}

TemplateRegistry TemplateRegistry::Default() {
  static const TemplateRegistry registry =
      FromJson(builtin::kTemplatesJson, "builtin:templates.json");
  return registry;
}

const Template* TemplateRegistry::Find(std::string_view id) const {
  for (const auto& t : templates_) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

std::vector<Template> TemplateRegistry::For(Relation relation,
                                            Phase phase) const {
  std::vector<Template> out;
  for (const auto& t : templates_) {
    if (t.relation == relation && t.UsedIn(phase)) out.push_back(t);
  }
  return out;
}

TemplateRegistry TemplateRegistry::WithTestTemplate(
    std::string_view index) const {
  std::vector<Template> out = templates_;
  for (Relation r : kAllRelations) {
    bool found = false;
    for (const auto& t : out) {
      found = found || (t.relation == r && t.index == index);
    }
    if (!found) {
      throw Error(ErrorCode::kConfig, std::string(ToString(r)) +
                                          " has no template " +
                                          std::string(index));
    }
  }
  std::vector<Template> selected;
  for (auto& t : out) {
    const bool trains = t.UsedIn(Phase::kTrain);
    if (t.index == index) {
      t.use = trains ? Template::Use::kBoth : Template::Use::kTest;
    } else if (trains) {
      t.use = Template::Use::kTrain;
    } else {
      continue;  // test-only template that is no longer selected
    }
    selected.push_back(std::move(t));
  }
  return TemplateRegistry(std::move(selected));
}

}  // namespace eae
