#include "support.hpp"

#include <algorithm>
#include <map>

#include <unistd.h>

#include "rng.hpp"

#ifndef EAE_FIXTURE_DIR
#error "EAE_FIXTURE_DIR must be defined"
#endif

namespace eae::testing {

namespace fs = std::filesystem;

fs::path FixturePath(const std::string& name) {
  return fs::path(EAE_FIXTURE_DIR) / name;
}

fs::path TempDir(const std::string& tag) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("eae-test-" + tag + "-" + std::to_string(::getpid()) +
                        "-" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

namespace {

const std::vector<std::string> kTypes = {
    "PERS", "NORP", "OCC", "ORG", "GPE", "LOC", "FAC", "EVENT", "DATE",
    "TIME", "CARDINAL", "ORDINAL", "PERCENT", "LANGUAGE", "QUANTITY",
    "WEBSITE", "UNIT", "LAW", "MONEY", "PRODUCT", "CURR"};

}  // namespace

std::optional<Relation> OracleRelationFor(const std::string& type) {
  static const std::map<std::string, Relation> table = {
      {"PERS", Relation::kHasAgent},    {"ORG", Relation::kHasAgent},
      {"OCC", Relation::kHasAgent},     {"NORP", Relation::kHasAgent},
      {"GPE", Relation::kHasLocation},  {"LOC", Relation::kHasLocation},
      {"FAC", Relation::kHasLocation},  {"TIME", Relation::kHasDate},
      {"DATE", Relation::kHasDate}};
  auto it = table.find(type);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

Corpus SyntheticCorpus(std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  std::vector<AnnotatedSentence> sentences;
  for (std::size_t si = 0; si < count; ++si) {
    AnnotatedSentence s;
    s.id = "syn" + std::to_string(si);
    // Plain words w<k> interleaved with mention tokens x<si>_<k>.
    std::vector<std::string> tokens;
    struct Slot {
      std::size_t first, last;
      std::string type;
    };
    std::vector<Slot> slots;
    const std::size_t n_events = rng.Below(4) == 0 ? 0 : 1 + rng.Below(2);
    const std::size_t n_args = rng.Below(6);
    std::vector<std::string> types(n_events, "EVENT");
    for (std::size_t k = 0; k < n_args; ++k) {
      // Mostly interpreted types, a few of the others.
      types.push_back(rng.Below(5) == 0 ? kTypes[rng.Below(kTypes.size())]
                                        : kTypes[rng.Below(10)]);
    }
    rng.Shuffle(types);
    for (const auto& type : types) {
      tokens.push_back("w" + std::to_string(rng.Below(50)));
      const std::size_t first = tokens.size();
      tokens.push_back("x" + std::to_string(si) + "_" + std::to_string(first));
      if (rng.Below(3) == 0) {
        tokens.push_back("y" + std::to_string(si) + "_" + std::to_string(first));
      }
      slots.push_back({first, tokens.size() - 1, type});
    }
    tokens.push_back(".");

    std::vector<std::size_t> start(tokens.size());
    std::size_t offset = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i > 0) {
        s.text += ' ';
        ++offset;
      }
      start[i] = offset;
      s.text += tokens[i];
      offset += tokens[i].size();  // ASCII tokens
    }
    for (std::size_t k = 0; k < slots.size(); ++k) {
      EntityMention e;
      e.id = s.id + ":m" + std::to_string(k);
      e.sentence_id = s.id;
      e.type = slots[k].type;
      e.start = start[slots[k].first];
      e.end = start[slots[k].last] + tokens[slots[k].last].size();
      e.surface = s.text.substr(e.start, e.end - e.start);
      s.entities.push_back(e);
      // A nested single-token mention inside two-token spans now and then.
      if (slots[k].last > slots[k].first && rng.Below(2) == 0) {
        EntityMention inner = e;
        inner.id += "n";
        inner.type = kTypes[rng.Below(10)];
        inner.end = start[slots[k].first] + tokens[slots[k].first].size();
        inner.surface = s.text.substr(inner.start, inner.end - inner.start);
        if (inner.type != e.type) s.entities.push_back(inner);
      }
    }
    for (const auto& ev : s.entities) {
      if (ev.type != "EVENT") continue;
      for (const auto& arg : s.entities) {
        auto rel = OracleRelationFor(arg.type);
        if (rel && rng.Below(2) == 0) {
          s.relations.push_back({ev.id, *rel, arg.id});
        }
      }
    }
    sentences.push_back(std::move(s));
  }
  return Corpus({"synthetic", "generated", {"test"}}, std::move(sentences));
}

std::vector<PairKey> BruteForcePairs(std::span<const AnnotatedSentence> sentences,
                                     Phase phase,
                                     const TemplateRegistry& templates) {
  auto replace = [](std::string text, const std::string& marker,
                    const std::string& value) {
    const auto pos = text.find(marker);
    return text.replace(pos, marker.size(), value);
  };
  std::vector<PairKey> out;
  for (const auto& s : sentences) {
    for (const auto& t : templates.all()) {
      const bool used = phase == Phase::kTest
                            ? t.use != Template::Use::kTrain
                            : t.use != Template::Use::kTest;
      if (!used) continue;
      for (const auto& ev : s.entities) {
        for (const auto& arg : s.entities) {
          if (ev.type != "EVENT") continue;
          auto rel = OracleRelationFor(arg.type);
          if (!rel || *rel != t.relation) continue;
          int label = 0;
          for (const auto& r : s.relations) {
            if (r.event_id == ev.id && r.argument_id == arg.id &&
                r.relation == *rel) {
              label = 1;
            }
          }
          // Markers replaced one at a time; surfaces here never contain
          // a marker.
          std::string h = replace(t.pattern, "{event}", ev.surface);
          h = replace(h, "{entity}", arg.surface);
          out.emplace_back(s.id, t.id, ev.id, arg.id, h, label);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PairKey> Keys(std::span<const NliPair> pairs) {
  std::vector<PairKey> out;
  for (const auto& p : pairs) {
    out.emplace_back(p.sentence_id, p.template_id, p.event_id, p.entity_id,
                     p.hypothesis, static_cast<int>(p.label));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::tuple<std::string, std::string, Relation>> BruteForceCandidates(
    const AnnotatedSentence& sentence) {
  std::vector<std::tuple<std::string, std::string, Relation>> out;
  for (const auto& a : sentence.entities) {
    for (const auto& b : sentence.entities) {
      if (a.type != "EVENT") continue;
      if (auto rel = OracleRelationFor(b.type)) out.emplace_back(a.id, b.id, *rel);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NliPair> SeparablePairs(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<NliPair> out;
  for (std::size_t i = 0; i < n; ++i) {
    NliPair p;
    const bool positive = i % 2 == 0;
    std::string premise;
    for (int k = 0; k < 8; ++k) {
      premise += (k ? " " : "") + std::string("كلمة") + std::to_string(rng.Below(40));
    }
    const std::string ent = "كيان" + std::to_string(rng.Below(40));
    const std::string ev = "حدث" + std::to_string(rng.Below(40));
    p.premise = premise;
    p.hypothesis = ent + (positive ? " مكان حدوث " : " زمن وقوع ") + ev;
    p.label = positive ? Label::kPositive : Label::kNegative;
    p.split = Phase::kTrain;
    p.relation = Relation::kHasLocation;
    p.template_id = "synthetic";
    p.sentence_id = "sep" + std::to_string(i);
    p.event_id = p.sentence_id + ":ev";
    p.entity_id = p.sentence_id + ":ent";
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace eae::testing
