#include "pairgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "error.hpp"
#include "json.hpp"
#include "rng.hpp"

namespace eae {

std::string_view ToString(Label label) {
  return label == Label::kPositive ? "positive" : "negative";
}

Label ParseLabel(std::string_view name) {
  if (name == "positive") return Label::kPositive;
  if (name == "negative") return Label::kNegative;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown label '" + std::string(name) + "'");
}

PremiseSplit SplitPremises(const Corpus& corpus, const SplitConfig& cfg) {
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "train_fraction must lie strictly between 0 and 1");
  }
  auto sentences = EventSentences(corpus);
  if (sentences.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "corpus '" + corpus.metadata().name +
                    "' has no sentence with an EVENT mention");
  }
  PremiseSplit split;
  if (cfg.test_only) {
    split.test = std::move(sentences);
    return split;
  }
  std::vector<std::size_t> order(sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(cfg.seed);
  rng.Shuffle(order);
  const auto n = static_cast<long long>(sentences.size());
  const long long n_train =
      std::clamp(std::llround(cfg.train_fraction * static_cast<double>(n)),
                 0LL, n);
  std::vector<bool> is_train(sentences.size(), false);
  for (long long i = 0; i < n_train; ++i) is_train[order[i]] = true;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    (is_train[i] ? split.train : split.test).push_back(std::move(sentences[i]));
  }
  return split;
}

namespace {

NliPair MakePair(const AnnotatedSentence& s, const Hypothesis& h, Label label,
                 Phase phase) {
  NliPair p;
  p.premise = s.text;
  p.hypothesis = h.text;
  p.label = label;
  p.split = phase;
  p.relation = h.relation;
  p.template_id = h.template_id;
  p.sentence_id = s.id;
  p.event_id = h.event_id;
  p.entity_id = h.entity_id;
  return p;
}

}  // namespace

std::vector<NliPair> GeneratePositivePairs(
    std::span<const AnnotatedSentence> sentences, Phase phase,
    const TemplateRegistry& templates) {
  std::vector<NliPair> out;
  for (const auto& s : sentences) {
    for (const auto& r : s.relations) {
      const EntityMention* event = s.FindEntity(r.event_id);
      const EntityMention* arg = s.FindEntity(r.argument_id);
      if (event == nullptr || arg == nullptr || !event->IsEvent() ||
          !IsCompatible(r.relation, arg->type)) {
        throw Error(ErrorCode::kValidation,
                    "gold relation " + ToString(r) + " in sentence '" + s.id +
                        "' violates the schema");
      }
      for (const auto& t : templates.For(r.relation, phase)) {
        out.push_back(MakePair(s, Instantiate(t, *event, *arg),
                               Label::kPositive, phase));
      }
    }
  }
  return out;
}

std::vector<NliPair> GenerateNegativePairs(
    std::span<const AnnotatedSentence> sentences, Phase phase,
    const TemplateRegistry& templates) {
  std::vector<NliPair> out;
  for (const auto& s : sentences) {
    for (const auto& event : s.entities) {
      if (!event.IsEvent()) continue;
      for (const auto& entity : s.entities) {
        const auto relation = RelationForEntityType(entity.type);
        if (!relation) continue;
        if (s.HasRelation({event.id, *relation, entity.id})) continue;
        for (const auto& t : templates.For(*relation, phase)) {
          out.push_back(MakePair(s, Instantiate(t, event, entity),
                                 Label::kNegative, phase));
        }
      }
    }
  }
  return out;
}

std::vector<NliPair> NliDataset::Split(Phase phase) const {
  std::vector<NliPair> out;
  for (const auto& p : pairs) {
    if (p.split == phase) out.push_back(p);
  }
  return out;
}

DatasetStats NliDataset::Stats() const {
  DatasetStats stats;
  for (Phase phase : {Phase::kTrain, Phase::kTest}) {
    for (Relation r : kAllRelations) {
      for (Label l : {Label::kPositive, Label::kNegative}) {
        stats[{phase, r, l}] = 0;
      }
    }
  }
  for (const auto& p : pairs) ++stats[{p.split, p.relation, p.label}];
  return stats;
}

NliDataset BuildNliDataset(const Corpus& corpus, const SplitConfig& cfg,
                           const TemplateRegistry& templates) {
  NliDataset dataset;
  if (EventSentences(corpus).empty()) return dataset;
  const auto split = SplitPremises(corpus, cfg);
  for (Phase phase : {Phase::kTrain, Phase::kTest}) {
    const auto& sentences = phase == Phase::kTrain ? split.train : split.test;
    auto pos = GeneratePositivePairs(sentences, phase, templates);
    auto neg = GenerateNegativePairs(sentences, phase, templates);
    dataset.pairs.insert(dataset.pairs.end(),
                         std::make_move_iterator(pos.begin()),
                         std::make_move_iterator(pos.end()));
    dataset.pairs.insert(dataset.pairs.end(),
                         std::make_move_iterator(neg.begin()),
                         std::make_move_iterator(neg.end()));
  }
  return dataset;
}

void WriteDataset(const NliDataset& dataset, std::ostream& out) {
  for (const auto& p : dataset.pairs) {
    nlohmann::ordered_json rec;
    rec["premise"] = p.premise;
    rec["hypothesis"] = p.hypothesis;
    rec["label"] = ToString(p.label);
    rec["split"] = ToString(p.split);
    rec["relation"] = ToString(p.relation);
    rec["template_id"] = p.template_id;
    rec["sentence_id"] = p.sentence_id;
    rec["event_id"] = p.event_id;
    rec["entity_id"] = p.entity_id;
    out << rec.dump() << '\n';
  }
}

NliDataset ReadDataset(std::istream& in, const std::string& source_name) {
  NliDataset dataset;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string locator = source_name + ":" + std::to_string(line_no);
    try {
      const auto rec = nlohmann::json::parse(line);
      NliPair p;
      p.premise = rec.at("premise").get<std::string>();
      p.hypothesis = rec.at("hypothesis").get<std::string>();
      p.label = ParseLabel(rec.at("label").get<std::string>());
      p.split = ParsePhase(rec.at("split").get<std::string>());
      p.relation = RelationFromString(rec.at("relation").get<std::string>());
      p.template_id = rec.value("template_id", "");
      p.sentence_id = rec.at("sentence_id").get<std::string>();
      p.event_id = rec.value("event_id", "");
      p.entity_id = rec.value("entity_id", "");
      dataset.pairs.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(locator, e.what());
    } catch (const Error& e) {
      throw ParseError(locator, e.what());
    }
  }
  return dataset;
}

NliDataset ReadDatasetFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open dataset '" + path.string() + "'");
  }
  return ReadDataset(in, path.filename().string());
}

}  // namespace eae
