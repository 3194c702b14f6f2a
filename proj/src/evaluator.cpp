#include "evaluator.hpp"

#include <numeric>
#include <set>
#include <unordered_map>

#include "error.hpp"

namespace eae {

ClassMetrics MetricsFromCounts(std::string name, std::size_t tp,
                               std::size_t fp, std::size_t fn) {
  ClassMetrics m;
  m.name = std::move(name);
  m.tp = tp;
  m.support = tp + fn;
  m.predicted = tp + fp;
  if (m.predicted > 0) m.precision = static_cast<double>(tp) / m.predicted;
  if (m.support > 0) {
    m.recall = static_cast<double>(tp) / m.support;
    m.f1 = F1FromCounts({tp, fn, fp});
  }
  return m;
}

double MacroAverage(std::span<const double> values) {
  if (values.empty()) {
    throw UndefinedMetricError("average over an empty set of classes");
  }
  return std::accumulate(values.begin(), values.end(), 0.0) / values.size();
}

namespace {

void CheckAligned(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kInvalidArgument,
                "predictions and gold labels differ in length (" +
                    std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

NliMetrics EvaluateNli(std::span<const Label> predicted,
                       std::span<const Label> gold, Averaging averaging) {
  CheckAligned(predicted.size(), gold.size());
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool p = predicted[i] == Label::kPositive;
    const bool g = gold[i] == Label::kPositive;
    if (p && g) ++tp;
    if (p && !g) ++fp;
    if (!p && g) ++fn;
    if (!p && !g) ++tn;
  }
  NliMetrics out;
  out.positive = MetricsFromCounts("positive", tp, fp, fn);
  out.negative = MetricsFromCounts("negative", tn, fn, fp);
  out.accuracy = gold.empty() ? 0.0 : static_cast<double>(tp + tn) / gold.size();

  std::vector<double> f1s;
  std::vector<double> weights;
  for (const ClassMetrics* c : {&out.positive, &out.negative}) {
    if (c->f1) {
      f1s.push_back(*c->f1);
      weights.push_back(static_cast<double>(c->support));
    } else {
      out.warnings.push_back("class '" + c->name +
                             "' has zero support; excluded from the average");
    }
  }
  if (!f1s.empty()) {
    if (averaging == Averaging::kMacro) {
      out.average = MacroAverage(f1s);
    } else {
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < f1s.size(); ++i) {
        num += f1s[i] * weights[i];
        den += weights[i];
      }
      out.average = num / den;
    }
  }
  return out;
}

std::vector<ClassMetrics> EvaluatePerRelation(
    std::span<const Label> predicted, std::span<const Label> gold,
    std::span<const Relation> relations) {
  CheckAligned(predicted.size(), gold.size());
  CheckAligned(relations.size(), gold.size());
  std::vector<ClassMetrics> out;
  for (Relation r : kAllRelations) {
    std::size_t tp = 0, fp = 0, fn = 0, n = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (relations[i] != r) continue;
      ++n;
      const bool p = predicted[i] == Label::kPositive;
      const bool g = gold[i] == Label::kPositive;
      if (p && g) ++tp;
      if (p && !g) ++fp;
      if (!p && g) ++fn;
    }
    if (n > 0) {
      out.push_back(MetricsFromCounts(std::string(ToString(r)), tp, fp, fn));
    }
  }
  return out;
}

std::vector<ClassMetrics> EvaluatePerRelation(
    std::span<const Label> predicted, std::span<const Label> gold,
    std::span<const std::string> relation_tags) {
  std::vector<Relation> relations;
  relations.reserve(relation_tags.size());
  for (const auto& tag : relation_tags) {
    relations.push_back(RelationFromString(tag));
  }
  return EvaluatePerRelation(predicted, gold, relations);
}

ExtractionMetrics EvaluateEae(std::span<const EventArgumentGraph> extracted,
                              std::span<const AnnotatedSentence> gold) {
  std::unordered_map<std::string, const AnnotatedSentence*> gold_by_id;
  for (const auto& s : gold) gold_by_id[s.id] = &s;

  std::vector<std::string> issues;
  std::vector<RelationTriple> predicted_triples;
  std::set<std::string> seen;
  for (const auto& g : extracted) {
    if (!gold_by_id.count(g.sentence_id)) {
      issues.push_back("extracted sentence '" + g.sentence_id +
                       "' is not in the gold set");
    }
    if (!seen.insert(g.sentence_id).second) {
      issues.push_back("sentence '" + g.sentence_id + "' extracted twice");
    }
    for (const auto& e : g.edges) predicted_triples.push_back(e.triple());
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));

  std::vector<RelationTriple> gold_triples;
  for (const auto& s : gold) {
    gold_triples.insert(gold_triples.end(), s.relations.begin(),
                        s.relations.end());
  }
  ExtractionMetrics m;
  for (const auto& [rel, c] : ConfusionCounts(gold_triples, predicted_triples)) {
    m.counts += c;
  }
  if (m.counts.tp + m.counts.fp > 0) {
    m.precision = static_cast<double>(m.counts.tp) / (m.counts.tp + m.counts.fp);
  }
  if (m.counts.tp + m.counts.fn > 0) {
    m.recall = static_cast<double>(m.counts.tp) / (m.counts.tp + m.counts.fn);
  }
  try {
    m.f1 = F1FromCounts(m.counts);
  } catch (const UndefinedMetricError&) {
  }
  return m;
}

}  // namespace eae
