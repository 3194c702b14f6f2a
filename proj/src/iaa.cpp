#include "iaa.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "error.hpp"

namespace eae {

std::map<Relation, AgreementCounts> ConfusionCounts(
    std::span<const RelationTriple> a, std::span<const RelationTriple> b) {
  const std::set<RelationTriple> set_a(a.begin(), a.end());
  const std::set<RelationTriple> set_b(b.begin(), b.end());
  std::map<Relation, AgreementCounts> out;
  for (Relation r : kAllRelations) out[r] = {};
  for (const auto& t : set_a) {
    if (set_b.count(t)) {
      ++out[t.relation].tp;
    } else {
      ++out[t.relation].fn;
    }
  }
  for (const auto& t : set_b) {
    if (!set_a.count(t)) ++out[t.relation].fp;
  }
  return out;
}

std::map<Relation, AgreementCounts> ConfusionCounts(
    std::span<const RelationTriple> a, std::span<const RelationTriple> b,
    const std::set<std::string>& known_entities) {
  std::vector<std::string> issues;
  auto check = [&](std::span<const RelationTriple> triples, const char* who) {
    for (const auto& t : triples) {
      for (const auto* id : {&t.event_id, &t.argument_id}) {
        if (!known_entities.count(*id)) {
          issues.push_back(std::string("annotator ") + who + " triple " +
                           ToString(t) + " references unknown entity '" + *id +
                           "'");
        }
      }
    }
  };
  check(a, "A");
  check(b, "B");
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return ConfusionCounts(a, b);
}

double F1FromCounts(const AgreementCounts& c) {
  const double denom = 2.0 * c.tp + c.fn + c.fp;
  if (denom == 0.0) {
    throw UndefinedMetricError("F1 is undefined when TP = FN = FP = 0");
  }
  return 2.0 * c.tp / denom;
}

KappaResult CohenKappa(std::span<const std::string> a,
                       std::span<const std::string> b) {
  if (a.empty() || a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "kappa needs two nonempty label lists of equal length");
  }
  std::map<std::string, std::pair<std::size_t, std::size_t>> marginals;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++marginals[a[i]].first;
    ++marginals[b[i]].second;
    if (a[i] == b[i]) ++agree;
  }
  KappaResult k;
  k.n = a.size();
  const double n = static_cast<double>(k.n);
  k.observed = agree / n;
  double sum = 0.0;
  for (const auto& [label, m] : marginals) {
    sum += static_cast<double>(m.first) * static_cast<double>(m.second);
  }
  k.expected = sum / (n * n);
  if (k.expected >= 1.0) {
    throw UndefinedMetricError(
        "kappa is undefined when expected agreement is 1");
  }
  k.kappa = (k.observed - k.expected) / (1.0 - k.expected);
  return k;
}

KappaResult KappaFromCounts(const AgreementCounts& c, std::size_t tn) {
  // Expand the 2x2 table into label lists so both routes share one formula.
  std::vector<std::string> a;
  std::vector<std::string> b;
  auto add = [&](std::size_t count, const char* la, const char* lb) {
    a.insert(a.end(), count, la);
    b.insert(b.end(), count, lb);
  };
  add(c.tp, "yes", "yes");
  add(c.fn, "yes", "no");
  add(c.fp, "no", "yes");
  add(tn, "no", "no");
  return CohenKappa(a, b);
}

double RoundHalfUp(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // The nudge absorbs representation error such as 0.125 stored as 0.12499..
  const double scaled = value * scale;
  const double nudged =
      scaled + std::copysign(1e-9 * std::max(1.0, std::fabs(scaled)), scaled);
  return std::copysign(std::floor(std::fabs(nudged) + 0.5), value) / scale;
}

ItemUniverse CandidateUniverse(const Corpus& corpus) {
  ItemUniverse universe;
  for (Relation r : kAllRelations) universe[r] = {};
  for (const auto& s : corpus.sentences()) {
    for (const auto& event : s.entities) {
      if (!event.IsEvent()) continue;
      for (const auto& arg : s.entities) {
        if (auto r = RelationForEntityType(arg.type)) {
          universe[*r].emplace_back(event.id, arg.id);
        }
      }
    }
  }
  return universe;
}

namespace {

void Finish(IaaReport& report) {
  double kappa_sum = 0.0;
  std::size_t kappa_n = 0;
  for (auto& row : report.rows) {
    report.overall += row.counts;
    if (row.kappa) {
      kappa_sum += *row.kappa;
      ++kappa_n;
    }
    try {
      row.f1 = F1FromCounts(row.counts);
    } catch (const UndefinedMetricError&) {
    }
  }
  if (kappa_n > 0) report.macro_kappa = kappa_sum / kappa_n;
  try {
    report.micro_f1 = F1FromCounts(report.overall);
  } catch (const UndefinedMetricError&) {
  }
}

}  // namespace

IaaReport BuildIaaReport(std::span<const RelationTriple> a,
                         std::span<const RelationTriple> b,
                         const ItemUniverse& universe) {
  const std::set<RelationTriple> set_a(a.begin(), a.end());
  const std::set<RelationTriple> set_b(b.begin(), b.end());

  std::set<RelationTriple> covered;
  for (const auto& [rel, items] : universe) {
    for (const auto& [ev, arg] : items) covered.insert({ev, rel, arg});
  }
  std::vector<std::string> issues;
  for (const auto* set : {&set_a, &set_b}) {
    for (const auto& t : *set) {
      if (!covered.count(t)) {
        issues.push_back("triple " + ToString(t) +
                         " is not in the judged item universe");
      }
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));

  const auto counts = ConfusionCounts(a, b);
  IaaReport report;
  for (Relation r : kAllRelations) {
    RelationAgreement row;
    row.relation = r;
    row.counts = counts.at(r);
    auto it = universe.find(r);
    if (it != universe.end() && !it->second.empty()) {
      std::vector<std::string> la;
      std::vector<std::string> lb;
      for (const auto& [ev, arg] : it->second) {
        const RelationTriple t{ev, r, arg};
        la.push_back(set_a.count(t) ? "asserted" : "none");
        lb.push_back(set_b.count(t) ? "asserted" : "none");
      }
      std::size_t tn = 0;
      for (std::size_t i = 0; i < la.size(); ++i) {
        if (la[i] == "none" && lb[i] == "none") ++tn;
      }
      row.tn = tn;
      try {
        row.kappa = CohenKappa(la, lb).kappa;
      } catch (const UndefinedMetricError&) {
      }
    }
    report.rows.push_back(row);
  }
  Finish(report);
  return report;
}

IaaReport BuildIaaReport(const std::map<Relation, AgreementCounts>& counts,
                         const std::map<Relation, std::size_t>& true_negatives) {
  IaaReport report;
  for (const auto& [r, c] : counts) {
    RelationAgreement row;
    row.relation = r;
    row.counts = c;
    if (auto it = true_negatives.find(r); it != true_negatives.end()) {
      row.tn = it->second;
      try {
        row.kappa = KappaFromCounts(c, it->second).kappa;
      } catch (const UndefinedMetricError&) {
      }
    }
    report.rows.push_back(row);
  }
  Finish(report);
  return report;
}

IaaReport BuildIaaReport(const Corpus& a, const Corpus& b) {
  std::vector<std::string> issues;
  std::set<std::string> known;
  for (const auto& s : a.sentences()) {
    const AnnotatedSentence* other = b.FindSentence(s.id);
    if (other == nullptr) {
      issues.push_back("sentence '" + s.id + "' missing from annotator B");
      continue;
    }
    for (const auto& e : s.entities) {
      known.insert(e.id);
      const EntityMention* oe = other->FindEntity(e.id);
      if (oe == nullptr || oe->type != e.type || oe->start != e.start ||
          oe->end != e.end) {
        issues.push_back("entity '" + e.id + "' differs between annotators");
      }
    }
  }
  if (a.sentences().size() != b.sentences().size()) {
    issues.push_back("annotators cover different sentence sets");
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));

  std::vector<RelationTriple> ta;
  std::vector<RelationTriple> tb;
  for (const auto& s : a.sentences()) {
    ta.insert(ta.end(), s.relations.begin(), s.relations.end());
  }
  for (const auto& s : b.sentences()) {
    tb.insert(tb.end(), s.relations.begin(), s.relations.end());
  }
  ConfusionCounts(ta, tb, known);
  return BuildIaaReport(ta, tb, CandidateUniverse(a));
}

}  // namespace eae
