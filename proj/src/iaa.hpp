#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "corpus.hpp"

namespace eae {

// Annotator A is the reference: FN = only A asserted, FP = only B asserted.
struct AgreementCounts {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t fp = 0;

  AgreementCounts& operator+=(const AgreementCounts& o) {
    tp += o.tp;
    fn += o.fn;
    fp += o.fp;
    return *this;
  }
  friend bool operator==(const AgreementCounts&,
                         const AgreementCounts&) = default;
};

// Set semantics over triples; every relation appears in the result.
std::map<Relation, AgreementCounts> ConfusionCounts(
    std::span<const RelationTriple> a, std::span<const RelationTriple> b);

// As above, but rejects triples whose entity ids are not in `known_entities`.
std::map<Relation, AgreementCounts> ConfusionCounts(
    std::span<const RelationTriple> a, std::span<const RelationTriple> b,
    const std::set<std::string>& known_entities);

// 2TP / (2TP + FN + FP). Throws UndefinedMetricError when all are zero.
double F1FromCounts(const AgreementCounts& c);

struct KappaResult {
  std::size_t n = 0;
  double observed = 0.0;  // P_o
  double expected = 0.0;  // P_e = (1/N^2) sum_T n_T1 * n_T2
  double kappa = 0.0;
};

// Throws on empty or unequal-length input and on P_e == 1.
KappaResult CohenKappa(std::span<const std::string> a,
                       std::span<const std::string> b);

// Binary agreement table with an explicit true-negative count.
KappaResult KappaFromCounts(const AgreementCounts& c, std::size_t tn);

// Half-up rounding at `decimals` places, as used in reported tables.
double RoundHalfUp(double value, int decimals);

// Judged items per relation: (event_id, argument_id) candidates.
using ItemUniverse =
    std::map<Relation, std::vector<std::pair<std::string, std::string>>>;

// Every type-compatible (event, entity) pair within each sentence.
ItemUniverse CandidateUniverse(const Corpus& corpus);

struct RelationAgreement {
  Relation relation = Relation::kHasAgent;
  AgreementCounts counts;
  std::optional<std::size_t> tn;
  std::optional<double> kappa;
  std::optional<double> f1;
};

struct IaaReport {
  std::vector<RelationAgreement> rows;
  AgreementCounts overall;
  std::optional<double> macro_kappa;
  std::optional<double> micro_f1;
};

// Kappa per relation over `universe` with binary labels (asserted / none).
IaaReport BuildIaaReport(std::span<const RelationTriple> a,
                         std::span<const RelationTriple> b,
                         const ItemUniverse& universe);

// From published counts. Kappa is only reported for relations with a TN.
IaaReport BuildIaaReport(const std::map<Relation, AgreementCounts>& counts,
                         const std::map<Relation, std::size_t>& true_negatives);

// Both corpora must cover the same sentences and entity ids.
IaaReport BuildIaaReport(const Corpus& a, const Corpus& b);

}  // namespace eae
