#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graph.hpp"
#include "iaa.hpp"
#include "pairgen.hpp"

namespace eae {

struct ClassMetrics {
  std::string name;
  std::size_t support = 0;    // gold instances of the class
  std::size_t predicted = 0;  // instances predicted as the class
  std::size_t tp = 0;
  std::optional<double> precision;  // undefined with no predictions
  std::optional<double> recall;     // undefined with zero support
  std::optional<double> f1;         // undefined with zero support
};

// Counts-based metrics for one class.
ClassMetrics MetricsFromCounts(std::string name, std::size_t tp,
                               std::size_t fp, std::size_t fn);

enum class Averaging { kMacro, kWeighted };

struct NliMetrics {
  ClassMetrics positive;
  ClassMetrics negative;
  std::optional<double> average;  // over classes with a defined F1
  double accuracy = 0.0;
  std::vector<std::string> warnings;
};

// Unweighted mean.
double MacroAverage(std::span<const double> values);

NliMetrics EvaluateNli(std::span<const Label> predicted,
                       std::span<const Label> gold,
                       Averaging averaging = Averaging::kMacro);

// Positive-class metrics within each relation's pair universe (that
// relation's positives and negatives), in kAllRelations order. Relations
// without any pair are omitted.
std::vector<ClassMetrics> EvaluatePerRelation(
    std::span<const Label> predicted, std::span<const Label> gold,
    std::span<const Relation> relations);

// String-tagged overload; unknown tags are rejected.
std::vector<ClassMetrics> EvaluatePerRelation(
    std::span<const Label> predicted, std::span<const Label> gold,
    std::span<const std::string> relation_tags);

struct ExtractionMetrics {
  AgreementCounts counts;  // gold as reference: FN = missed, FP = spurious
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

// Exact (event_id, relation, argument_id) matching. Every extracted graph
// must name a gold sentence; gold sentences without a graph count as empty.
ExtractionMetrics EvaluateEae(std::span<const EventArgumentGraph> extracted,
                              std::span<const AnnotatedSentence> gold);

}  // namespace eae
