#pragma once

#include <span>
#include <string_view>

#include "json.hpp"
#include "nli/layers.hpp"

namespace eae::nli {

// Clamp applied to probabilities inside log terms.
inline constexpr double kProbEpsilon = 1e-7;

enum class NceMode {
  // Softmax over the two class scores of each instance.
  kPerInstance,
  // Softmax of each instance's true-class score against the true-class scores
  // of the whole batch.
  kInBatch,
};

std::string_view ToString(NceMode mode);
NceMode ParseNceMode(std::string_view name);

struct LossConfig {
  double w_pos = 1.0;
  double w_neg = 0.5;
  double tau = 1.0;
  bool use_nce = true;
  NceMode nce_mode = NceMode::kPerInstance;

  void Validate() const;
};

void to_json(nlohmann::json& j, const LossConfig& c);
void from_json(const nlohmann::json& j, LossConfig& c);

// -(1/N) sum [w_p y log p + w_n (1 - y) log(1 - p)], p clamped to
// [eps, 1 - eps]. labels are 0/1.
double WceLoss(std::span<const double> probs, std::span<const int> labels,
               double w_pos, double w_neg);

// scores: N x 2, column 1 the positive class.
double NceLoss(const Matrix& scores, std::span<const int> labels, double tau,
               NceMode mode = NceMode::kPerInstance);

// P(positive) from two logits: softmax column 1, i.e. sigmoid(l1 - l0).
double PositiveProbability(double logit_neg, double logit_pos);

struct LossTerms {
  double wce = 0.0;
  double nce = 0.0;
  double total = 0.0;
  Matrix grad;  // d(total)/d(logits), N x 2
};

// Both terms from one N x 2 logit matrix: WCE on the softmax positive
// probability, NCE on the logits as class scores.
LossTerms CombinedLoss(const Matrix& logits, std::span<const int> labels,
                       const LossConfig& cfg);

// Separate probability and score inputs; `grad` is left empty.
LossTerms CombinedLoss(std::span<const double> probs, const Matrix& scores,
                       std::span<const int> labels, const LossConfig& cfg);

// Gradients of the individual terms with respect to the N x 2 logits.
Matrix WceGradient(const Matrix& logits, std::span<const int> labels,
                   double w_pos, double w_neg);
Matrix NceGradient(const Matrix& scores, std::span<const int> labels,
                   double tau, NceMode mode = NceMode::kPerInstance);

}  // namespace eae::nli
