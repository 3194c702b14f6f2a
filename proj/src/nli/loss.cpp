#include "nli/loss.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace eae::nli {

std::string_view ToString(NceMode mode) {
  return mode == NceMode::kPerInstance ? "per_instance" : "in_batch";
}

NceMode ParseNceMode(std::string_view name) {
  if (name == "per_instance") return NceMode::kPerInstance;
  if (name == "in_batch") return NceMode::kInBatch;
  throw Error(ErrorCode::kConfig, "unknown nce_mode '" + std::string(name) + "'");
}

void LossConfig::Validate() const {
  if (!(w_pos > 0.0) || !(w_neg > 0.0)) {
    throw Error(ErrorCode::kConfig, "class weights must be positive");
  }
  if (!(tau > 0.0)) throw Error(ErrorCode::kConfig, "tau must be positive");
}

void to_json(nlohmann::json& j, const LossConfig& c) {
  j = nlohmann::json{{"w_pos", c.w_pos},
                     {"w_neg", c.w_neg},
                     {"tau", c.tau},
                     {"use_nce", c.use_nce},
                     {"nce_mode", ToString(c.nce_mode)}};
}

void from_json(const nlohmann::json& j, LossConfig& c) {
  const LossConfig d;
  c.w_pos = j.value("w_pos", d.w_pos);
  c.w_neg = j.value("w_neg", d.w_neg);
  c.tau = j.value("tau", d.tau);
  c.use_nce = j.value("use_nce", d.use_nce);
  c.nce_mode = ParseNceMode(j.value("nce_mode", std::string("per_instance")));
}

namespace {

void CheckLabels(std::size_t n, std::span<const int> labels) {
  if (n != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "predictions and labels differ in length");
  }
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty batch");
  for (int y : labels) {
    if (y != 0 && y != 1) {
      throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    }
  }
}

double LogSumExp(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

double WceLoss(std::span<const double> probs, std::span<const int> labels,
               double w_pos, double w_neg) {
  CheckLabels(probs.size(), labels);
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs[i], kProbEpsilon, 1.0 - kProbEpsilon);
    sum += labels[i] == 1 ? w_pos * std::log(p) : w_neg * std::log(1.0 - p);
  }
  return -sum / static_cast<double>(probs.size());
}

double PositiveProbability(double logit_neg, double logit_pos) {
  const double z = logit_pos - logit_neg;
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double NceLoss(const Matrix& scores, std::span<const int> labels, double tau,
               NceMode mode) {
  if (!(tau > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tau must be > 0");
  CheckLabels(static_cast<std::size_t>(scores.rows()), labels);
  const auto n = static_cast<double>(scores.rows());
  double sum = 0.0;
  if (mode == NceMode::kPerInstance) {
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
      const double a = scores(i, 0) / tau;
      const double b = scores(i, 1) / tau;
      sum += (labels[i] == 1 ? b : a) - LogSumExp(a, b);
    }
    return -sum / n;
  }
  Vector t(scores.rows());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    t(i) = scores(i, labels[i]) / tau;
  }
  const double m = t.maxCoeff();
  const double lse = m + std::log((t.array() - m).exp().sum());
  return lse - t.mean();
}

Matrix WceGradient(const Matrix& logits, std::span<const int> labels,
                   double w_pos, double w_neg) {
  CheckLabels(static_cast<std::size_t>(logits.rows()), labels);
  const auto n = static_cast<double>(logits.rows());
  Matrix grad(logits.rows(), 2);
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double p = PositiveProbability(logits(i, 0), logits(i, 1));
    // d/dz of the unclamped term, z = l1 - l0.
    const double dz = labels[i] == 1 ? -w_pos * (1.0 - p) / n : w_neg * p / n;
    grad(i, 0) = -dz;
    grad(i, 1) = dz;
  }
  return grad;
}

Matrix NceGradient(const Matrix& scores, std::span<const int> labels,
                   double tau, NceMode mode) {
  if (!(tau > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tau must be > 0");
  CheckLabels(static_cast<std::size_t>(scores.rows()), labels);
  const auto n = static_cast<double>(scores.rows());
  Matrix grad = Matrix::Zero(scores.rows(), 2);
  if (mode == NceMode::kPerInstance) {
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
      const double p1 =
          PositiveProbability(scores(i, 0) / tau, scores(i, 1) / tau);
      grad(i, 0) = ((1.0 - p1) - (labels[i] == 0 ? 1.0 : 0.0)) / (tau * n);
      grad(i, 1) = (p1 - (labels[i] == 1 ? 1.0 : 0.0)) / (tau * n);
    }
    return grad;
  }
  Vector t(scores.rows());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    t(i) = scores(i, labels[i]) / tau;
  }
  const Vector e = (t.array() - t.maxCoeff()).exp();
  const Vector softmax = e / e.sum();
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    grad(i, labels[i]) = (softmax(i) - 1.0 / n) / tau;
  }
  return grad;
}

LossTerms CombinedLoss(const Matrix& logits, std::span<const int> labels,
                       const LossConfig& cfg) {
  cfg.Validate();
  std::vector<double> probs(static_cast<std::size_t>(logits.rows()));
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    probs[i] = PositiveProbability(logits(i, 0), logits(i, 1));
  }
  LossTerms out;
  out.wce = WceLoss(probs, labels, cfg.w_pos, cfg.w_neg);
  out.grad = WceGradient(logits, labels, cfg.w_pos, cfg.w_neg);
  if (cfg.use_nce) {
    out.nce = NceLoss(logits, labels, cfg.tau, cfg.nce_mode);
    out.grad += NceGradient(logits, labels, cfg.tau, cfg.nce_mode);
  }
  out.total = out.wce + out.nce;
  return out;
}

LossTerms CombinedLoss(std::span<const double> probs, const Matrix& scores,
                       std::span<const int> labels, const LossConfig& cfg) {
  cfg.Validate();
  LossTerms out;
  out.wce = WceLoss(probs, labels, cfg.w_pos, cfg.w_neg);
  if (cfg.use_nce) out.nce = NceLoss(scores, labels, cfg.tau, cfg.nce_mode);
  out.total = out.wce + out.nce;
  return out;
}

}  // namespace eae::nli
