#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "nli/encoder.hpp"
#include "nli/scorer.hpp"

namespace eae::nli {

// Encoder plus a d x 2 linear head. The positive probability is the softmax
// of the two logits at column 1, equivalently sigmoid(l1 - l0).
class NliModel : public EntailmentScorer {
 public:
  NliModel(std::unique_ptr<EncoderBackend> encoder, std::uint64_t head_seed);
  NliModel(const NliModel& other);
  NliModel& operator=(const NliModel& other);
  NliModel(NliModel&&) noexcept = default;
  NliModel& operator=(NliModel&&) noexcept = default;

  static NliModel Create(const EncoderConfig& config, std::uint64_t seed);

  const EncoderBackend& encoder() const { return *encoder_; }
  Linear& head() { return head_; }

  double threshold() const { return threshold_; }
  void set_threshold(double t) { threshold_ = t; }

  Vector EncodePair(std::string_view premise, std::string_view hypothesis) const;
  RowVector Logits(std::string_view premise, std::string_view hypothesis) const;
  double Predict(std::string_view premise, std::string_view hypothesis) const;
  bool Decide(double probability) const { return probability >= threshold_; }

  std::vector<double> Score(std::span<const PairQuery> queries) const override;

  // Training: logits for a batch with tapes kept for Backward.
  struct BatchTape {
    std::vector<std::unique_ptr<EncoderBackend::Tape>> encoder;
    Matrix pooled;  // N x d
  };
  Matrix ForwardBatch(std::span<const std::pair<std::string_view,
                                                std::string_view>> pairs,
                      BatchTape& tape) const;
  void BackwardBatch(const BatchTape& tape, const Matrix& dlogits);

  ParamRefs Params();
  void ZeroGrad();

  // Directory with config.json and weights.bin.
  void Save(const std::filesystem::path& dir) const;
  static NliModel Load(const std::filesystem::path& dir);

 private:
  std::unique_ptr<EncoderBackend> encoder_;
  Linear head_;
  double threshold_ = 0.5;
};

// Decoupled weight decay Adam.
class AdamW {
 public:
  struct Options {
    double learning_rate = 2e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double weight_decay = 1e-8;
  };

  AdamW(ParamRefs params, Options options);
  void Step();

 private:
  ParamRefs params_;
  Options options_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  long step_ = 0;
};

}  // namespace eae::nli
