#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evaluator.hpp"
#include "nli/classifier.hpp"
#include "nli/loss.hpp"
#include "pairgen.hpp"

namespace eae::nli {

struct TrainConfig {
  int folds = 5;
  double learning_rate = 2e-5;
  double weight_decay = 1e-8;
  int epochs = 5;
  int batch_size = 16;
  std::uint64_t seed = 42;
  double threshold = 0.5;
  EncoderConfig encoder;

  void Validate() const;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
// Missing keys keep their current value in `c`.
void from_json(const nlohmann::json& j, TrainConfig& c);

using LogFn = std::function<void(std::string_view)>;

struct EpochMetrics {
  int epoch = 0;
  double wce = 0.0;
  double nce = 0.0;
  double total = 0.0;
  std::optional<double> validation_f1;  // macro average over classes
  std::optional<double> validation_accuracy;

  friend bool operator==(const EpochMetrics&, const EpochMetrics&) = default;
};

PairQuery ToQuery(const NliPair& pair);

std::vector<Label> PredictLabels(const EntailmentScorer& scorer,
                                 std::span<const NliPair> pairs,
                                 double threshold);

// Trains `model` in place. Batch order is drawn from `shuffle_seed`.
// Validation metrics are recorded per epoch when `validation` is nonempty.
std::vector<EpochMetrics> TrainModel(NliModel& model,
                                     std::span<const NliPair> train,
                                     std::span<const NliPair> validation,
                                     const TrainConfig& train_cfg,
                                     const LossConfig& loss_cfg,
                                     std::uint64_t shuffle_seed,
                                     const LogFn& log = {});

// Fold index per pair. Pairs sharing a sentence_id share a fold; premise
// groups are shuffled by `seed` and placed greedily on the smallest fold.
std::vector<int> AssignFolds(std::span<const NliPair> pairs, int folds,
                             std::uint64_t seed);

struct FoldReport {
  int fold = 0;
  std::size_t train_pairs = 0;
  std::size_t validation_pairs = 0;
  std::vector<std::string> validation_sentences;
  std::vector<EpochMetrics> epochs;
  std::optional<NliMetrics> validation;
  bool skipped = false;  // excluded from averaging and model selection
  std::string warning;
};

struct KFoldResult {
  std::vector<FoldReport> folds;
  std::vector<NliModel> models;
  std::optional<int> best_fold;
  std::optional<double> mean_validation_f1;
};

// Requires a nonempty train split; all randomness derives from
// train_cfg.seed.
KFoldResult TrainKFold(std::span<const NliPair> train_pairs,
                       const TrainConfig& train_cfg, const LossConfig& loss_cfg,
                       const LogFn& log = {});

}  // namespace eae::nli
