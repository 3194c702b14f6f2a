#include "nli/trainer.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "error.hpp"
#include "rng.hpp"

namespace eae::nli {

void TrainConfig::Validate() const {
  if (folds < 2) throw Error(ErrorCode::kConfig, "folds must be at least 2");
  if (!(learning_rate > 0.0)) {
    throw Error(ErrorCode::kConfig, "learning_rate must be positive");
  }
  if (epochs < 1) throw Error(ErrorCode::kConfig, "epochs must be at least 1");
  if (batch_size < 1) {
    throw Error(ErrorCode::kConfig, "batch_size must be at least 1");
  }
  if (weight_decay < 0.0) {
    throw Error(ErrorCode::kConfig, "weight_decay must be non-negative");
  }
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"folds", c.folds},
                     {"learning_rate", c.learning_rate},
                     {"weight_decay", c.weight_decay},
                     {"epochs", c.epochs},
                     {"batch_size", c.batch_size},
                     {"seed", c.seed},
                     {"threshold", c.threshold},
                     {"encoder", c.encoder}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  c.folds = j.value("folds", c.folds);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.weight_decay = j.value("weight_decay", c.weight_decay);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.seed = j.value("seed", c.seed);
  c.threshold = j.value("threshold", c.threshold);
  if (auto it = j.find("encoder"); it != j.end()) {
    nlohmann::json merged = c.encoder;
    merged.update(*it);
    c.encoder = merged.get<EncoderConfig>();
  }
}

PairQuery ToQuery(const NliPair& pair) {
  return {pair.premise,  pair.hypothesis, pair.sentence_id,
          pair.event_id, pair.entity_id,  pair.relation};
}

std::vector<Label> PredictLabels(const EntailmentScorer& scorer,
                                 std::span<const NliPair> pairs,
                                 double threshold) {
  std::vector<PairQuery> queries;
  queries.reserve(pairs.size());
  for (const auto& p : pairs) queries.push_back(ToQuery(p));
  const auto probs = scorer.Score(queries);
  std::vector<Label> out;
  out.reserve(probs.size());
  for (double p : probs) {
    out.push_back(p >= threshold ? Label::kPositive : Label::kNegative);
  }
  return out;
}

namespace {

std::vector<Label> GoldLabels(std::span<const NliPair> pairs) {
  std::vector<Label> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.label);
  return out;
}

bool HasBothClasses(std::span<const NliPair> pairs) {
  bool pos = false, neg = false;
  for (const auto& p : pairs) {
    (p.label == Label::kPositive ? pos : neg) = true;
  }
  return pos && neg;
}

}  // namespace

std::vector<EpochMetrics> TrainModel(NliModel& model,
                                     std::span<const NliPair> train,
                                     std::span<const NliPair> validation,
                                     const TrainConfig& train_cfg,
                                     const LossConfig& loss_cfg,
                                     std::uint64_t shuffle_seed,
                                     const LogFn& log) {
  if (train.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no training pairs");
  }
  loss_cfg.Validate();
  model.set_threshold(train_cfg.threshold);
  AdamW optimizer(model.Params(),
                  {.learning_rate = train_cfg.learning_rate,
                   .weight_decay = train_cfg.weight_decay});
  Rng rng(shuffle_seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<EpochMetrics> history;
  for (int epoch = 1; epoch <= train_cfg.epochs; ++epoch) {
    rng.Shuffle(order);
    EpochMetrics m;
    m.epoch = epoch;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(train_cfg.batch_size)) {
      const std::size_t end = std::min(
          order.size(), start + static_cast<std::size_t>(train_cfg.batch_size));
      std::vector<std::pair<std::string_view, std::string_view>> batch;
      std::vector<int> labels;
      for (std::size_t i = start; i < end; ++i) {
        const NliPair& p = train[order[i]];
        batch.emplace_back(p.premise, p.hypothesis);
        labels.push_back(p.label == Label::kPositive ? 1 : 0);
      }
      model.ZeroGrad();
      NliModel::BatchTape tape;
      const Matrix logits = model.ForwardBatch(batch, tape);
      const LossTerms loss = CombinedLoss(logits, labels, loss_cfg);
      model.BackwardBatch(tape, loss.grad);
      optimizer.Step();
      const double weight = static_cast<double>(end - start) / order.size();
      m.wce += loss.wce * weight;
      m.nce += loss.nce * weight;
      m.total += loss.total * weight;
    }
    if (!validation.empty()) {
      const auto metrics = EvaluateNli(
          PredictLabels(model, validation, train_cfg.threshold),
          GoldLabels(validation));
      m.validation_f1 = metrics.average;
      m.validation_accuracy = metrics.accuracy;
    }
    if (log) {
      std::ostringstream line;
      line << "epoch " << epoch << " loss " << m.total << " (wce " << m.wce
           << ", nce " << m.nce << ")";
      if (m.validation_f1) line << " val_f1 " << *m.validation_f1;
      log(line.str());
    }
    history.push_back(m);
  }
  return history;
}

std::vector<int> AssignFolds(std::span<const NliPair> pairs, int folds,
                             std::uint64_t seed) {
  if (folds < 1) throw Error(ErrorCode::kConfig, "folds must be positive");
  std::vector<std::string> premises;
  std::map<std::string, std::size_t> group_size;
  for (const auto& p : pairs) {
    if (group_size[p.sentence_id]++ == 0) premises.push_back(p.sentence_id);
  }
  Rng rng(seed);
  rng.Shuffle(premises);
  std::vector<std::size_t> load(static_cast<std::size_t>(folds), 0);
  std::map<std::string, int> fold_of;
  for (const auto& id : premises) {
    const auto smallest = std::min_element(load.begin(), load.end());
    fold_of[id] = static_cast<int>(smallest - load.begin());
    *smallest += group_size[id];
  }
  std::vector<int> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(fold_of[p.sentence_id]);
  return out;
}

KFoldResult TrainKFold(std::span<const NliPair> train_pairs,
                       const TrainConfig& train_cfg, const LossConfig& loss_cfg,
                       const LogFn& log) {
  train_cfg.Validate();
  loss_cfg.Validate();
  if (train_pairs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "train split is empty");
  }
  const auto assignment =
      AssignFolds(train_pairs, train_cfg.folds, DeriveSeed(train_cfg.seed, 100));

  KFoldResult result;
  double f1_sum = 0.0;
  int f1_count = 0;
  for (int fold = 0; fold < train_cfg.folds; ++fold) {
    std::vector<NliPair> train;
    std::vector<NliPair> validation;
    FoldReport report;
    report.fold = fold;
    for (std::size_t i = 0; i < train_pairs.size(); ++i) {
      if (assignment[i] == fold) {
        validation.push_back(train_pairs[i]);
        if (report.validation_sentences.empty() ||
            report.validation_sentences.back() != train_pairs[i].sentence_id) {
          report.validation_sentences.push_back(train_pairs[i].sentence_id);
        }
      } else {
        train.push_back(train_pairs[i]);
      }
    }
    std::sort(report.validation_sentences.begin(),
              report.validation_sentences.end());
    report.validation_sentences.erase(
        std::unique(report.validation_sentences.begin(),
                    report.validation_sentences.end()),
        report.validation_sentences.end());
    report.train_pairs = train.size();
    report.validation_pairs = validation.size();

    const std::uint64_t fold_seed =
        DeriveSeed(train_cfg.seed, 1000 + static_cast<std::uint64_t>(fold));
    NliModel model = NliModel::Create(train_cfg.encoder, fold_seed);
    if (log) log("fold " + std::to_string(fold + 1) + "/" +
                 std::to_string(train_cfg.folds));
    if (train.empty()) {
      report.skipped = true;
      report.warning = "fold has no training pairs";
    } else {
      report.epochs = TrainModel(model, train, validation, train_cfg, loss_cfg,
                                 DeriveSeed(fold_seed, 7), log);
    }
    if (!HasBothClasses(validation) || !HasBothClasses(train)) {
      report.skipped = true;
      report.warning = "fold holds a single class; excluded from averaging";
    }
    if (!validation.empty()) {
      std::vector<Label> gold;
      for (const auto& p : validation) gold.push_back(p.label);
      report.validation = EvaluateNli(
          PredictLabels(model, validation, train_cfg.threshold), gold);
    }
    if (!report.warning.empty() && log) log("warning: " + report.warning);
    if (!report.skipped && report.validation && report.validation->average) {
      const double f1 = *report.validation->average;
      f1_sum += f1;
      ++f1_count;
      if (!result.best_fold ||
          f1 > *result.folds[*result.best_fold].validation->average) {
        result.best_fold = fold;
      }
    }
    result.folds.push_back(std::move(report));
    result.models.push_back(std::move(model));
  }
  if (f1_count > 0) result.mean_validation_f1 = f1_sum / f1_count;
  return result;
}

}  // namespace eae::nli
