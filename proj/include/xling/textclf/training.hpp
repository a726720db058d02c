#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "xling/embedding_space.hpp"
#include "xling/textclf/cnn.hpp"
#include "xling/textclf/dataset.hpp"
#include "xling/textclf/mean_baseline.hpp"

namespace xling {

enum class LrSchedule { kConstant, kLinearDecay };

std::string_view to_string(LrSchedule schedule);
LrSchedule parse_lr_schedule(std::string_view name);

struct TrainConfig {
  double learning_rate = 1e-3;
  LrSchedule schedule = LrSchedule::kConstant;
  std::size_t batch_size = 32;
  std::size_t max_epochs = 10;
  std::uint64_t seed = 42;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  bool operator==(const TrainConfig&) const = default;
};

// Throws UsageError when a field is out of range.
void validate(const TrainConfig& cfg);

struct EpochStats {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double dev_accuracy = 0.0;

  bool operator==(const EpochStats&) const = default;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  std::size_t best_epoch = 0;
  double best_dev_accuracy = 0.0;
  // Training examples left out (mean baseline: texts whose tokens are all OOV).
  std::size_t skipped_examples = 0;

  bool operator==(const TrainHistory&) const = default;
};

template <typename Model>
struct TrainResult {
  Model model;
  TrainHistory history;
};

using Classifier = std::variant<CnnModel, MeanBaselineModel>;

// Adam on mean cross-entropy with per-epoch seeded shuffling; returns the
// parameters of the epoch with the best dev accuracy (latest on ties).
// The embedding space is only read.
TrainResult<CnnModel> train(CnnModel model, const LabeledDataset& train_set, const LabeledDataset& dev_set,
                            const EmbeddingSpace& space, const TrainConfig& cfg);

TrainResult<MeanBaselineModel> fit_mean_baseline(const LabeledDataset& train_set, const LabeledDataset& dev_set,
                                                 const EmbeddingSpace& space, const TrainConfig& cfg);

struct Prediction {
  Label label = Label::kPositive;
  double probability = 0.0;  // softmax probability of `label`
};

Prediction predict(const Classifier& model, const Matrix& input);
Prediction predict(const CnnModel& model, const Matrix& input);
std::size_t classifier_dim(const Classifier& model);

struct EvalReport {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  // confusion[true][predicted], class 0 = positive
  std::array<std::array<std::size_t, 2>, 2> confusion{};
  std::size_t count = 0;

  bool operator==(const EvalReport&) const = default;
};

// Accuracy and macro-F1 from a confusion matrix (per-class F1 is 0 when its
// precision and recall are both 0).
EvalReport report_from_confusion(const std::array<std::array<std::size_t, 2>, 2>& confusion);

EvalReport evaluate(const Classifier& model, const LabeledDataset& dataset, const EmbeddingSpace& space);
EvalReport evaluate(const CnnModel& model, const LabeledDataset& dataset, const EmbeddingSpace& space);

}  // namespace xling
