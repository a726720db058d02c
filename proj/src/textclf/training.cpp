#include "xling/textclf/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xling/errors.hpp"
#include "xling/rng.hpp"

namespace xling {

std::string_view to_string(LrSchedule schedule) {
  return schedule == LrSchedule::kConstant ? "constant" : "linear_decay";
}

LrSchedule parse_lr_schedule(std::string_view name) {
  if (name == "constant") return LrSchedule::kConstant;
  if (name == "linear_decay") return LrSchedule::kLinearDecay;
  throw UsageError("unknown lr schedule '" + std::string(name) + "' (expected constant|linear_decay)");
}

void validate(const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) throw UsageError("train: learning rate must be > 0");
  if (cfg.batch_size < 1) throw UsageError("train: batch size must be >= 1");
  if (cfg.max_epochs < 1) throw UsageError("train: epochs must be >= 1");
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0) || !(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0)) {
    throw UsageError("train: Adam betas must be in [0, 1)");
  }
  if (!(cfg.epsilon > 0.0)) throw UsageError("train: Adam epsilon must be > 0");
}

namespace {

class Adam {
 public:
  Adam(const std::vector<std::span<double>>& params, const TrainConfig& cfg) : cfg_(cfg) {
    for (const auto& p : params) {
      m_.emplace_back(p.size(), 0.0);
      v_.emplace_back(p.size(), 0.0);
    }
  }

  void step(const std::vector<std::span<double>>& params, const std::vector<std::span<const double>>& grads,
            double lr) {
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t b = 0; b < params.size(); ++b) {
      auto& m = m_[b];
      auto& v = v_[b];
      for (std::size_t i = 0; i < params[b].size(); ++i) {
        const double g = grads[b][i];
        m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
        v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
        params[b][i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg_.epsilon);
      }
    }
  }

 private:
  TrainConfig cfg_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  long long t_ = 0;
};

struct EmbeddedSet {
  std::vector<Matrix> inputs;
  std::vector<Label> labels;
};

EmbeddedSet embed_all(const LabeledDataset& ds, const EmbeddingSpace& space) {
  EmbeddedSet out;
  for (const auto& ex : ds.examples) {
    if (ex.tokens.empty()) continue;
    out.inputs.push_back(embed_sequence(ex.tokens, space));
    out.labels.push_back(ex.label);
  }
  return out;
}

std::array<double, 2> model_scores(const CnnModel& m, const Matrix& x) { return forward(m, x, false, 0).scores; }
std::array<double, 2> model_scores(const MeanBaselineModel& m, const Matrix& x) { return baseline_scores(m, x); }

std::size_t argmax(const std::array<double, 2>& s) { return s[1] > s[0] ? 1 : 0; }

template <typename Model>
double accuracy_on(const Model& model, const EmbeddedSet& set) {
  if (set.inputs.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < set.inputs.size(); ++i) {
    if (argmax(model_scores(model, set.inputs[i])) == class_index(set.labels[i])) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(set.inputs.size());
}

template <typename Model, typename LossFn>
TrainResult<Model> train_loop(Model model, EmbeddedSet train_set, const EmbeddedSet& dev_set, const TrainConfig& cfg,
                              std::size_t skipped, LossFn&& loss_fn) {
  validate(cfg);
  if (train_set.inputs.empty()) throw DataError("train: training set is empty");
  if (dev_set.inputs.empty()) throw DataError("train: dev set is empty");

  const std::size_t n = train_set.inputs.size();
  const std::size_t batches = (n + cfg.batch_size - 1) / cfg.batch_size;
  const double total_steps = static_cast<double>(batches * cfg.max_epochs);

  TrainResult<Model> result{model, {}};
  result.history.skipped_examples = skipped;
  Adam adam(model.parameters(), cfg);
  std::vector<std::size_t> order(n);
  std::size_t step = 0;
  bool have_best = false;
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle(derive_seed(cfg.seed, epoch));
    shuffle.shuffle(std::span<std::size_t>(order));

    double epoch_loss = 0.0;
    for (std::size_t b = 0; b < batches; ++b, ++step) {
      const std::size_t start = b * cfg.batch_size;
      const std::size_t stop = std::min(n, start + cfg.batch_size);
      std::vector<const Matrix*> inputs;
      std::vector<Label> labels;
      for (std::size_t i = start; i < stop; ++i) {
        inputs.push_back(&train_set.inputs[order[i]]);
        labels.push_back(train_set.labels[order[i]]);
      }
      const std::uint64_t dropout_seed = derive_seed(derive_seed(cfg.seed, 1000003 + epoch), b);
      auto lg = loss_fn(model, inputs, labels, dropout_seed);
      if (!std::isfinite(lg.loss)) {
        throw NumericalError("train: diverged at epoch " + std::to_string(epoch) + " (non-finite loss)");
      }
      epoch_loss += lg.loss * static_cast<double>(stop - start);
      double lr = cfg.learning_rate;
      if (cfg.schedule == LrSchedule::kLinearDecay) lr *= 1.0 - static_cast<double>(step) / total_steps;
      const auto& grads = lg.grads;
      adam.step(model.parameters(), grads.parameters(), lr);
    }

    const double dev_acc = accuracy_on(model, dev_set);
    result.history.epochs.push_back({epoch, epoch_loss / static_cast<double>(n), dev_acc});
    if (!have_best || dev_acc >= result.history.best_dev_accuracy) {
      have_best = true;
      result.history.best_dev_accuracy = dev_acc;
      result.history.best_epoch = epoch;
      result.model = model;
    }
  }
  return result;
}

}  // namespace

TrainResult<CnnModel> train(CnnModel model, const LabeledDataset& train_set, const LabeledDataset& dev_set,
                            const EmbeddingSpace& space, const TrainConfig& cfg) {
  if (model.dim != space.dim()) {
    throw DataError("train: model dimension " + std::to_string(model.dim) + " does not match embedding dimension " +
                    std::to_string(space.dim()));
  }
  return train_loop(std::move(model), embed_all(train_set, space), embed_all(dev_set, space), cfg, 0,
                    [](const CnnModel& m, const std::vector<const Matrix*>& x, const std::vector<Label>& y,
                       std::uint64_t seed) { return loss_and_grads(m, x, y, seed); });
}

TrainResult<MeanBaselineModel> fit_mean_baseline(const LabeledDataset& train_set, const LabeledDataset& dev_set,
                                                 const EmbeddingSpace& space, const TrainConfig& cfg) {
  EmbeddedSet all = embed_all(train_set, space);
  EmbeddedSet kept;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < all.inputs.size(); ++i) {
    const auto& v = all.inputs[i].values();
    if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) {
      ++skipped;
      continue;
    }
    kept.inputs.push_back(std::move(all.inputs[i]));
    kept.labels.push_back(all.labels[i]);
  }
  return train_loop(MeanBaselineModel::initialize(space.dim(), cfg.seed), std::move(kept), embed_all(dev_set, space),
                    cfg, skipped,
                    [](const MeanBaselineModel& m, const std::vector<const Matrix*>& x, const std::vector<Label>& y,
                       std::uint64_t) { return loss_and_grads(m, x, y); });
}

std::size_t classifier_dim(const Classifier& model) {
  return std::visit([](const auto& m) { return m.dim; }, model);
}

Prediction predict(const Classifier& model, const Matrix& input) {
  const auto scores = std::visit([&](const auto& m) { return model_scores(m, input); }, model);
  const std::size_t cls = argmax(scores);
  return {cls == 0 ? Label::kPositive : Label::kNegative, softmax(scores)[cls]};
}

Prediction predict(const CnnModel& model, const Matrix& input) { return predict(Classifier(model), input); }

EvalReport report_from_confusion(const std::array<std::array<std::size_t, 2>, 2>& confusion) {
  EvalReport r;
  r.confusion = confusion;
  r.count = confusion[0][0] + confusion[0][1] + confusion[1][0] + confusion[1][1];
  if (r.count == 0) return r;
  r.accuracy = static_cast<double>(confusion[0][0] + confusion[1][1]) / static_cast<double>(r.count);
  double f1_sum = 0.0;
  for (std::size_t c = 0; c < 2; ++c) {
    const double tp = static_cast<double>(confusion[c][c]);
    const double predicted = static_cast<double>(confusion[0][c] + confusion[1][c]);
    const double actual = static_cast<double>(confusion[c][0] + confusion[c][1]);
    const double precision = predicted > 0 ? tp / predicted : 0.0;
    const double recall = actual > 0 ? tp / actual : 0.0;
    f1_sum += (precision + recall) > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  }
  r.macro_f1 = f1_sum / 2.0;
  return r;
}

EvalReport evaluate(const Classifier& model, const LabeledDataset& dataset, const EmbeddingSpace& space) {
  if (dataset.empty()) throw DataError("evaluate: dataset is empty");
  if (classifier_dim(model) != space.dim()) {
    throw DataError("evaluate: model dimension " + std::to_string(classifier_dim(model)) +
                    " does not match embedding dimension " + std::to_string(space.dim()));
  }
  std::array<std::array<std::size_t, 2>, 2> confusion{};
  for (const auto& ex : dataset.examples) {
    if (ex.tokens.empty()) continue;
    const Prediction p = predict(model, embed_sequence(ex.tokens, space));
    ++confusion[class_index(ex.label)][class_index(p.label)];
  }
  return report_from_confusion(confusion);
}

EvalReport evaluate(const CnnModel& model, const LabeledDataset& dataset, const EmbeddingSpace& space) {
  return evaluate(Classifier(model), dataset, space);
}

}  // namespace xling
