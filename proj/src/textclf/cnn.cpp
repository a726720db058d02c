#include "xling/textclf/cnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "xling/errors.hpp"
#include "xling/kernels.hpp"
#include "xling/rng.hpp"

namespace xling {

namespace {

void glorot_fill(std::span<double> values, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : values) v = rng.uniform(-a, a);
}

}  // namespace

std::size_t CnnModel::max_width() const noexcept {
  std::size_t w = 0;
  for (const auto& b : banks) w = std::max(w, b.width);
  return w;
}

CnnModel CnnModel::initialize(std::size_t dim, const CnnConfig& config, std::uint64_t seed) {
  if (dim == 0) throw DataError("cnn: embedding dimension must be positive");
  if (config.widths.empty() || config.filters_per_width == 0) throw UsageError("cnn: need at least one filter");
  if (!(config.dropout >= 0.0 && config.dropout < 1.0)) throw UsageError("cnn: dropout must be in [0, 1)");
  CnnModel m;
  m.dim = dim;
  m.dropout_rate = config.dropout;
  Rng rng(seed);
  for (std::size_t w : config.widths) {
    if (w == 0) throw UsageError("cnn: filter width must be positive");
    ConvBank bank;
    bank.width = w;
    bank.weights = Matrix(config.filters_per_width, w * dim);
    bank.bias.assign(config.filters_per_width, 0.0);
    glorot_fill(bank.weights.values(), w * dim, config.filters_per_width, rng);
    m.banks.push_back(std::move(bank));
  }
  const std::size_t features = config.widths.size() * config.filters_per_width;
  m.dense_w = Matrix(2, features);
  m.dense_b.assign(2, 0.0);
  glorot_fill(m.dense_w.values(), features, 2, rng);
  return m;
}

CnnModel CnnModel::zeros_like() const {
  CnnModel z = *this;
  for (auto p : z.parameters()) std::fill(p.begin(), p.end(), 0.0);
  return z;
}

std::vector<std::span<double>> CnnModel::parameters() {
  std::vector<std::span<double>> out;
  for (auto& b : banks) {
    out.push_back(b.weights.values());
    out.push_back(b.bias);
  }
  out.push_back(dense_w.values());
  out.push_back(dense_b);
  return out;
}

std::vector<std::span<const double>> CnnModel::parameters() const {
  std::vector<std::span<const double>> out;
  for (const auto& b : banks) {
    out.push_back(b.weights.values());
    out.push_back(b.bias);
  }
  out.push_back(dense_w.values());
  out.push_back(dense_b);
  return out;
}

std::array<double, 2> softmax(const std::array<double, 2>& scores) {
  const double m = std::max(scores[0], scores[1]);
  const double e0 = std::exp(scores[0] - m);
  const double e1 = std::exp(scores[1] - m);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

double cross_entropy(const std::array<double, 2>& scores, std::size_t label) {
  const double m = std::max(scores[0], scores[1]);
  const double lse = m + std::log(std::exp(scores[0] - m) + std::exp(scores[1] - m));
  return lse - scores[label];
}

namespace {

// Row-major buffer of at least `rows` rows; the original input when it is
// already long enough.
const double* padded_input(const Matrix& input, std::size_t rows, std::vector<double>& storage) {
  if (input.rows() >= rows) return input.values().data();
  storage.assign(rows * input.cols(), 0.0);
  std::copy(input.values().begin(), input.values().end(), storage.begin());
  return storage.data();
}

}  // namespace

CnnForward forward(const CnnModel& model, const Matrix& input, bool train_mode, std::uint64_t dropout_seed) {
  if (input.cols() != model.dim) {
    throw DataError("cnn forward: input dimension " + std::to_string(input.cols()) + " does not match model dimension " +
                    std::to_string(model.dim));
  }
  if (input.rows() == 0) throw DataError("cnn forward: empty input sequence");

  const auto& k = kernels::active();
  const std::size_t d = model.dim;
  std::vector<double> storage;
  const std::size_t rows = std::max(input.rows(), model.max_width());
  const double* x = padded_input(input, rows, storage);

  CnnForward out;
  const std::size_t features = model.feature_count();
  out.pooled.reserve(features);
  out.argmax.reserve(features);
  for (const auto& bank : model.banks) {
    const std::size_t steps = std::max(input.rows(), bank.width) - bank.width + 1;
    const std::size_t span = bank.width * d;
    for (std::size_t f = 0; f < bank.weights.rows(); ++f) {
      const double* w = bank.weights.row(f).data();
      double best = -std::numeric_limits<double>::infinity();
      std::size_t best_t = 0;
      for (std::size_t t = 0; t < steps; ++t) {
        const double v = k.dot(w, x + t * d, span);
        if (v > best) {
          best = v;
          best_t = t;
        }
      }
      out.pooled.push_back(std::max(0.0, best + bank.bias[f]));
      out.argmax.push_back(best_t);
    }
  }

  out.mask.assign(features, 1.0);
  if (train_mode && model.dropout_rate > 0.0) {
    Rng rng(dropout_seed);
    const double keep = 1.0 - model.dropout_rate;
    for (double& m : out.mask) m = rng.uniform() < keep ? 1.0 / keep : 0.0;
  }
  out.features.resize(features);
  for (std::size_t i = 0; i < features; ++i) out.features[i] = out.pooled[i] * out.mask[i];

  for (std::size_t c = 0; c < 2; ++c) {
    out.scores[c] = k.dot(model.dense_w.row(c).data(), out.features.data(), features) + model.dense_b[c];
  }
  out.prediction = out.scores[1] > out.scores[0] ? 1 : 0;
  return out;
}

CnnLossGrad loss_and_grads(const CnnModel& model, std::span<const Matrix* const> batch, std::span<const Label> labels,
                           std::uint64_t dropout_seed, bool train_mode) {
  if (batch.empty()) throw DataError("loss_and_grads: empty batch");
  if (batch.size() != labels.size()) throw DataError("loss_and_grads: batch and labels differ in length");

  const auto& k = kernels::active();
  CnnLossGrad out{0.0, model.zeros_like()};
  const double scale = 1.0 / static_cast<double>(batch.size());
  const std::size_t d = model.dim;
  const std::size_t features = model.feature_count();
  std::vector<double> storage;
  std::vector<double> d_features(features);

  for (std::size_t b = 0; b < batch.size(); ++b) {
    const Matrix& input = *batch[b];
    const std::size_t label = class_index(labels[b]);
    const CnnForward fw = forward(model, input, train_mode, derive_seed(dropout_seed, b));
    out.loss += scale * cross_entropy(fw.scores, label);

    const auto p = softmax(fw.scores);
    const std::array<double, 2> d_scores{scale * (p[0] - (label == 0 ? 1.0 : 0.0)),
                                         scale * (p[1] - (label == 1 ? 1.0 : 0.0))};
    for (std::size_t c = 0; c < 2; ++c) {
      out.grads.dense_b[c] += d_scores[c];
      k.axpy(d_scores[c], fw.features.data(), out.grads.dense_w.row(c).data(), features);
    }
    for (std::size_t i = 0; i < features; ++i) {
      d_features[i] = (d_scores[0] * model.dense_w(0, i) + d_scores[1] * model.dense_w(1, i)) * fw.mask[i];
    }

    const std::size_t rows = std::max(input.rows(), model.max_width());
    const double* x = padded_input(input, rows, storage);
    std::size_t feature = 0;
    for (std::size_t bi = 0; bi < model.banks.size(); ++bi) {
      const auto& bank = model.banks[bi];
      auto& grad_bank = out.grads.banks[bi];
      const std::size_t span = bank.width * d;
      for (std::size_t f = 0; f < bank.weights.rows(); ++f, ++feature) {
        // ReLU passes gradient only where the pooled activation is positive.
        if (fw.pooled[feature] <= 0.0 || d_features[feature] == 0.0) continue;
        grad_bank.bias[f] += d_features[feature];
        k.axpy(d_features[feature], x + fw.argmax[feature] * d, grad_bank.weights.row(f).data(), span);
      }
    }
  }
  if (!std::isfinite(out.loss)) throw NumericalError("loss_and_grads: non-finite loss");
  return out;
}

}  // namespace xling
