#include "xling/textclf/mean_baseline.hpp"

#include <cmath>

#include "xling/errors.hpp"
#include "xling/kernels.hpp"
#include "xling/rng.hpp"
#include "xling/textclf/cnn.hpp"

namespace xling {

MeanBaselineModel MeanBaselineModel::initialize(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw DataError("mean baseline: embedding dimension must be positive");
  MeanBaselineModel m;
  m.dim = dim;
  m.weights.resize(dim);
  m.bias.assign(1, 0.0);
  Rng rng(seed);
  const double a = std::sqrt(6.0 / static_cast<double>(dim + 1));
  for (double& w : m.weights) w = rng.uniform(-a, a);
  return m;
}

MeanBaselineModel MeanBaselineModel::zeros_like() const {
  MeanBaselineModel z = *this;
  std::fill(z.weights.begin(), z.weights.end(), 0.0);
  std::fill(z.bias.begin(), z.bias.end(), 0.0);
  return z;
}

std::vector<std::span<double>> MeanBaselineModel::parameters() { return {weights, bias}; }
std::vector<std::span<const double>> MeanBaselineModel::parameters() const { return {weights, bias}; }

std::vector<double> mean_row(const Matrix& input) {
  std::vector<double> mean(input.cols(), 0.0);
  if (input.rows() == 0) return mean;
  for (std::size_t i = 0; i < input.rows(); ++i) kernels::axpy(1.0, input.row(i), mean);
  for (double& v : mean) v /= static_cast<double>(input.rows());
  return mean;
}

std::array<double, 2> baseline_scores(const MeanBaselineModel& model, const Matrix& input) {
  if (input.cols() != model.dim) {
    throw DataError("mean baseline: input dimension " + std::to_string(input.cols()) +
                    " does not match model dimension " + std::to_string(model.dim));
  }
  const auto mean = mean_row(input);
  return {kernels::dot(model.weights, mean) + model.bias[0], 0.0};
}

BaselineLossGrad loss_and_grads(const MeanBaselineModel& model, std::span<const Matrix* const> batch,
                                std::span<const Label> labels) {
  if (batch.empty()) throw DataError("loss_and_grads: empty batch");
  if (batch.size() != labels.size()) throw DataError("loss_and_grads: batch and labels differ in length");
  BaselineLossGrad out{0.0, model.zeros_like()};
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const auto scores = baseline_scores(model, *batch[b]);
    const std::size_t label = class_index(labels[b]);
    out.loss += scale * cross_entropy(scores, label);
    const double dz = scale * (softmax(scores)[0] - (label == 0 ? 1.0 : 0.0));
    kernels::axpy(dz, mean_row(*batch[b]), out.grads.weights);
    out.grads.bias[0] += dz;
  }
  if (!std::isfinite(out.loss)) throw NumericalError("loss_and_grads: non-finite loss");
  return out;
}

}  // namespace xling
