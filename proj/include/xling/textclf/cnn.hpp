#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "xling/matrix.hpp"
#include "xling/textclf/dataset.hpp"

namespace xling {

struct CnnConfig {
  std::vector<std::size_t> widths{2, 3, 4};
  std::size_t filters_per_width = 256;
  double dropout = 0.5;
};

// Filters of one width; row f of `weights` is filter f flattened over
// (width × dim), matching a contiguous window of a row-major input.
struct ConvBank {
  std::size_t width = 0;
  Matrix weights;
  std::vector<double> bias;

  bool operator==(const ConvBank&) const = default;
};

// One convolution layer over frozen embeddings, ReLU, max-over-time pooling,
// dropout and a dense layer producing two class scores.
struct CnnModel {
  std::size_t dim = 0;
  double dropout_rate = 0.5;
  std::vector<ConvBank> banks;
  Matrix dense_w;               // 2 × feature_count
  std::vector<double> dense_b;  // 2

  std::size_t feature_count() const noexcept { return dense_w.cols(); }
  std::size_t max_width() const noexcept;

  // Glorot-uniform weights, zero biases.
  static CnnModel initialize(std::size_t dim, const CnnConfig& config, std::uint64_t seed);
  CnnModel zeros_like() const;

  // Every trainable tensor, in a fixed order.
  std::vector<std::span<double>> parameters();
  std::vector<std::span<const double>> parameters() const;

  bool operator==(const CnnModel&) const = default;
};

struct CnnForward {
  std::array<double, 2> scores{};
  std::vector<double> pooled;         // after ReLU and max-over-time
  std::vector<std::size_t> argmax;    // time step that produced each maximum
  std::vector<double> mask;           // inverted-dropout multipliers (all 1 in eval)
  std::vector<double> features;       // pooled ⊙ mask
  std::size_t prediction = 0;
};

// Inputs shorter than a filter are zero-padded at the end to its width.
CnnForward forward(const CnnModel& model, const Matrix& input, bool train_mode, std::uint64_t dropout_seed);

struct CnnLossGrad {
  double loss = 0.0;
  CnnModel grads;
};

// Mean softmax cross-entropy over the batch and its exact gradient. Example b
// draws its dropout mask from derive_seed(dropout_seed, b).
CnnLossGrad loss_and_grads(const CnnModel& model, std::span<const Matrix* const> batch,
                           std::span<const Label> labels, std::uint64_t dropout_seed, bool train_mode = true);

// -log softmax(scores)[label], computed stably.
double cross_entropy(const std::array<double, 2>& scores, std::size_t label);
std::array<double, 2> softmax(const std::array<double, 2>& scores);

}  // namespace xling
