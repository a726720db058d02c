#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "xling/matrix.hpp"
#include "xling/textclf/dataset.hpp"

namespace xling {

// Logistic regression on the mean token vector. Scores are (z, 0) so the same
// softmax cross-entropy and argmax rule apply as for the CNN.
struct MeanBaselineModel {
  std::size_t dim = 0;
  std::vector<double> weights;
  std::vector<double> bias;  // single entry

  static MeanBaselineModel initialize(std::size_t dim, std::uint64_t seed);
  MeanBaselineModel zeros_like() const;
  std::vector<std::span<double>> parameters();
  std::vector<std::span<const double>> parameters() const;

  bool operator==(const MeanBaselineModel&) const = default;
};

std::vector<double> mean_row(const Matrix& input);
std::array<double, 2> baseline_scores(const MeanBaselineModel& model, const Matrix& input);

struct BaselineLossGrad {
  double loss = 0.0;
  MeanBaselineModel grads;
};

BaselineLossGrad loss_and_grads(const MeanBaselineModel& model, std::span<const Matrix* const> batch,
                                std::span<const Label> labels);

}  // namespace xling
