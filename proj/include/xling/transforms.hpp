#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "xling/dictionary.hpp"
#include "xling/linear_map.hpp"
#include "xling/matrix.hpp"

namespace xling {

enum class Distance { kCosine, kSqEuclidean };

std::string_view to_string(Distance distance);
Distance parse_distance(std::string_view name);

// Hyperparameters of the ranking fits (rank, orra).
struct RankConfig {
  double margin = 0.5;
  std::size_t negatives = 10;
  std::size_t epochs = 50;
  double learning_rate = 0.01;
  std::uint64_t seed = 42;
  Distance distance = Distance::kCosine;
  // Pairs per gradient step; the step uses the mean gradient over the batch.
  std::size_t batch_size = 32;
};

// Throws UsageError when a field is out of range.
void validate(const RankConfig& cfg);

struct CcaFactors {
  Matrix w_s_o;  // source -> shared
  Matrix w_t_o;  // target -> shared
  std::vector<double> correlations;
};

struct CcaFit {
  LinearMap map;
  CcaFactors factors;
};

// Per-pair lists of negative target rows (never the pair's own row).
using NegativeSets = std::vector<std::vector<std::size_t>>;

// Sum over seed pairs of |W·xs_i - xt_i|².
double mse_objective(const Matrix& w, const SeedMatrices& seeds);

LinearMap fit_mse(const SeedMatrices& seeds);
LinearMap fit_orthogonal(const SeedMatrices& seeds);

// ridge <= 0 disables regularization; nullopt selects 1e-8·trace(C)/d per
// covariance block.
CcaFit fit_cca(const SeedMatrices& seeds, std::optional<double> ridge = std::nullopt);

double hinge_rank_loss(const Matrix& w, const SeedMatrices& seeds, const NegativeSets& negatives,
                       const RankConfig& cfg);
NegativeSets sample_negatives(std::size_t pairs, std::size_t per_pair, std::uint64_t seed);

LinearMap fit_rank(const SeedMatrices& seeds, const RankConfig& cfg = {});
LinearMap fit_or_ra(const SeedMatrices& seeds, const RankConfig& cfg = {});

struct FitOptions {
  Method method = Method::kOrto;
  RankConfig rank;
  std::optional<double> cca_ridge;
};

LinearMap fit(const SeedMatrices& seeds, const FitOptions& options);

}  // namespace xling
