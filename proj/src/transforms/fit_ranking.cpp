#include <cmath>
#include <numeric>

#include "xling/errors.hpp"
#include "xling/kernels.hpp"
#include "xling/numerics.hpp"
#include "xling/rng.hpp"
#include "xling/text_format.hpp"
#include "xling/transforms.hpp"

namespace xling {

std::string_view to_string(Distance distance) {
  return distance == Distance::kCosine ? "cosine" : "sq_euclidean";
}

Distance parse_distance(std::string_view name) {
  if (name == "cosine") return Distance::kCosine;
  if (name == "sq_euclidean") return Distance::kSqEuclidean;
  throw UsageError("unknown distance '" + std::string(name) + "' (expected cosine|sq_euclidean)");
}

void validate(const RankConfig& cfg) {
  if (!(cfg.margin >= 0.0) || !std::isfinite(cfg.margin)) throw UsageError("rank: margin must be >= 0");
  if (cfg.negatives < 1) throw UsageError("rank: negatives per pair must be >= 1");
  if (cfg.epochs < 1) throw UsageError("rank: epochs must be >= 1");
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw UsageError("rank: learning rate must be > 0");
  }
  if (cfg.batch_size < 1) throw UsageError("rank: batch size must be >= 1");
}

namespace {


double cosine(std::span<const double> a, double norm_a, std::span<const double> b, double norm_b) {
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  return kernels::dot(a, b) / (norm_a * norm_b);
}

double distance(Distance kind, std::span<const double> y, double norm_y, std::span<const double> t, double norm_t) {
  if (kind == Distance::kCosine) return 1.0 - cosine(y, norm_y, t, norm_t);
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double diff = y[i] - t[i];
    acc += diff * diff;
  }
  return acc;
}

// grad += sign · ∂cos(y, t)/∂y
void add_cosine_grad(std::span<const double> y, double norm_y, std::span<const double> t, double norm_t,
                     double sign, std::span<double> grad) {
  if (norm_y == 0.0 || norm_t == 0.0) return;
  const double cos = kernels::dot(y, t) / (norm_y * norm_t);
  kernels::axpy(sign / (norm_y * norm_t), t, grad);
  kernels::axpy(-sign * cos / (norm_y * norm_y), y, grad);
}

std::vector<double> row_norms(const Matrix& m) {
  std::vector<double> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = std::sqrt(kernels::dot(m.row(i), m.row(i)));
  return out;
}

void check_negatives(const NegativeSets& negatives, std::size_t n) {
  if (negatives.size() != n) throw DataError("hinge_rank_loss: need one negative list per seed pair");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : negatives[i]) {
      if (j >= n || j == i) throw DataError("hinge_rank_loss: invalid negative index for pair " + std::to_string(i));
    }
  }
}

LinearMap fit_ranking(const SeedMatrices& seeds, const RankConfig& cfg, bool orthogonal) {
  validate(cfg);
  const std::size_t n = seeds.rows();
  const std::size_t d = seeds.xs.cols();
  const char* who = orthogonal ? "fit_or_ra" : "fit_rank";
  if (n < 2) throw DataError(std::string(who) + ": needs at least 2 seed pairs, got " + std::to_string(n));

  Matrix w = orthogonal ? fit_orthogonal(seeds).w : fit_mse(seeds).w;
  const std::vector<double> target_norms = row_norms(seeds.xt);

  // Fixed negatives for the reported trajectory; training draws fresh ones.
  const NegativeSets eval_negatives = sample_negatives(n, cfg.negatives, derive_seed(cfg.seed, 0));
  const double initial = hinge_rank_loss(w, seeds, eval_negatives, cfg);

  std::vector<double> history;
  history.reserve(cfg.epochs);
  std::vector<std::size_t> order(n);
  std::vector<double> y(d);
  std::vector<double> grad_y(d);
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const NegativeSets negatives = sample_negatives(n, cfg.negatives, derive_seed(cfg.seed, 2 * epoch - 1));
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(derive_seed(cfg.seed, 2 * epoch));
    shuffle_rng.shuffle(std::span<std::size_t>(order));

    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t stop = std::min(n, start + cfg.batch_size);
      Matrix grad(d, d);
      for (std::size_t b = start; b < stop; ++b) {
        const std::size_t i = order[b];
        const auto x = seeds.xs.row(i);
        for (std::size_t r = 0; r < d; ++r) y[r] = kernels::dot(w.row(r), x);
        const double norm_y = std::sqrt(kernels::dot(y, y));
        const auto t_pos = seeds.xt.row(i);
        const double d_pos = distance(cfg.distance, y, norm_y, t_pos, target_norms[i]);
        std::fill(grad_y.begin(), grad_y.end(), 0.0);
        bool active = false;
        for (std::size_t j : negatives[i]) {
          const auto t_neg = seeds.xt.row(j);
          const double d_neg = distance(cfg.distance, y, norm_y, t_neg, target_norms[j]);
          if (cfg.margin + d_pos - d_neg <= 0.0) continue;
          active = true;
          if (cfg.distance == Distance::kCosine) {
            add_cosine_grad(y, norm_y, t_pos, target_norms[i], -1.0, grad_y);
            add_cosine_grad(y, norm_y, t_neg, target_norms[j], 1.0, grad_y);
          } else {
            kernels::axpy(2.0, t_neg, grad_y);
            kernels::axpy(-2.0, t_pos, grad_y);
          }
        }
        if (!active) continue;
        for (std::size_t r = 0; r < d; ++r) kernels::axpy(grad_y[r], x, grad.row(r));
      }
      const double step = cfg.learning_rate / static_cast<double>(stop - start);
      kernels::axpy(-step, grad.values(), w.values());
    }
    if (orthogonal) w = nearest_orthogonal(w);

    const double loss = hinge_rank_loss(w, seeds, eval_negatives, cfg);
    if (!std::isfinite(loss) || !all_finite(w)) {
      throw NumericalError(std::string(who) + ": diverged at epoch " + std::to_string(epoch) +
                           " (non-finite loss)");
    }
    history.push_back(loss);
  }

  LinearMap map;
  map.method = orthogonal ? Method::kOrRa : Method::kRank;
  map.w = std::move(w);
  map.meta.seed_pairs = n;
  map.meta.normalization = seeds.normalization;
  map.meta.seed = cfg.seed;
  map.meta.initial_objective = initial;
  map.meta.final_objective = history.back();
  map.meta.loss_history = std::move(history);
  map.meta.hyperparameters = {{"margin", format_double(cfg.margin)},
                              {"negatives", std::to_string(cfg.negatives)},
                              {"epochs", std::to_string(cfg.epochs)},
                              {"learning_rate", format_double(cfg.learning_rate)},
                              {"batch_size", std::to_string(cfg.batch_size)},
                              {"distance", std::string(to_string(cfg.distance))}};
  return map;
}

}  // namespace

NegativeSets sample_negatives(std::size_t pairs, std::size_t per_pair, std::uint64_t seed) {
  NegativeSets out(pairs);
  if (pairs < 2) return out;
  Rng rng(seed);
  for (std::size_t i = 0; i < pairs; ++i) {
    out[i].reserve(per_pair);
    for (std::size_t k = 0; k < per_pair; ++k) {
      std::size_t j = rng.index(pairs - 1);
      if (j >= i) ++j;
      out[i].push_back(j);
    }
  }
  return out;
}

double hinge_rank_loss(const Matrix& w, const SeedMatrices& seeds, const NegativeSets& negatives,
                       const RankConfig& cfg) {
  const std::size_t n = seeds.rows();
  const std::size_t d = seeds.xs.cols();
  check_negatives(negatives, n);
  if (w.rows() != d || w.cols() != d) throw DataError("hinge_rank_loss: map dimension mismatch");
  const std::vector<double> target_norms = row_norms(seeds.xt);
  std::vector<double> y(d);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = seeds.xs.row(i);
    for (std::size_t r = 0; r < d; ++r) y[r] = kernels::dot(w.row(r), x);
    const double norm_y = std::sqrt(kernels::dot(y, y));
    const double d_pos = distance(cfg.distance, y, norm_y, seeds.xt.row(i), target_norms[i]);
    for (std::size_t j : negatives[i]) {
      const double d_neg = distance(cfg.distance, y, norm_y, seeds.xt.row(j), target_norms[j]);
      const double term = cfg.margin + d_pos - d_neg;
      // NaN must survive so divergence is visible to the caller.
      total += (term > 0.0 || std::isnan(term)) ? term : 0.0;
    }
  }
  return total;
}

LinearMap fit_rank(const SeedMatrices& seeds, const RankConfig& cfg) { return fit_ranking(seeds, cfg, false); }

LinearMap fit_or_ra(const SeedMatrices& seeds, const RankConfig& cfg) { return fit_ranking(seeds, cfg, true); }

}  // namespace xling
