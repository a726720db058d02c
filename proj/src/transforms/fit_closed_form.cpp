#include "xling/errors.hpp"
#include "xling/kernels.hpp"
#include "xling/numerics.hpp"
#include "xling/text_format.hpp"
#include "xling/transforms.hpp"

namespace xling {

namespace {

void require_seeds(const SeedMatrices& seeds, std::size_t min_rows, const char* who) {
  if (seeds.rows() < min_rows) {
    throw DataError(std::string(who) + ": needs at least " + std::to_string(min_rows) + " seed pairs, got " +
                    std::to_string(seeds.rows()));
  }
  if (seeds.xs.cols() != seeds.xt.cols()) throw DataError(std::string(who) + ": seed dimensions differ");
  if (max_abs(seeds.xs) == 0.0) throw NumericalError(std::string(who) + ": degenerate seeds (all-zero source vectors)");
}

FitMeta base_meta(const SeedMatrices& seeds) {
  FitMeta meta;
  meta.seed_pairs = seeds.rows();
  meta.normalization = seeds.normalization;
  return meta;
}

}  // namespace

double mse_objective(const Matrix& w, const SeedMatrices& seeds) {
  const Matrix residual = matmul_nt(seeds.xs, w) - seeds.xt;
  double acc = 0.0;
  for (double v : residual.values()) acc += v * v;
  return acc;
}

LinearMap fit_mse(const SeedMatrices& seeds) {
  require_seeds(seeds, 1, "fit_mse");
  // xs·Wᵀ ≈ xt row-wise, so Wᵀ is the least-squares solution.
  LinearMap map;
  map.method = Method::kMse;
  map.w = transpose(solve_least_squares(seeds.xs, seeds.xt));
  map.meta = base_meta(seeds);
  map.meta.final_objective = mse_objective(map.w, seeds);
  return map;
}

LinearMap fit_orthogonal(const SeedMatrices& seeds) {
  require_seeds(seeds, 1, "fit_orthogonal");
  // xtᵀ·xs = U Σ Vᵀ; maximizing trace(Wᵀ xtᵀ xs) over orthogonal W gives W = U·Vᵀ.
  const SvdResult s = svd(matmul_tn(seeds.xt, seeds.xs));
  LinearMap map;
  map.method = Method::kOrto;
  map.w = matmul(s.u, s.vt);
  map.meta = base_meta(seeds);
  map.meta.final_objective = mse_objective(map.w, seeds);
  return map;
}

LinearMap fit(const SeedMatrices& seeds, const FitOptions& options) {
  switch (options.method) {
    case Method::kMse: return fit_mse(seeds);
    case Method::kOrto: return fit_orthogonal(seeds);
    case Method::kCca: return fit_cca(seeds, options.cca_ridge).map;
    case Method::kRank: return fit_rank(seeds, options.rank);
    case Method::kOrRa: return fit_or_ra(seeds, options.rank);
  }
  throw UsageError("unknown method");
}

}  // namespace xling
