#include <cmath>
#include <sstream>

#include "xling/errors.hpp"
#include "xling/numerics.hpp"
#include "xling/text_format.hpp"
#include "xling/transforms.hpp"

namespace xling {

namespace {

Matrix centered(const Matrix& x) {
  Matrix out = x;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) mean += x(i, j);
    mean /= static_cast<double>(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out(i, j) -= mean;
  }
  return out;
}

double trace(const Matrix& a) {
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

// (C + ridge·I)^(-1/2), failing when the regularized covariance is singular.
Matrix inverse_sqrt(Matrix c, double ridge, const char* side) {
  for (std::size_t i = 0; i < c.rows(); ++i) c(i, i) += ridge;
  const SvdResult s = svd(c);
  const double smax = s.singular_values.front();
  const double smin = s.singular_values.back();
  if (!(smin > smax * 1e-14) || smax == 0.0) {
    std::ostringstream msg;
    msg << "fit_cca: " << side << " covariance is singular (largest eigenvalue " << smax << ", smallest " << smin
        << ", ridge " << ridge << "); use a positive ridge";
    throw NumericalError(msg.str());
  }
  return spd_power(c, -0.5, 0.0);
}

}  // namespace

CcaFit fit_cca(const SeedMatrices& seeds, std::optional<double> ridge) {
  const std::size_t n = seeds.rows();
  const std::size_t d = seeds.xs.cols();
  if (n < 2) throw DataError("fit_cca: needs at least 2 seed pairs, got " + std::to_string(n));
  if (seeds.xt.cols() != d) throw DataError("fit_cca: seed dimensions differ");
  if (ridge && *ridge <= 0.0 && n <= d) {
    throw NumericalError("fit_cca: " + std::to_string(n) + " seed pairs in dimension " + std::to_string(d) +
                         " give a singular covariance without a ridge; pass a positive ridge");
  }

  const Matrix xs = centered(seeds.xs);
  const Matrix xt = centered(seeds.xt);
  const double scale = 1.0 / static_cast<double>(n - 1);
  const Matrix c_ss = scale * matmul_tn(xs, xs);
  const Matrix c_tt = scale * matmul_tn(xt, xt);
  const Matrix c_st = scale * matmul_tn(xs, xt);

  const double ridge_s = ridge ? std::max(*ridge, 0.0) : 1e-8 * trace(c_ss) / static_cast<double>(d);
  const double ridge_t = ridge ? std::max(*ridge, 0.0) : 1e-8 * trace(c_tt) / static_cast<double>(d);
  const Matrix whiten_s = inverse_sqrt(c_ss, ridge_s, "source");
  const Matrix whiten_t = inverse_sqrt(c_tt, ridge_t, "target");

  const SvdResult s = svd(matmul(matmul(whiten_s, c_st), whiten_t));

  CcaFit out;
  out.factors.w_s_o = matmul(transpose(s.u), whiten_s);
  out.factors.w_t_o = matmul(s.vt, whiten_t);
  out.factors.correlations = s.singular_values;

  // A target vector reaches the shared space as W_t_o·x, so the source->target
  // map is W_t_o⁺·W_s_o.
  out.map.method = Method::kCca;
  out.map.w = matmul(pinv(out.factors.w_t_o), out.factors.w_s_o);
  out.map.meta.seed_pairs = n;
  out.map.meta.normalization = seeds.normalization;
  out.map.meta.final_objective = mse_objective(out.map.w, seeds);
  out.map.meta.hyperparameters = {{"ridge_source", format_double(ridge_s)},
                                  {"ridge_target", format_double(ridge_t)},
                                  {"centered", "1"}};
  return out;
}

}  // namespace xling
