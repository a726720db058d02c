#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>

#include "xling/errors.hpp"
#include "xling/kernels.hpp"
#include "xling/numerics.hpp"

namespace xling {
namespace {

double norm2(std::span<const double> x) { return std::sqrt(kernels::dot(x, x)); }

// Factors of a tall-or-square matrix: u is m×n, v is n×n (both as columns).
struct RawSvd {
  Matrix u;
  std::vector<double> sigma;
  Matrix v;
};

// Replaces the rows of `basis_rows` flagged in `missing` with unit vectors
// orthogonal to every other row, so the basis stays orthonormal even where the
// matrix has no range.
void complete_orthonormal_rows(Matrix& basis_rows, const std::vector<bool>& missing) {
  const std::size_t k = basis_rows.rows();
  const std::size_t dim = basis_rows.cols();
  std::vector<bool> filled(k);
  for (std::size_t i = 0; i < k; ++i) filled[i] = !missing[i];
  std::size_t candidate = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!missing[i]) continue;
    for (; candidate < dim; ++candidate) {
      std::vector<double> e(dim, 0.0);
      e[candidate] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < k; ++j) {
          if (!filled[j]) continue;
          kernels::axpy(-kernels::dot(basis_rows.row(j), e), basis_rows.row(j), e);
        }
      }
      const double n = norm2(e);
      if (n > 0.5) {
        for (std::size_t c = 0; c < dim; ++c) basis_rows(i, c) = e[c] / n;
        filled[i] = true;
        ++candidate;
        break;
      }
    }
  }
}

RawSvd jacobi_tall(const Matrix& a, const SvdOptions& options) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();

  Matrix q;
  Matrix work_t;  // row j holds column j of the matrix being orthogonalized
  if (m > n) {
    QrResult qr = qr_thin(a);
    q = std::move(qr.q);
    work_t = transpose(qr.r);
  } else {
    work_t = transpose(a);
  }
  Matrix v_t = Matrix::identity(n);

  int sweep = 0;
  bool rotated = true;
  double worst = 0.0;
  for (; rotated && sweep < options.max_sweeps; ++sweep) {
    rotated = false;
    worst = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) {
        auto bp = work_t.row(p);
        auto bq = work_t.row(r);
        const double alpha = kernels::dot(bp, bp);
        const double beta = kernels::dot(bq, bq);
        const double gamma = kernels::dot(bp, bq);
        const double scale = std::sqrt(alpha) * std::sqrt(beta);
        if (gamma == 0.0 || std::abs(gamma) <= options.tolerance * scale) continue;
        worst = std::max(worst, std::abs(gamma) / scale);
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        kernels::rotate(bp, bq, c, s);
        kernels::rotate(v_t.row(p), v_t.row(r), c, s);
      }
    }
  }
  if (rotated) {
    double smax = 0.0;
    double smin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      const double s = norm2(work_t.row(j));
      smax = std::max(smax, s);
      smin = std::min(smin, s);
    }
    std::ostringstream msg;
    msg << "svd: no convergence after " << options.max_sweeps << " sweeps on " << m << "x" << n
        << " input (max relative off-diagonal " << worst << ", sigma_max " << smax << ", sigma_min "
        << smin << ", condition " << (smin > 0 ? smax / smin : std::numeric_limits<double>::infinity())
        << ")";
    throw NumericalError(msg.str());
  }

  RawSvd out;
  out.sigma.resize(n);
  double smax = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out.sigma[j] = norm2(work_t.row(j));
    smax = std::max(smax, out.sigma[j]);
  }
  std::vector<bool> missing(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = out.sigma[j];
    if (s == 0.0 || s <= smax * 1e-200) {
      missing[j] = true;
      out.sigma[j] = 0.0;
      std::fill(work_t.row(j).begin(), work_t.row(j).end(), 0.0);
    } else {
      for (double& x : work_t.row(j)) x /= s;
    }
  }
  complete_orthonormal_rows(work_t, missing);
  out.u = q.empty() ? transpose(work_t) : matmul_nt(q, work_t);
  out.v = transpose(v_t);
  return out;
}

}  // namespace

QrResult qr_thin(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < n) throw DataError("qr_thin: needs rows >= cols");

  Matrix cols = transpose(a);  // row j = column j
  std::vector<std::vector<double>> reflectors(n);
  std::vector<double> reflector_norm2(n, 0.0);
  Matrix r(n, n);

  for (std::size_t k = 0; k < n; ++k) {
    auto x = cols.row(k).subspan(k);
    const double norm = norm2(x);
    if (norm == 0.0) continue;
    const double alpha = x[0] > 0 ? -norm : norm;
    std::vector<double> v(x.begin(), x.end());
    v[0] -= alpha;
    const double vv = kernels::dot(v, v);
    if (vv == 0.0) continue;
    for (std::size_t j = k; j < n; ++j) {
      auto cj = cols.row(j).subspan(k);
      kernels::axpy(-2.0 * kernels::dot(v, cj) / vv, v, cj);
    }
    reflectors[k] = std::move(v);
    reflector_norm2[k] = vv;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = k; j < n; ++j) r(k, j) = cols(j, k);

  Matrix q_t(n, m);  // row j = column j of Q
  for (std::size_t j = 0; j < n; ++j) {
    auto e = q_t.row(j);
    e[j] = 1.0;
    for (std::size_t kk = n; kk-- > 0;) {
      if (reflectors[kk].empty()) continue;
      auto tail = e.subspan(kk);
      kernels::axpy(-2.0 * kernels::dot(reflectors[kk], tail) / reflector_norm2[kk], reflectors[kk], tail);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (r(k, k) < 0.0) {
      for (std::size_t j = k; j < n; ++j) r(k, j) = -r(k, j);
      for (double& x : q_t.row(k)) x = -x;
    }
  }
  return {transpose(q_t), std::move(r)};
}

SvdResult svd(const Matrix& a, const SvdOptions& options) {
  if (a.empty()) throw DataError("svd: empty matrix");
  if (!all_finite(a)) throw DataError("svd: matrix has non-finite entries");

  const bool wide = a.rows() < a.cols();
  RawSvd raw = wide ? jacobi_tall(transpose(a), options) : jacobi_tall(a, options);
  // For the wide case a = (U S Vᵀ)ᵀ = V S Uᵀ.
  Matrix& left = wide ? raw.v : raw.u;
  Matrix& right = wide ? raw.u : raw.v;
  const std::size_t r = raw.sigma.size();

  std::vector<std::size_t> order(r);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return raw.sigma[i] > raw.sigma[j]; });

  SvdResult out;
  out.u = Matrix(left.rows(), r);
  out.vt = Matrix(r, right.rows());
  out.singular_values.resize(r);
  for (std::size_t k = 0; k < r; ++k) {
    const std::size_t src = order[k];
    out.singular_values[k] = raw.sigma[src];
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < left.rows(); ++i) {
      if (std::abs(left(i, src)) > best) {
        best = std::abs(left(i, src));
        arg = i;
      }
    }
    const double sign = left(arg, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < left.rows(); ++i) out.u(i, k) = sign * left(i, src);
    for (std::size_t i = 0; i < right.rows(); ++i) out.vt(k, i) = sign * right(i, src);
  }
  return out;
}

Matrix nearest_orthogonal(const Matrix& a) {
  const SvdResult s = svd(a);
  return matmul(s.u, s.vt);
}

Matrix spd_power(const Matrix& a, double exponent, double floor) {
  if (a.rows() != a.cols()) throw DataError("spd_power: matrix must be square");
  const SvdResult s = svd(a);
  // Symmetric input: left and right singular vectors coincide.
  Matrix scaled_t = transpose(s.u);
  for (std::size_t k = 0; k < scaled_t.rows(); ++k) {
    const double f = std::pow(std::max(s.singular_values[k], floor), exponent);
    for (double& x : scaled_t.row(k)) x *= f;
  }
  return matmul(s.u, scaled_t);
}

}  // namespace xling
