#include <string>

#include "xling/errors.hpp"
#include "xling/numerics.hpp"

namespace xling {

Matrix pinv(const Matrix& a, double rcond) {
  const SvdResult s = svd(a);
  const std::size_t r = s.singular_values.size();
  const double cutoff = rcond * s.singular_values.front();
  // rows of v·Σ⁺ stored transposed: row k = v_k / σ_k
  Matrix scaled = s.vt;
  for (std::size_t k = 0; k < r; ++k) {
    const double sigma = s.singular_values[k];
    const double inv = (sigma > 0.0 && sigma >= cutoff) ? 1.0 / sigma : 0.0;
    for (double& x : scaled.row(k)) x *= inv;
  }
  return matmul_nt(transpose(scaled), s.u);
}

Matrix solve_least_squares(const Matrix& a, const Matrix& b, double rcond) {
  if (a.rows() == 0) throw DataError("solve_least_squares: no equations");
  if (a.rows() != b.rows()) {
    throw DataError("solve_least_squares: dimension mismatch (" + std::to_string(a.rows()) +
                    " rows vs " + std::to_string(b.rows()) + ")");
  }
  return matmul(pinv(a, rcond), b);
}

}  // namespace xling
