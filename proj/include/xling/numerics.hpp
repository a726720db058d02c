#pragma once

#include <vector>

#include "xling/matrix.hpp"

namespace xling {

/// Thin singular value decomposition a = u · diag(singular_values) · vt.
///
/// For an m×n input with r = min(m, n): u is m×r with orthonormal columns,
/// vt is r×n with orthonormal rows, singular values descending. Each left
/// singular vector is signed so that its largest-magnitude entry is positive
/// (first such entry on ties), with the matching row of vt flipped alongside.
struct SvdResult {
  Matrix u;
  std::vector<double> singular_values;
  Matrix vt;
};

struct SvdOptions {
  int max_sweeps = 100;
  // A column pair is left alone once |<a_p, a_q>| <= tolerance · |a_p| · |a_q|.
  double tolerance = 1e-12;
};

/// One-sided (Hestenes) Jacobi SVD. Tall inputs are first reduced by a
/// Householder QR so the sweeps run on an r×r triangle.
/// Throws DataError on empty/non-finite input and NumericalError when the
/// sweep cap is reached.
SvdResult svd(const Matrix& a, const SvdOptions& options = {});

/// Moore–Penrose pseudo-inverse. Singular values below rcond · σ_max are
/// treated as zero.
Matrix pinv(const Matrix& a, double rcond = 1e-12);

/// Minimum-norm X minimizing ‖a·X − b‖_F, computed as pinv(a)·b.
Matrix solve_least_squares(const Matrix& a, const Matrix& b, double rcond = 1e-12);

/// Thin Householder QR of an m×n matrix with m ≥ n: q is m×n with
/// orthonormal columns, r is n×n upper triangular with non-negative diagonal.
struct QrResult {
  Matrix q;
  Matrix r;
};
QrResult qr_thin(const Matrix& a);

/// Nearest orthogonal matrix in Frobenius norm (u·vt from the SVD).
Matrix nearest_orthogonal(const Matrix& a);

/// Symmetric positive semi-definite power via SVD, for whitening; eigenvalues
/// below floor are clamped to floor before raising.
Matrix spd_power(const Matrix& a, double exponent, double floor);

}  // namespace xling
