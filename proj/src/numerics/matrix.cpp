#include "xling/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xling/errors.hpp"
#include "xling/kernels.hpp"

namespace xling {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  if (data_.size() != rows * cols) {
    throw DataError("matrix: " + std::to_string(data_.size()) + " values for " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DataError("matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw DataError("matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                    std::to_string(b.cols()) + " differ");
  }
  Matrix c(a.rows(), b.rows());
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i).data();
    for (std::size_t j = 0; j < b.rows(); ++j) c(i, j) = k.dot(ai, b.row(j).data(), a.cols());
  }
  return c;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DataError("matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                    std::to_string(b.rows()) + " differ");
  }
  return matmul_nt(a, transpose(b));
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw DataError("matmul: inner dimensions " + std::to_string(a.rows()) + " and " +
                    std::to_string(b.rows()) + " differ");
  }
  return matmul_nt(transpose(a), transpose(b));
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) {
    throw DataError("matvec: matrix has " + std::to_string(a.cols()) + " columns, vector has " +
                    std::to_string(x.size()) + " entries");
  }
  std::vector<double> y(a.rows());
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = k.dot(a.row(i).data(), x.data(), x.size());
  return y;
}

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DataError(std::string(op) + ": shape mismatch");
  }
}

}  // namespace

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "add");
  Matrix c = a;
  auto cv = c.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < cv.size(); ++i) cv[i] += bv[i];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "subtract");
  Matrix c = a;
  auto cv = c.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < cv.size(); ++i) cv[i] -= bv[i];
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  for (double& v : c.values()) v *= s;
  return c;
}

double frobenius_norm(const Matrix& a) {
  // Scaled accumulation so huge entries do not overflow.
  const double scale = max_abs(a);
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : a.values()) {
    const double t = v / scale;
    acc += t * t;
  }
  return scale * std::sqrt(acc);
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) m = std::max(m, std::abs(av[i] - bv[i]));
  return m;
}

bool all_finite(const Matrix& a) {
  return std::all_of(a.values().begin(), a.values().end(), [](double v) { return std::isfinite(v); });
}

double orthogonality_error(const Matrix& a) {
  return max_abs_diff(matmul_tn(a, a), Matrix::identity(a.cols()));
}

}  // namespace xling
