#pragma once

// Data-parallel inner loops shared by the SVD, the retrieval scorer and the
// convolutional classifier. Each kernel has a scalar reference version and
// optional AVX2/NEON variants; the variant is picked once at runtime.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace xling::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // (x[i], y[i]) <- (c*x[i] - s*y[i], s*x[i] + c*y[i])
  void (*rotate)(double* x, double* y, double c, double s, std::size_t n);
};

// Reference implementation; always available.
const KernelTable& scalar_table();

// Every variant compiled in and supported by the running CPU, scalar first.
std::vector<const KernelTable*> available_tables();

// The active table. Chosen on first use: the widest supported ISA, unless the
// XLING_KERNELS environment variable names another available one
// ("scalar", "avx2", "neon").
const KernelTable& active();

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void rotate(std::span<double> x, std::span<double> y, double c, double s) {
  active().rotate(x.data(), y.data(), c, s, x.size());
}

}  // namespace xling::kernels
