#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "xling/kernels.hpp"

namespace xling {
namespace {

using kernels::KernelTable;

std::vector<double> random_vector(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-2.0, 2.0);
  return v;
}

// Lengths around every vector-width boundary, plus some longer ones.
std::vector<std::size_t> lengths() {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n <= 33; ++n) out.push_back(n);
  for (std::size_t n : {63, 64, 65, 127, 300, 768, 1001}) out.push_back(n);
  return out;
}

TEST(Kernels, ScalarTableIsAlwaysFirst) {
  const auto tables = kernels::available_tables();
  ASSERT_FALSE(tables.empty());
  EXPECT_EQ(tables.front()->isa, kernels::Isa::kScalar);
  EXPECT_EQ(kernels::isa_name(kernels::Isa::kScalar), "scalar");
}

TEST(Kernels, ActiveTableIsOneOfTheAvailable) {
  const auto tables = kernels::available_tables();
  const KernelTable& a = kernels::active();
  bool found = false;
  for (const auto* t : tables) found = found || t->isa == a.isa;
  EXPECT_TRUE(found);
}

TEST(Kernels, ScalarDotMatchesHandSum) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{-1, 0.5, 2, 0, 3};
  EXPECT_EQ(kernels::scalar_table().dot(x.data(), y.data(), x.size()), -1 + 1 + 6 + 0 + 15);
}

TEST(Kernels, EveryVariantMatchesScalarDot) {
  Rng rng(11);
  const KernelTable& ref = kernels::scalar_table();
  for (const auto* t : kernels::available_tables()) {
    for (std::size_t n : lengths()) {
      const auto x = random_vector(n, rng);
      const auto y = random_vector(n, rng);
      double abs_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) abs_sum += std::abs(x[i] * y[i]);
      const double expect = ref.dot(x.data(), y.data(), n);
      const double got = t->dot(x.data(), y.data(), n);
      // Summation order differs between variants; bound by the condition of the sum.
      EXPECT_LE(std::abs(got - expect), 1e-14 * (abs_sum + 1.0))
          << kernels::isa_name(t->isa) << " n=" << n;
    }
  }
}

TEST(Kernels, EveryVariantMatchesScalarAxpy) {
  Rng rng(12);
  const KernelTable& ref = kernels::scalar_table();
  for (const auto* t : kernels::available_tables()) {
    for (std::size_t n : lengths()) {
      const auto x = random_vector(n, rng);
      const auto y0 = random_vector(n, rng);
      const double alpha = rng.uniform(-3.0, 3.0);
      auto y_ref = y0;
      auto y_got = y0;
      ref.axpy(alpha, x.data(), y_ref.data(), n);
      t->axpy(alpha, x.data(), y_got.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(y_got[i], y_ref[i], 1e-15 * (std::abs(alpha * x[i]) + std::abs(y0[i]) + 1.0))
            << kernels::isa_name(t->isa) << " n=" << n << " i=" << i;
      }
    }
  }
}

TEST(Kernels, EveryVariantMatchesScalarRotate) {
  Rng rng(13);
  const KernelTable& ref = kernels::scalar_table();
  for (const auto* t : kernels::available_tables()) {
    for (std::size_t n : lengths()) {
      const double angle = rng.uniform(-3.1, 3.1);
      const double c = std::cos(angle);
      const double s = std::sin(angle);
      auto x_ref = random_vector(n, rng);
      auto y_ref = random_vector(n, rng);
      auto x_got = x_ref;
      auto y_got = y_ref;
      ref.rotate(x_ref.data(), y_ref.data(), c, s, n);
      t->rotate(x_got.data(), y_got.data(), c, s, n);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(x_got[i], x_ref[i], 1e-14) << kernels::isa_name(t->isa) << " n=" << n;
        EXPECT_NEAR(y_got[i], y_ref[i], 1e-14) << kernels::isa_name(t->isa) << " n=" << n;
      }
    }
  }
}

TEST(Kernels, RotatePreservesPairNorms) {
  Rng rng(14);
  for (const auto* t : kernels::available_tables()) {
    auto x = random_vector(37, rng);
    auto y = random_vector(37, rng);
    const auto x0 = x;
    const auto y0 = y;
    t->rotate(x.data(), y.data(), std::cos(0.7), std::sin(0.7), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_NEAR(x[i] * x[i] + y[i] * y[i], x0[i] * x0[i] + y0[i] * y0[i], 1e-13);
    }
  }
}

TEST(Kernels, SpanWrappersUseActiveTable) {
  const std::vector<double> x{1, 2, 3};
  std::vector<double> y{1, 1, 1};
  EXPECT_EQ(kernels::dot(x, y), 6.0);
  kernels::axpy(2.0, x, y);
  EXPECT_EQ(y, (std::vector<double>{3, 5, 7}));
}

}  // namespace
}  // namespace xling
