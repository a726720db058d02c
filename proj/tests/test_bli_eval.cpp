#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "test_support.hpp"
#include "xling/bli_eval.hpp"
#include "xling/errors.hpp"

namespace xling {
namespace {

using test::make_space;
using test::random_matrix;

LinearMap identity_map(std::size_t d) {
  LinearMap m;
  m.w = Matrix::identity(d);
  return m;
}

TEST(TopK, TiesGoToLowerIndex) {
  const EmbeddingSpace space = make_space(Matrix{{1, 0}, {2, 0}, {0, 1}, {3, 0}}, "t");
  const CosineIndex index(space);
  const std::vector<double> q{1, 0};
  EXPECT_EQ(index.top_k(q, 3), (std::vector<std::size_t>{0, 1, 3}));
}

TEST(TopK, ClampsAndFlagsOversizedK) {
  const EmbeddingSpace space = make_space(Matrix{{1, 0}, {0, 1}}, "t");
  const NeighborList n = nearest_neighbors(std::vector<double>{0, 1}, space, 5);
  EXPECT_TRUE(n.clamped);
  EXPECT_EQ(n.words, (std::vector<std::string>{"t1", "t0"}));
  EXPECT_NEAR(n.scores[0], 1.0, 1e-15);
  EXPECT_FALSE(nearest_neighbors(std::vector<double>{0, 1}, space, 2).clamped);
}

TEST(TopK, ZeroRowsRankLast) {
  const EmbeddingSpace space = make_space(Matrix{{0, 0}, {-1, 0.1}}, "t");
  std::vector<double> scores;
  EXPECT_EQ(CosineIndex(space).top_k(std::vector<double>{1, 0}, 2, &scores), (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(scores[1], -1.0);
}

TEST(TopK, RejectsBadQueries) {
  const EmbeddingSpace space = make_space(Matrix{{1, 0}}, "t");
  EXPECT_THROW(CosineIndex(space).top_k(std::vector<double>{1, 0, 0}, 1), DataError);
  EXPECT_THROW(CosineIndex(space).top_k(std::vector<double>{1, 0}, 0), UsageError);
}

TEST(TopK, MatchesBruteForceSort) {
  Rng rng(1);
  const EmbeddingSpace space = make_space(random_matrix(200, 6, rng), "t");
  const CosineIndex index(space);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix q = random_matrix(1, 6, rng);
    std::vector<double> sims(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
      double dot = 0, nq = 0, nr = 0;
      for (std::size_t c = 0; c < 6; ++c) {
        dot += q(0, c) * space.row(i)[c];
        nq += q(0, c) * q(0, c);
        nr += space.row(i)[c] * space.row(i)[c];
      }
      sims[i] = dot / std::sqrt(nq * nr);
    }
    std::vector<std::size_t> order(space.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return sims[a] > sims[b]; });
    order.resize(10);
    EXPECT_EQ(index.top_k(q.row(0), 10), order);
  }
}

TEST(PrecisionAtK, IdentityOnSharedSpaceIsPerfect) {
  Rng rng(2);
  const Matrix v = random_matrix(30, 5, rng);
  const EmbeddingSpace src = make_space(v, "w");
  const EmbeddingSpace tgt = make_space(v, "w");
  BilingualDictionary dict;
  for (std::size_t i = 0; i < 30; ++i) dict.pairs.push_back({"w" + std::to_string(i), "w" + std::to_string(i)});
  const BliReport r = precision_at_k(identity_map(5), dict, src, tgt, {10, 1, 5});
  EXPECT_EQ(r.precision_at.at(1), 1.0);
  EXPECT_EQ(r.precision_at.at(5), 1.0);
  EXPECT_EQ(r.precision_at.at(10), 1.0);
  EXPECT_EQ(r.evaluated_pairs, 30u);
  EXPECT_EQ(format_report(r).substr(0, 11), "p@1=1.00000");
}

TEST(PrecisionAtK, HandCountedHitsAndSkips) {
  // s0 -> t1 is the nearest (wrong) and t0 second; s1 -> t1 correct.
  const EmbeddingSpace src = make_space(Matrix{{1, 0.2}, {0, 1}}, "s");
  const EmbeddingSpace tgt = make_space(Matrix{{1, -0.5}, {1, 0.5}, {-1, 0}}, "t");
  BilingualDictionary dict{{{"s0", "t0"}, {"s1", "t1"}, {"s9", "t0"}, {"s0", "t7"}}};
  const BliReport r = precision_at_k(identity_map(2), dict, src, tgt, {1, 2});
  EXPECT_EQ(r.evaluated_pairs, 2u);
  EXPECT_EQ(r.skipped_oov, 2u);
  EXPECT_DOUBLE_EQ(r.precision_at.at(1), 0.5);
  EXPECT_DOUBLE_EQ(r.precision_at.at(2), 1.0);
}

TEST(PrecisionAtK, AnyListedTranslationCounts) {
  const EmbeddingSpace src = make_space(Matrix{{1, 0}}, "s");
  const EmbeddingSpace tgt = make_space(Matrix{{0, 1}, {1, 0}}, "t");
  // the pair (s0,t0) is a hit because t1, also listed for s0, is nearest
  BilingualDictionary dict{{{"s0", "t0"}, {"s0", "t1"}}};
  EXPECT_EQ(precision_at_k(identity_map(2), dict, src, tgt, {1}).precision_at.at(1), 1.0);
}

TEST(PrecisionAtK, MonotoneInKAndIndependentOfOrder) {
  Rng rng(3);
  const EmbeddingSpace src = make_space(random_matrix(60, 6, rng), "s");
  const EmbeddingSpace tgt = make_space(random_matrix(60, 6, rng), "t");
  BilingualDictionary dict;
  for (std::size_t i = 0; i < 60; ++i) dict.pairs.push_back({"s" + std::to_string(i), "t" + std::to_string(i)});
  LinearMap m;
  m.w = test::random_orthogonal(6, rng);
  const BliReport a = precision_at_k(m, dict, src, tgt, {1, 5, 10, 60});
  const BliReport b = precision_at_k(m, dict, src, tgt, {60, 10, 5, 1, 5});
  EXPECT_EQ(a.precision_at, b.precision_at);
  EXPECT_LE(a.precision_at.at(1), a.precision_at.at(5));
  EXPECT_LE(a.precision_at.at(5), a.precision_at.at(10));
  EXPECT_EQ(a.precision_at.at(60), 1.0);
}

TEST(PrecisionAtK, Errors) {
  const EmbeddingSpace src = make_space(Matrix{{1, 0}}, "s");
  const EmbeddingSpace tgt = make_space(Matrix{{1, 0}}, "t");
  BilingualDictionary none{{{"x", "y"}}};
  EXPECT_THROW(precision_at_k(identity_map(2), none, src, tgt, {1}), DataError);
  BilingualDictionary ok{{{"s0", "t0"}}};
  EXPECT_THROW(precision_at_k(identity_map(3), ok, src, tgt, {1}), DataError);
  EXPECT_THROW(precision_at_k(identity_map(2), ok, src, tgt, {}), UsageError);
  EXPECT_THROW(precision_at_k(identity_map(2), ok, src, tgt, {0}), UsageError);
}

TEST(Skewness, HandValues) {
  EXPECT_NEAR(standardized_skewness(std::vector<double>{0, 0, 0, 3}), 2.0 / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(standardized_skewness(std::vector<double>{1, 2, 3, 4, 5}), 0.0, 1e-12);
  EXPECT_EQ(standardized_skewness(std::vector<double>{2, 2, 2}), 0.0);
  EXPECT_EQ(standardized_skewness(std::vector<double>{}), 0.0);
}

TEST(Hubness, CollapsingMapCreatesAHub) {
  Rng rng(4);
  const EmbeddingSpace src = make_space(random_matrix(100, 4, rng), "s");
  const EmbeddingSpace tgt = make_space(random_matrix(100, 4, rng), "t");
  LinearMap collapse;
  collapse.w = Matrix(4, 4);
  for (std::size_t c = 0; c < 4; ++c) collapse.w(0, c) = 1.0;
  LinearMap rot;
  rot.w = test::random_orthogonal(4, rng);
  const double hub = hubness_skew(collapse, src, tgt, 1, 100, 1);
  const double spread = hubness_skew(rot, src, tgt, 1, 100, 1);
  EXPECT_GT(hub, spread);
  EXPECT_GT(hub, 3.0);
  EXPECT_EQ(hubness_skew(rot, src, tgt, 5, 50, 9), hubness_skew(rot, src, tgt, 5, 50, 9));
}

TEST(Hubness, Errors) {
  const EmbeddingSpace src = make_space(Matrix{{1, 0}}, "s");
  const EmbeddingSpace tgt = make_space(Matrix{{1, 0}}, "t");
  EXPECT_THROW(hubness_skew(identity_map(2), src, tgt, 1, 2, 1), UsageError);
  EXPECT_THROW(hubness_skew(identity_map(2), src, tgt, 1, 0, 1), UsageError);
  LinearMap zero;
  zero.w = Matrix(2, 2);
  EXPECT_THROW(hubness_skew(zero, src, tgt, 1, 1, 1), DataError);
}

TEST(FormatReport, LinesInKOrder) {
  BliReport r;
  r.precision_at = {{10, 0.75}, {1, 0.5}};
  r.evaluated_pairs = 4;
  r.skipped_oov = 1;
  r.hubness_skew = 1.25;
  EXPECT_EQ(format_report(r),
            "p@1=0.500000\np@10=0.750000\nevaluated_pairs=4\nskipped_oov=1\nhubness_skew=1.250000\n");
}

}  // namespace
}  // namespace xling
