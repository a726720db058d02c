#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "xling/embeddings.hpp"
#include "xling/errors.hpp"
#include "xling/harness/synthetic.hpp"
#include "xling/textclf/checkpoint.hpp"
#include "xling/textclf/dataset.hpp"
#include "xling/textclf/mean_baseline.hpp"
#include "xling/textclf/tokenize.hpp"
#include "xling/textclf/training.hpp"

namespace xling {
namespace {

using Tokens = std::vector<std::string>;

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("Great movie!"), (Tokens{"great", "movie"}));
  EXPECT_EQ(tokenize("..."), Tokens{});
  EXPECT_EQ(tokenize("Co-star's début."), (Tokens{"co-star's", "début"}));
}

TEST(Tokenize, UnicodeCaseAndWhitespace) {
  EXPECT_EQ(tokenize("ŽLUŤOUČKÝ KŮŇ"), (Tokens{"žluťoučký", "kůň"}));
  EXPECT_EQ(tokenize("\t«Ahoj»,\n  (SVĚTE)  "), (Tokens{"ahoj", "světe"}));
  EXPECT_EQ(tokenize("ΑΒΓ Привет"), (Tokens{"αβγ", "привет"}));
  EXPECT_EQ(tokenize(""), Tokens{});
}

TEST(Tokenize, NoLengthLimit) {
  std::string text;
  for (int i = 0; i < 5000; ++i) text += "w ";
  EXPECT_EQ(tokenize(text).size(), 5000u);
}

TEST(Dataset, EmptyTextsAreExcludedAndCounted) {
  const LabeledDataset ds =
      make_dataset({{"good film", Label::kPositive}, {"?!", Label::kNegative}, {"bad", Label::kNegative}}, Split::kDev);
  EXPECT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.excluded_empty, 1u);
  EXPECT_EQ(ds.examples[1].tokens, Tokens{"bad"});
}

TEST(Dataset, FileRoundTripAndLineNumberedErrors) {
  test::TempDir dir("dataset");
  const LabeledDataset ds = make_dataset({{"Nice one", Label::kPositive}, {"awful", Label::kNegative}}, Split::kTrain);
  save_dataset(ds, dir.file("d.tsv"));
  const LabeledDataset back = load_dataset(dir.file("d.tsv"), Split::kTrain);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back.examples[0].text, "Nice one");
  EXPECT_EQ(back.examples[1].label, Label::kNegative);

  test::write_file(dir.file("bad.tsv"), "positive\tok\nPOSITIVE\tbad label\n");
  try {
    load_dataset(dir.file("bad.tsv"), Split::kTrain);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.tsv:2:"), std::string::npos) << e.what();
  }
  test::write_file(dir.file("notab.tsv"), "positive no tab\n");
  EXPECT_THROW(load_dataset(dir.file("notab.tsv"), Split::kTrain), DataError);
}

TEST(EmbedSequence, RowsOovAndTransform) {
  const EmbeddingSpace space({"a", "b"}, Matrix{{1, 2}, {3, 4}});
  const Matrix m = embed_sequence({"b", "zzz", "a"}, space);
  EXPECT_EQ(m, (Matrix{{3, 4}, {0, 0}, {1, 2}}));
  EXPECT_THROW(embed_sequence({}, space), DataError);
  LinearMap map;
  map.w = Matrix{{0, -1}, {1, 0}};
  const Matrix t = embed_sequence({"b", "a"}, apply_transform(space, map));
  EXPECT_EQ(t, (Matrix{{-4, 3}, {-2, 1}}));
}

CnnModel hand_model() {
  CnnModel m;
  m.dim = 1;
  m.dropout_rate = 0.5;
  m.banks.push_back({2, Matrix{{1, 1}}, {0.0}});
  m.dense_w = Matrix{{1.0}, {0.0}};
  m.dense_b = {0.0, 0.0};
  return m;
}

TEST(CnnForward, HandComputedWidthTwoFilter) {
  const CnnForward f = forward(hand_model(), Matrix{{1}, {2}, {3}}, false, 0);
  EXPECT_EQ(f.pooled, std::vector<double>{5.0});
  EXPECT_EQ(f.argmax, std::vector<std::size_t>{1});
  EXPECT_EQ(f.scores[0], 5.0);
  EXPECT_EQ(f.prediction, 0u);
}

TEST(CnnForward, ZeroModelPredictsPositive) {
  CnnConfig cfg;
  cfg.filters_per_width = 3;
  const CnnModel zero = CnnModel::initialize(5, cfg, 1).zeros_like();
  Rng rng(1);
  const CnnForward f = forward(zero, test::random_matrix(7, 5, rng), true, 3);
  EXPECT_EQ(f.scores, (std::array<double, 2>{0.0, 0.0}));
  EXPECT_EQ(f.prediction, 0u);
  EXPECT_NEAR(cross_entropy(f.scores, 1), std::log(2.0), 1e-15);
}

TEST(CnnForward, ShortInputsArePaddedAndEvalIsDeterministic) {
  CnnConfig cfg;
  cfg.filters_per_width = 4;
  const CnnModel m = CnnModel::initialize(3, cfg, 2);
  const Matrix one{{0.5, -1, 2}};
  const CnnForward a = forward(m, one, false, 1);
  const CnnForward b = forward(m, one, false, 99);
  EXPECT_EQ(a.scores, b.scores);
  EXPECT_EQ(a.pooled.size(), 12u);
  Matrix padded(4, 3);
  for (std::size_t c = 0; c < 3; ++c) padded(0, c) = one(0, c);
  // width-4 filters see exactly the padded input
  const CnnForward p = forward(m, padded, false, 1);
  for (std::size_t i = 8; i < 12; ++i) EXPECT_EQ(a.pooled[i], p.pooled[i]);
  EXPECT_THROW(forward(m, Matrix(2, 4), false, 0), DataError);
}

TEST(CnnGradients, MatchCentralDifferencesAtTwentyPoints) {
  for (std::uint64_t point = 0; point < 20; ++point) {
    const test::GradCheckResult r = test::cnn_gradient_check(1000 + point);
    EXPECT_LT(r.max_relative_error, 1e-4) << "point " << point;
    EXPECT_EQ(r.parameters_checked, 92u);
  }
}

TEST(CnnGradients, DroppedFeaturesGetNoDenseGradient) {
  CnnConfig cfg;
  cfg.filters_per_width = 8;
  const CnnModel m = CnnModel::initialize(4, cfg, 3);
  Rng rng(3);
  const Matrix input = test::random_matrix(6, 4, rng);
  const Matrix* batch[] = {&input};
  const Label labels[] = {Label::kNegative};
  const std::uint64_t seed = 5;
  const CnnLossGrad g = loss_and_grads(m, batch, labels, seed);
  const CnnForward f = forward(m, input, true, derive_seed(seed, 0));
  std::size_t dropped = 0;
  for (std::size_t j = 0; j < f.mask.size(); ++j) {
    if (f.mask[j] != 0.0) continue;
    ++dropped;
    EXPECT_EQ(g.grads.dense_w(0, j), 0.0);
    EXPECT_EQ(g.grads.dense_w(1, j), 0.0);
  }
  EXPECT_GT(dropped, 0u);
}

TEST(CnnDropout, TrainModeExpectationMatchesEval) {
  CnnConfig cfg;
  cfg.filters_per_width = 4;
  const CnnModel m = CnnModel::initialize(4, cfg, 4);
  Rng rng(4);
  const Matrix input = test::random_matrix(6, 4, rng);
  const CnnForward eval = forward(m, input, false, 0);
  std::vector<double> mean(eval.pooled.size(), 0.0);
  const int masks = 10000;
  for (int s = 0; s < masks; ++s) {
    const CnnForward t = forward(m, input, true, derive_seed(9, s));
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += t.features[j] / masks;
  }
  double eval_total = 0.0;
  double train_total = 0.0;
  for (std::size_t j = 0; j < mean.size(); ++j) {
    eval_total += eval.pooled[j];
    train_total += mean[j];
  }
  ASSERT_GT(eval_total, 0.0);
  EXPECT_LT(std::abs(train_total - eval_total) / eval_total, 0.02);
}

SynthPair separable_pair() {
  SynthConfig cfg;
  cfg.dim = 8;
  cfg.vocab_size = 100;
  cfg.n_examples = 40;
  cfg.noise_sigma = 0.0;
  return generate_synthetic_pair(cfg);
}

TEST(Train, SeparableSyntheticReachesPerfectDevAndKeepsEmbeddings) {
  const SynthPair p = separable_pair();
  const Matrix before = p.source.vectors();
  CnnConfig cnn;
  const auto result = train(CnnModel::initialize(8, cnn, 42), p.source_train, p.source_dev, p.source, TrainConfig{});
  EXPECT_EQ(p.source.vectors(), before);
  EXPECT_EQ(result.history.best_dev_accuracy, 1.0);
  EXPECT_LE(result.history.epochs.size(), 10u);
  EXPECT_EQ(evaluate(result.model, p.source_dev, p.source).accuracy, 1.0);
}

TEST(Train, SameSeedGivesIdenticalHistoryAndModel) {
  const SynthPair p = separable_pair();
  const Matrix before = p.source.vectors();
  CnnConfig cnn;
  cnn.filters_per_width = 16;
  TrainConfig cfg;
  cfg.max_epochs = 3;
  cfg.schedule = LrSchedule::kLinearDecay;
  const auto a = train(CnnModel::initialize(8, cnn, 1), p.source_train, p.source_dev, p.source, cfg);
  const auto b = train(CnnModel::initialize(8, cnn, 1), p.source_train, p.source_dev, p.source, cfg);
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.history.epochs.size(), 3u);
  EXPECT_EQ(p.source.vectors(), before);
}

TEST(Train, BestEpochIsLatestMaximum) {
  const SynthPair p = separable_pair();
  const Matrix before = p.source.vectors();
  CnnConfig cnn;
  cnn.filters_per_width = 16;
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  const auto r = train(CnnModel::initialize(8, cnn, 2), p.source_train, p.source_dev, p.source, cfg);
  std::size_t expected = 0;
  double best = -1.0;
  for (const EpochStats& e : r.history.epochs) {
    if (e.dev_accuracy >= best) {
      best = e.dev_accuracy;
      expected = e.epoch;
    }
  }
  EXPECT_EQ(r.history.best_epoch, expected);
  EXPECT_EQ(r.history.best_dev_accuracy, best);
  EXPECT_EQ(evaluate(r.model, p.source_dev, p.source).accuracy, best);
  EXPECT_EQ(p.source.vectors(), before);
}

TEST(Train, Errors) {
  const SynthPair p = separable_pair();
  CnnConfig cnn;
  cnn.filters_per_width = 2;
  EXPECT_THROW(train(CnnModel::initialize(5, cnn, 1), p.source_train, p.source_dev, p.source, TrainConfig{}),
               DataError);
  EXPECT_THROW(train(CnnModel::initialize(8, cnn, 1), LabeledDataset{}, p.source_dev, p.source, TrainConfig{}),
               DataError);
  TrainConfig bad;
  bad.batch_size = 0;
  EXPECT_THROW(validate(bad), UsageError);
  bad = {};
  bad.learning_rate = -1;
  EXPECT_THROW(validate(bad), UsageError);
}

TEST(MeanBaseline, SeparableSyntheticAndDeterminism) {
  const SynthPair p = separable_pair();
  const Matrix before = p.source.vectors();
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  const auto a = fit_mean_baseline(p.source_train, p.source_dev, p.source, cfg);
  const auto b = fit_mean_baseline(p.source_train, p.source_dev, p.source, cfg);
  EXPECT_EQ(a.history.best_dev_accuracy, 1.0);
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(p.source.vectors(), before);
}

TEST(MeanBaseline, AllOovTextsAreSkipped) {
  const EmbeddingSpace space({"good", "bad"}, Matrix{{1, 0}, {-1, 0}});
  const Matrix before = space.vectors();
  const LabeledDataset train_set = make_dataset(
      {{"good", Label::kPositive}, {"bad", Label::kNegative}, {"unknown words", Label::kPositive}}, Split::kTrain);
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  const auto r = fit_mean_baseline(train_set, train_set, space, cfg);
  EXPECT_EQ(r.history.skipped_examples, 1u);
  EXPECT_EQ(space.vectors(), before);
}

TEST(Evaluate, AllPositiveOnBalancedSet) {
  std::array<std::array<std::size_t, 2>, 2> confusion{};
  confusion[0][0] = 50;
  confusion[1][0] = 50;
  const EvalReport r = report_from_confusion(confusion);
  EXPECT_EQ(r.accuracy, 0.5);
  EXPECT_NEAR(r.macro_f1, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(r.count, 100u);
}

TEST(Evaluate, PerfectAndCountsSumToDataset) {
  std::array<std::array<std::size_t, 2>, 2> perfect{};
  perfect[0][0] = 3;
  perfect[1][1] = 4;
  EXPECT_EQ(report_from_confusion(perfect).macro_f1, 1.0);

  // zero model predicts positive everywhere
  const SynthPair p = separable_pair();
  CnnConfig cnn;
  cnn.filters_per_width = 2;
  const Classifier zero = CnnModel::initialize(8, cnn, 1).zeros_like();
  const EvalReport r = evaluate(zero, p.target_test, p.target);
  EXPECT_EQ(r.count, p.target_test.size());
  EXPECT_EQ(r.confusion[0][0] + r.confusion[1][0], r.count);
  EXPECT_EQ(r.confusion[0][1] + r.confusion[1][1], 0u);
  EXPECT_THROW(evaluate(zero, LabeledDataset{}, p.target), DataError);
}

TEST(Checkpoint, RoundTripsBothClassifiers) {
  const SynthPair p = separable_pair();
  TrainConfig cfg;
  cfg.max_epochs = 2;
  cfg.learning_rate = 0.01;
  cfg.schedule = LrSchedule::kLinearDecay;
  CnnConfig cnn;
  cnn.filters_per_width = 3;
  cnn.widths = {1, 3};
  cnn.dropout = 0.25;
  const Checkpoint a{train(CnnModel::initialize(8, cnn, 5), p.source_train, p.source_dev, p.source, cfg).model, cfg,
                     Normalization::kUnit};
  const Checkpoint a_back = parse_checkpoint(serialize_checkpoint(a));
  EXPECT_EQ(a_back, a);
  EXPECT_EQ(serialize_checkpoint(a_back), serialize_checkpoint(a));

  const Checkpoint b{fit_mean_baseline(p.source_train, p.source_dev, p.source, cfg).model, cfg,
                     Normalization::kCenterUnit};
  test::TempDir dir("ckpt");
  save_checkpoint(b, dir.file("m.ckpt"));
  EXPECT_EQ(load_checkpoint(dir.file("m.ckpt")), b);
}

TEST(Checkpoint, MalformedInputsNameTheLine) {
  EXPECT_THROW(parse_checkpoint("not a checkpoint\n"), DataError);
  try {
    parse_checkpoint("xling-checkpoint 1\nkind=mean_baseline\ndim=two\n", "c.txt");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("c.txt:3:"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace xling
