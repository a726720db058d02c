#include <cmath>
#include <tuple>
#include <ostream>

#include "xling/embeddings.hpp"
#include "xling/errors.hpp"
#include "xling/harness/experiment.hpp"
#include "xling/rng.hpp"
#include "xling/text_format.hpp"

namespace xling {

namespace {

template <typename F>
auto staged(const std::string& stage, F&& f) -> decltype(f()) {
  const std::string tag = "[" + stage + "] ";
  try {
    return f();
  } catch (const UsageError& e) {
    throw UsageError(tag + e.what());
  } catch (const DataError& e) {
    throw DataError(tag + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(tag + e.what());
  }
}

struct Trained {
  Classifier model;
  std::size_t best_epoch = 0;
};

void log_history(std::ostream* log, std::size_t repeat, const TrainHistory& history) {
  if (!log) return;
  for (const auto& e : history.epochs) {
    *log << "repeat=" << repeat << " epoch=" << e.epoch << " train_loss=" << format_fixed(e.train_loss, 6)
         << " dev_accuracy=" << format_fixed(e.dev_accuracy, 6) << "\n";
  }
}

Trained train_classifier(const ExperimentSpec& spec, std::uint64_t seed, const LabeledDataset& train_set,
                         const LabeledDataset& dev_set, const EmbeddingSpace& space, std::size_t repeat,
                         std::ostream* log) {
  TrainConfig cfg = spec.train;
  cfg.seed = seed;
  if (spec.classifier == ClassifierKind::kCnn) {
    auto result = train(CnnModel::initialize(space.dim(), spec.cnn, derive_seed(seed, 0xC0FFEE)), train_set,
                        dev_set, space, cfg);
    log_history(log, repeat, result.history);
    return {std::move(result.model), result.history.best_epoch};
  }
  auto result = fit_mean_baseline(train_set, dev_set, space, cfg);
  log_history(log, repeat, result.history);
  return {std::move(result.model), result.history.best_epoch};
}

void aggregate(ExperimentResult& result) {
  std::vector<double> acc;
  std::vector<double> f1;
  for (const auto& r : result.repeats) {
    acc.push_back(r.accuracy);
    f1.push_back(r.macro_f1);
  }
  std::tie(result.mean_accuracy, result.ci_accuracy) = mean_and_ci(acc);
  std::tie(result.mean_macro_f1, result.ci_macro_f1) = mean_and_ci(f1);
}

}  // namespace

std::pair<double, std::optional<double>> mean_and_ci(const std::vector<double>& values) {
  if (values.empty()) return {0.0, std::nullopt};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  const double mean = sum / n;
  if (values.size() < 2) return {mean, std::nullopt};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

ExperimentResult run_crosslingual(const ExperimentSpec& spec, const CrosslingualInputs& inputs, std::ostream* log) {
  if (spec.mode != ExperimentMode::kCrosslingual) throw UsageError("run_crosslingual: spec is not crosslingual");
  staged("spec", [&] { validate_settings(spec); });
  ExperimentResult result;
  result.spec = spec;

  const EmbeddingSpace src = staged("normalize", [&] { return normalize(inputs.source, spec.normalization); });
  const EmbeddingSpace tgt = staged("normalize", [&] { return normalize(inputs.target, spec.normalization); });
  SeedMatrices seeds =
      staged("seeds", [&] { return build_seed_matrices(inputs.dictionary, src, tgt, spec.max_pairs); });
  if (spec.direction == Direction::kTargetToSource) seeds = swap_sides(seeds);
  result.seed_pairs = seeds.rows();
  result.skipped_oov = seeds.skipped_oov;

  FitOptions options{spec.method, spec.rank, spec.cca_ridge};
  const bool refit = spec.method == Method::kRank || spec.method == Method::kOrRa;
  // Closed-form maps do not depend on the repeat seed.
  std::optional<EmbeddingSpace> fixed_space;
  if (!refit) {
    const LinearMap map = staged("align", [&] { return fit(seeds, options); });
    fixed_space = staged("transform", [&] {
      return apply_transform(spec.direction == Direction::kSourceToTarget ? src : tgt, map);
    });
  }

  for (std::size_t r = 0; r < spec.repeats; ++r) {
    const std::uint64_t seed = derive_seed(spec.train.seed, r);
    std::optional<EmbeddingSpace> repeat_space;
    if (refit) {
      FitOptions o = options;
      o.rank.seed = derive_seed(spec.rank.seed, r);
      const LinearMap map = staged("align", [&] { return fit(seeds, o); });
      repeat_space = staged("transform", [&] {
        return apply_transform(spec.direction == Direction::kSourceToTarget ? src : tgt, map);
      });
    }
    const EmbeddingSpace& mapped = refit ? *repeat_space : *fixed_space;
    const bool s2t = spec.direction == Direction::kSourceToTarget;
    const EmbeddingSpace& train_space = s2t ? mapped : src;
    const EmbeddingSpace& eval_space = s2t ? tgt : mapped;

    const Trained trained = staged("train", [&] {
      return train_classifier(spec, seed, inputs.source_train, inputs.source_dev, train_space, r, log);
    });
    const EvalReport report = staged("evaluate", [&] { return evaluate(trained.model, inputs.target_test, eval_space); });
    result.repeats.push_back({seed, report.accuracy, report.macro_f1, trained.best_epoch});
  }
  aggregate(result);
  return result;
}

ExperimentResult run_monolingual(const ExperimentSpec& spec, const MonolingualInputs& inputs, std::ostream* log) {
  if (spec.mode != ExperimentMode::kMonolingual) throw UsageError("run_monolingual: spec is not monolingual");
  staged("spec", [&] { validate_settings(spec); });
  ExperimentResult result;
  result.spec = spec;
  const EmbeddingSpace space = staged("normalize", [&] { return normalize(inputs.space, spec.normalization); });
  for (std::size_t r = 0; r < spec.repeats; ++r) {
    const std::uint64_t seed = derive_seed(spec.train.seed, r);
    const Trained trained =
        staged("train", [&] { return train_classifier(spec, seed, inputs.train, inputs.dev, space, r, log); });
    const EvalReport report = staged("evaluate", [&] { return evaluate(trained.model, inputs.test, space); });
    result.repeats.push_back({seed, report.accuracy, report.macro_f1, trained.best_epoch});
  }
  aggregate(result);
  return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, std::ostream* log) {
  staged("spec", [&] { validate(spec); });
  if (spec.mode == ExperimentMode::kMonolingual) {
    MonolingualInputs in = staged("load", [&] {
      return MonolingualInputs{load_vec(spec.source_embeddings, spec.source_lang),
                               load_dataset(spec.source_train, Split::kTrain),
                               load_dataset(spec.source_dev, Split::kDev),
                               load_dataset(spec.source_test, Split::kTest)};
    });
    return run_monolingual(spec, in, log);
  }
  CrosslingualInputs in = staged("load", [&] {
    return CrosslingualInputs{load_vec(spec.source_embeddings, spec.source_lang),
                              load_vec(spec.target_embeddings, spec.target_lang),
                              load_dict(spec.dictionary),
                              load_dataset(spec.source_train, Split::kTrain),
                              load_dataset(spec.source_dev, Split::kDev),
                              load_dataset(spec.target_test, Split::kTest)};
  });
  return run_crosslingual(spec, in, log);
}

std::string format_result_block(const ExperimentResult& result) {
  std::string out;
  const auto line = [&](const std::string& k, const std::string& v) { out += k + "=" + v + "\n"; };
  const bool cross = result.spec.mode == ExperimentMode::kCrosslingual;
  line("mode", std::string(to_string(result.spec.mode)));
  if (cross) {
    line("setting", setting_label(result.spec));
    line("direction", std::string(to_string(result.spec.direction)));
    line("method", std::string(to_string(result.spec.method)));
    line("seed_pairs", std::to_string(result.seed_pairs));
    line("skipped_oov_pairs", std::to_string(result.skipped_oov));
  }
  line("classifier", std::string(to_string(result.spec.classifier)));
  line("repeats", std::to_string(result.repeats.size()));
  for (std::size_t i = 0; i < result.repeats.size(); ++i) {
    const auto& r = result.repeats[i];
    const std::string p = "repeat." + std::to_string(i) + ".";
    line(p + "seed", std::to_string(r.seed));
    line(p + "accuracy", format_double(r.accuracy));
    line(p + "macro_f1", format_double(r.macro_f1));
    line(p + "best_epoch", std::to_string(r.best_epoch));
  }
  line("accuracy.mean", format_double(result.mean_accuracy));
  if (result.ci_accuracy) line("accuracy.ci95", format_double(*result.ci_accuracy));
  line("macro_f1.mean", format_double(result.mean_macro_f1));
  if (result.ci_macro_f1) line("macro_f1.ci95", format_double(*result.ci_macro_f1));
  line("ci_method", "normal_approximation(1.96*sample_stdev/sqrt(repeats))");
  for (const auto& [k, v] : spec_entries(result.spec)) line("spec." + k, v);
  return out;
}

std::string format_result_table(const ExperimentResult& result) {
  const auto pct = [](double v) { return format_fixed(100.0 * v, 1); };
  std::string out;
  if (result.spec.mode == ExperimentMode::kCrosslingual) {
    out += setting_label(result.spec) + "  method=" + std::string(to_string(result.spec.method)) +
           "  classifier=" + std::string(to_string(result.spec.classifier)) + "\n";
  } else {
    out += "monolingual " + result.spec.source_lang + "  classifier=" +
           std::string(to_string(result.spec.classifier)) + "\n";
  }
  out += "repeat  seed                  accuracy  macro-F1  best-epoch\n";
  for (std::size_t i = 0; i < result.repeats.size(); ++i) {
    const auto& r = result.repeats[i];
    std::string row = std::to_string(i);
    row.resize(8, ' ');
    std::string seed = std::to_string(r.seed);
    seed.resize(22, ' ');
    std::string acc = pct(r.accuracy);
    acc.resize(10, ' ');
    std::string f1 = pct(r.macro_f1);
    f1.resize(10, ' ');
    out += row + seed + acc + f1 + std::to_string(r.best_epoch) + "\n";
  }
  out += "mean accuracy " + pct(result.mean_accuracy);
  if (result.ci_accuracy) out += " ± " + pct(*result.ci_accuracy);
  out += ", macro-F1 " + pct(result.mean_macro_f1);
  if (result.ci_macro_f1) out += " ± " + pct(*result.ci_macro_f1);
  out += "\n";
  return out;
}

}  // namespace xling
