#include "xling/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "xling/bli_eval.hpp"
#include "xling/dictionary.hpp"
#include "xling/embeddings.hpp"
#include "xling/errors.hpp"
#include "xling/harness/experiment.hpp"
#include "xling/harness/synthetic.hpp"
#include "xling/numerics.hpp"
#include "xling/rng.hpp"
#include "xling/text_format.hpp"
#include "xling/textclf/checkpoint.hpp"
#include "xling/textclf/tokenize.hpp"
#include "xling/transforms.hpp"

namespace xling {

namespace {

constexpr std::uint64_t kFallbackSeed = 42;

// --seed, else XLING_SEED, else 42.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("XLING_SEED"); env && *env) {
    const auto v = parse_int(env);
    if (!v || *v < 0) throw UsageError("XLING_SEED must be a non-negative integer, got '" + std::string(env) + "'");
    return static_cast<std::uint64_t>(*v);
  }
  return kFallbackSeed;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    const auto v = parse_int(trim(rest.substr(0, comma)));
    if (!v || *v <= 0) throw UsageError(std::string(what) + ": expected a comma-separated list of positive integers");
    out.push_back(static_cast<std::size_t>(*v));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

struct AlignArgs {
  std::string method;
  std::string src_emb;
  std::string tgt_emb;
  std::string dict;
  std::string out;
  std::size_t max_pairs = kDefaultMaxPairs;
  std::string normalize = "none";
  std::optional<std::uint64_t> seed;
  RankConfig rank;
  std::string distance = "cosine";
  std::optional<double> cca_ridge;
};

struct EvalArgs {
  std::string map;
  std::string src_emb;
  std::string tgt_emb;
  std::string test_dict;
  std::string k = "1,5,10";
  std::size_t hubness_k = 10;
  std::size_t hubness_sample = 0;
  std::optional<std::uint64_t> seed;
};

struct TrainArgs {
  std::string dataset;
  std::string dev;
  std::string emb;
  std::string map;
  std::string model_out;
  std::string classifier = "cnn";
  std::optional<std::string> normalize;
  double lr = 1e-3;
  std::string schedule = "constant";
  std::size_t batch_size = 32;
  std::size_t epochs = 10;
  std::optional<std::uint64_t> seed;
  std::size_t filters = 256;
  std::string widths = "2,3,4";
  double dropout = 0.5;
};

struct PredictArgs {
  std::string model;
  std::string emb;
  std::string map;
  std::string input = "-";
};

struct ExperimentArgs {
  std::string spec;
  bool quiet = false;
};

struct SynthArgs {
  std::string out_dir;
  SynthConfig cfg;
  std::optional<std::uint64_t> seed;
};

EmbeddingSpace load_space(const std::string& path, Normalization mode, const std::string& lang = {}) {
  return normalize(load_vec(path, lang), mode);
}

int cmd_align(const AlignArgs& a, std::ostream& out) {
  FitOptions options;
  options.method = parse_method(a.method);
  const Normalization mode = parse_normalization(a.normalize);
  options.rank = a.rank;
  options.rank.distance = parse_distance(a.distance);
  options.rank.seed = resolve_seed(a.seed);
  options.cca_ridge = a.cca_ridge;
  validate(options.rank);
  if (a.max_pairs < 1) throw UsageError("--max-pairs must be >= 1");

  const EmbeddingSpace src = load_space(a.src_emb, mode);
  const EmbeddingSpace tgt = load_space(a.tgt_emb, mode);
  const BilingualDictionary dict = load_dict(a.dict);
  const SeedMatrices seeds = build_seed_matrices(dict, src, tgt, a.max_pairs);
  LinearMap map = fit(seeds, options);
  map.meta.seed = options.rank.seed;
  save_map(map, a.out);

  out << "method=" << to_string(map.method) << "\n";
  out << "seed=" << map.meta.seed << "\n";
  out << "seed_pairs=" << seeds.rows() << "\n";
  out << "skipped_oov=" << seeds.skipped_oov << "\n";
  out << "normalization=" << to_string(mode) << "\n";
  out << "final_objective=" << format_double(map.meta.final_objective) << "\n";
  out << "orthogonality_error=" << format_double(orthogonality_error(map.w)) << "\n";
  out << "map=" << a.out << "\n";
  return 0;
}

int cmd_eval_bli(const EvalArgs& a, std::ostream& out) {
  const std::vector<std::size_t> ks = parse_size_list(a.k, "--k");
  const LinearMap map = load_map(a.map);
  const EmbeddingSpace src = load_space(a.src_emb, map.meta.normalization);
  const EmbeddingSpace tgt = load_space(a.tgt_emb, map.meta.normalization);
  const BilingualDictionary dict = load_dict(a.test_dict);
  BliReport report = precision_at_k(map, dict, src, tgt, ks);
  if (a.hubness_sample > 0) {
    report.hubness_skew = hubness_skew(map, src, tgt, a.hubness_k, std::min(a.hubness_sample, src.size()),
                                       resolve_seed(a.seed));
  }
  out << format_report(report);
  return 0;
}

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  TrainConfig cfg;
  cfg.learning_rate = a.lr;
  cfg.schedule = parse_lr_schedule(a.schedule);
  cfg.batch_size = a.batch_size;
  cfg.max_epochs = a.epochs;
  cfg.seed = resolve_seed(a.seed);
  validate(cfg);
  const ClassifierKind kind = parse_classifier_kind(a.classifier);
  CnnConfig cnn;
  cnn.filters_per_width = a.filters;
  cnn.widths = parse_size_list(a.widths, "--widths");
  cnn.dropout = a.dropout;
  if (cnn.filters_per_width < 1) throw UsageError("--filters must be >= 1");
  if (!(cnn.dropout >= 0.0 && cnn.dropout < 1.0)) throw UsageError("--dropout must be in [0, 1)");

  std::optional<LinearMap> map;
  if (!a.map.empty()) map = load_map(a.map);
  const Normalization mode =
      a.normalize ? parse_normalization(*a.normalize) : (map ? map->meta.normalization : Normalization::kNone);
  const LabeledDataset train_set = load_dataset(a.dataset, Split::kTrain);
  const LabeledDataset dev_set = load_dataset(a.dev, Split::kDev);
  EmbeddingSpace space = load_space(a.emb, mode);
  if (map) space = apply_transform(space, *map);

  Checkpoint cp;
  cp.train = cfg;
  cp.normalization = mode;
  TrainHistory history;
  if (kind == ClassifierKind::kCnn) {
    auto result = train(CnnModel::initialize(space.dim(), cnn, derive_seed(cfg.seed, 0xC0FFEE)), train_set, dev_set,
                        space, cfg);
    cp.model = std::move(result.model);
    history = std::move(result.history);
  } else {
    auto result = fit_mean_baseline(train_set, dev_set, space, cfg);
    cp.model = std::move(result.model);
    history = std::move(result.history);
  }
  for (const auto& e : history.epochs) {
    err << "epoch=" << e.epoch << " train_loss=" << format_fixed(e.train_loss, 6)
        << " dev_accuracy=" << format_fixed(e.dev_accuracy, 6) << "\n";
  }
  save_checkpoint(cp, a.model_out);
  out << "classifier=" << to_string(kind) << "\n";
  out << "seed=" << cfg.seed << "\n";
  out << "train_examples=" << train_set.size() << "\n";
  out << "excluded_empty=" << train_set.excluded_empty << "\n";
  out << "skipped_examples=" << history.skipped_examples << "\n";
  out << "best_epoch=" << history.best_epoch << "\n";
  out << "best_dev_accuracy=" << format_double(history.best_dev_accuracy) << "\n";
  out << "model=" << a.model_out << "\n";
  return 0;
}

int cmd_predict(const PredictArgs& a, std::istream& in, std::ostream& out) {
  const Checkpoint cp = load_checkpoint(a.model);
  EmbeddingSpace space = load_space(a.emb, cp.normalization);
  if (!a.map.empty()) space = apply_transform(space, load_map(a.map));
  const std::size_t dim = classifier_dim(cp.model);
  if (dim != space.dim()) {
    throw DataError("predict: model dimension " + std::to_string(dim) + " does not match embedding dimension " +
                    std::to_string(space.dim()));
  }

  std::ifstream file;
  std::istream* source = &in;
  if (a.input != "-") {
    file.open(a.input, std::ios::binary);
    if (!file) throw DataError("cannot open input file '" + a.input + "'");
    source = &file;
  }
  std::string line;
  while (std::getline(*source, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = tokenize(line);
    // A line without tokens is scored like an all-OOV line.
    const Matrix input = tokens.empty() ? Matrix(1, dim) : embed_sequence(tokens, space);
    const Prediction p = predict(cp.model, input);
    out << to_string(p.label) << "\t" << format_fixed(p.probability, 6) << "\n";
  }
  return 0;
}

int cmd_experiment(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  const ExperimentSpec spec = load_experiment_spec(a.spec);
  const ExperimentResult result = run_experiment(spec, a.quiet ? nullptr : &err);
  out << format_result_block(result);
  err << format_result_table(result);
  return 0;
}

int cmd_synth(SynthArgs a, std::ostream& out) {
  a.cfg.seed = resolve_seed(a.seed);
  const SynthPair pair = generate_synthetic_pair(a.cfg);
  for (const auto& path : write_synthetic_fixtures(pair, a.cfg, a.out_dir)) out << "wrote=" << path << "\n";
  out << "seed=" << a.cfg.seed << "\n";
  out << "rotation_seed=" << a.cfg.rotation_seed << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-lingual embedding alignment and zero-shot sentiment classification"};
  app.name("xling");
  app.require_subcommand(1);

  AlignArgs align;
  auto* c_align = app.add_subcommand("align", "Fit a linear map between two embedding spaces");
  c_align->add_option("--method", align.method, "mse|orto|cca|rank|orra")->required();
  c_align->add_option("--src-emb", align.src_emb, "Source .vec file")->required();
  c_align->add_option("--tgt-emb", align.tgt_emb, "Target .vec file")->required();
  c_align->add_option("--dict", align.dict, "Seed dictionary (source<TAB>target)")->required();
  c_align->add_option("--out", align.out, "Output map file")->required();
  c_align->add_option("--max-pairs", align.max_pairs, "Seed pairs to use")->capture_default_str();
  c_align->add_option("--normalize", align.normalize, "none|unit|center_unit")->capture_default_str();
  c_align->add_option("--seed", align.seed, "Seed for ranking fits (default: $XLING_SEED or 42)");
  c_align->add_option("--margin", align.rank.margin, "Ranking margin")->capture_default_str();
  c_align->add_option("--negatives", align.rank.negatives, "Negatives per pair")->capture_default_str();
  c_align->add_option("--epochs", align.rank.epochs, "Ranking epochs")->capture_default_str();
  c_align->add_option("--rank-lr", align.rank.learning_rate, "Ranking learning rate")->capture_default_str();
  c_align->add_option("--rank-batch", align.rank.batch_size, "Ranking minibatch size")->capture_default_str();
  c_align->add_option("--distance", align.distance, "cosine|sq_euclidean")->capture_default_str();
  c_align->add_option("--cca-ridge", align.cca_ridge, "CCA ridge (default: 1e-8 * trace(C) / d)");

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval-bli", "Bilingual lexicon induction precision@k");
  c_eval->add_option("--map", eval.map, "Map file")->required();
  c_eval->add_option("--src-emb", eval.src_emb, "Source .vec file")->required();
  c_eval->add_option("--tgt-emb", eval.tgt_emb, "Target .vec file")->required();
  c_eval->add_option("--test-dict", eval.test_dict, "Test dictionary")->required();
  c_eval->add_option("--k", eval.k, "Comma-separated k values")->capture_default_str();
  c_eval->add_option("--hubness-k", eval.hubness_k, "Neighbourhood size for hubness")->capture_default_str();
  c_eval->add_option("--hubness-sample", eval.hubness_sample, "Source vectors sampled for hubness (0 = off)")
      ->capture_default_str();
  c_eval->add_option("--seed", eval.seed, "Sampling seed (default: $XLING_SEED or 42)");

  TrainArgs tr;
  auto* c_train = app.add_subcommand("train", "Train a sentiment classifier over frozen embeddings");
  c_train->add_option("--dataset", tr.dataset, "Training TSV (label<TAB>text)")->required();
  c_train->add_option("--dev", tr.dev, "Development TSV")->required();
  c_train->add_option("--emb", tr.emb, ".vec file")->required();
  c_train->add_option("--map", tr.map, "Map applied to the embeddings before training");
  c_train->add_option("--model-out", tr.model_out, "Checkpoint path")->required();
  c_train->add_option("--classifier", tr.classifier, "cnn|mean_baseline")->capture_default_str();
  c_train->add_option("--normalize", tr.normalize, "none|unit|center_unit (default: the map's)");
  c_train->add_option("--lr", tr.lr, "Adam learning rate")->capture_default_str();
  c_train->add_option("--schedule", tr.schedule, "constant|linear_decay")->capture_default_str();
  c_train->add_option("--batch-size", tr.batch_size, "Minibatch size")->capture_default_str();
  c_train->add_option("--epochs", tr.epochs, "Maximum epochs")->capture_default_str();
  c_train->add_option("--seed", tr.seed, "Seed (default: $XLING_SEED or 42)");
  c_train->add_option("--filters", tr.filters, "Filters per width")->capture_default_str();
  c_train->add_option("--widths", tr.widths, "Filter widths")->capture_default_str();
  c_train->add_option("--dropout", tr.dropout, "Dropout rate")->capture_default_str();

  PredictArgs pr;
  auto* c_predict = app.add_subcommand("predict", "Label one text per input line");
  c_predict->add_option("--model", pr.model, "Checkpoint")->required();
  c_predict->add_option("--emb", pr.emb, ".vec file")->required();
  c_predict->add_option("--map", pr.map, "Map applied to the embeddings");
  c_predict->add_option("--input", pr.input, "Input file, '-' for stdin")->capture_default_str();

  ExperimentArgs ex;
  auto* c_exp = app.add_subcommand("experiment", "Run an experiment described by a key=value spec");
  c_exp->add_option("--spec", ex.spec, "Spec file")->required();
  c_exp->add_flag("--quiet", ex.quiet, "Suppress epoch logs");

  SynthArgs sy;
  auto* c_synth = app.add_subcommand("synth", "Write a synthetic rotated language pair");
  c_synth->add_option("--out-dir", sy.out_dir, "Output directory")->required();
  c_synth->add_option("--vocab", sy.cfg.vocab_size, "Vocabulary size")->capture_default_str();
  c_synth->add_option("--dim", sy.cfg.dim, "Dimension")->capture_default_str();
  c_synth->add_option("--seed", sy.seed, "Data seed (default: $XLING_SEED or 42)");
  c_synth->add_option("--rotation-seed", sy.cfg.rotation_seed, "Rotation seed")->capture_default_str();
  c_synth->add_option("--noise", sy.cfg.noise_sigma, "Target noise sigma")->capture_default_str();
  c_synth->add_option("--examples", sy.cfg.n_examples, "Training texts")->capture_default_str();
  c_synth->add_option("--polarity-fraction", sy.cfg.polarity_fraction, "Share of polarity words")
      ->capture_default_str();
  c_synth->add_option("--polarity-strength", sy.cfg.polarity_strength, "Class direction weight")
      ->capture_default_str();
  c_synth->add_option("--src-lang", sy.cfg.source_lang, "Source language tag")->capture_default_str();
  c_synth->add_option("--tgt-lang", sy.cfg.target_lang, "Target language tag")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return static_cast<int>(ExitCode::kUsage);
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    if (active == c_align) return cmd_align(align, out);
    if (active == c_eval) return cmd_eval_bli(eval, out);
    if (active == c_train) return cmd_train(tr, out, err);
    if (active == c_predict) return cmd_predict(pr, in, out);
    if (active == c_exp) return cmd_experiment(ex, out, err);
    return cmd_synth(sy, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << active->help();
    return static_cast<int>(e.code());
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kData);
  }
}

}  // namespace xling
