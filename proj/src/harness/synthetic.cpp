#include "xling/harness/synthetic.hpp"

#include <cmath>
#include <filesystem>

#include "xling/embeddings.hpp"
#include "xling/errors.hpp"
#include "xling/numerics.hpp"
#include "xling/rng.hpp"
#include "xling/text_format.hpp"

namespace xling {

void validate(const SynthConfig& cfg) {
  if (cfg.vocab_size < 20) throw UsageError("synth: vocabulary size must be >= 20");
  if (cfg.dim < 2) throw UsageError("synth: dimension must be >= 2");
  if (cfg.n_examples < 4) throw UsageError("synth: need at least 4 examples");
  if (!(cfg.noise_sigma >= 0.0) || !std::isfinite(cfg.noise_sigma)) throw UsageError("synth: noise sigma must be >= 0");
  if (!(cfg.polarity_fraction > 0.0 && cfg.polarity_fraction < 1.0)) {
    throw UsageError("synth: polarity fraction must be in (0, 1)");
  }
  const auto polar = static_cast<std::size_t>(cfg.polarity_fraction * static_cast<double>(cfg.vocab_size));
  if (polar < 2 || polar >= cfg.vocab_size) throw UsageError("synth: polarity fraction leaves no polarity or filler words");
  if (!(cfg.polarity_strength >= 0.0)) throw UsageError("synth: polarity strength must be >= 0");
  if (cfg.min_tokens < 1 || cfg.max_tokens < cfg.min_tokens) throw UsageError("synth: invalid token range");
  if (cfg.source_lang.empty() || cfg.target_lang.empty() || cfg.source_lang == cfg.target_lang) {
    throw UsageError("synth: language tags must be distinct and non-empty");
  }
}

namespace {

std::vector<double> unit(std::vector<double> v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  for (double& x : v) x /= n;
  return v;
}

std::vector<double> gaussian(Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  for (double& x : v) x = rng.normal();
  return v;
}

Matrix random_rotation(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix g(d, d);
  for (double& x : g.values()) x = rng.normal();
  // qr_thin fixes diag(R) >= 0, which makes Q Haar-distributed.
  return qr_thin(g).q;
}

// Texts of one language. Each carries 1-3 polarity words of its own class
// and neutral filler; labels alternate so the set is balanced.
LabeledDataset make_texts(const SynthConfig& cfg, const std::string& lang, std::size_t polar, std::size_t count,
                          std::uint64_t seed, Split split) {
  Rng rng(seed);
  const std::size_t half = polar / 2;
  const std::size_t filler = cfg.vocab_size - polar;
  std::vector<std::pair<std::string, Label>> rows;
  for (std::size_t i = 0; i < count; ++i) {
    const Label label = (i % 2 == 0) ? Label::kPositive : Label::kNegative;
    const std::size_t len = cfg.min_tokens + rng.index(cfg.max_tokens - cfg.min_tokens + 1);
    const std::size_t n_polar = std::min(len, 1 + rng.index(3));
    std::vector<std::size_t> ids;
    for (std::size_t k = 0; k < n_polar; ++k) {
      ids.push_back(label == Label::kPositive ? rng.index(half) : half + rng.index(polar - half));
    }
    while (ids.size() < len) ids.push_back(polar + rng.index(filler));
    rng.shuffle(std::span<std::size_t>(ids));
    std::string text;
    for (std::size_t id : ids) {
      if (!text.empty()) text += ' ';
      text += lang + "_w" + std::to_string(id);
    }
    rows.emplace_back(std::move(text), label);
  }
  return make_dataset(rows, split);
}

}  // namespace

SynthPair generate_synthetic_pair(const SynthConfig& cfg) {
  validate(cfg);
  const std::size_t v = cfg.vocab_size;
  const std::size_t d = cfg.dim;
  const auto polar = static_cast<std::size_t>(cfg.polarity_fraction * static_cast<double>(v));
  const std::size_t half = polar / 2;

  SynthPair out;
  out.polarity_words = polar;
  out.rotation = random_rotation(d, cfg.rotation_seed);

  Rng vec_rng(derive_seed(cfg.seed, 1));
  Rng dir_rng(derive_seed(cfg.seed, 2));
  Rng noise_rng(derive_seed(cfg.seed, 3));
  const std::vector<double> p = unit(gaussian(dir_rng, d));
  // Per-coordinate scale giving noise of expected squared norm sigma^2,
  // i.e. sigma is measured relative to the unit-length source vectors.
  const double noise_scale = cfg.noise_sigma / std::sqrt(static_cast<double>(d));

  Matrix xs(v, d);
  Matrix xt(v, d);
  std::vector<std::string> src_words;
  std::vector<std::string> tgt_words;
  for (std::size_t i = 0; i < v; ++i) {
    std::vector<double> s = unit(gaussian(vec_rng, d));
    if (i < polar) {
      const double sign = i < half ? 1.0 : -1.0;
      for (std::size_t j = 0; j < d; ++j) s[j] += sign * cfg.polarity_strength * p[j];
    } else {
      // Neutral words get no component along the class direction.
      double along = 0.0;
      for (std::size_t j = 0; j < d; ++j) along += s[j] * p[j];
      for (std::size_t j = 0; j < d; ++j) s[j] -= along * p[j];
    }
    s = unit(std::move(s));
    const std::vector<double> t = matvec(out.rotation, s);
    for (std::size_t j = 0; j < d; ++j) {
      xs(i, j) = s[j];
      xt(i, j) = t[j] + (cfg.noise_sigma > 0.0 ? noise_scale * noise_rng.normal() : 0.0);
    }
    src_words.push_back(cfg.source_lang + "_w" + std::to_string(i));
    tgt_words.push_back(cfg.target_lang + "_w" + std::to_string(i));
    out.dictionary.pairs.push_back({src_words.back(), tgt_words.back()});
  }
  out.source = EmbeddingSpace(std::move(src_words), std::move(xs), cfg.source_lang);
  out.target = EmbeddingSpace(std::move(tgt_words), std::move(xt), cfg.target_lang);

  out.source_train = make_texts(cfg, cfg.source_lang, polar, cfg.n_examples, derive_seed(cfg.seed, 4), Split::kTrain);
  out.source_dev =
      make_texts(cfg, cfg.source_lang, polar, std::max<std::size_t>(2, cfg.n_examples / 4), derive_seed(cfg.seed, 5),
                 Split::kDev);
  out.target_test =
      make_texts(cfg, cfg.target_lang, polar, std::max<std::size_t>(2, cfg.n_examples / 2), derive_seed(cfg.seed, 6),
                 Split::kTest);
  return out;
}

std::vector<std::string> write_synthetic_fixtures(const SynthPair& pair, const SynthConfig& cfg,
                                                  const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("synth: cannot create directory '" + dir + "': " + ec.message());
  const auto path = [&](const char* name) { return (fs::path(dir) / name).string(); };

  std::vector<std::string> written;
  save_vec(pair.source, path("source.vec"));
  written.push_back(path("source.vec"));
  save_vec(pair.target, path("target.vec"));
  written.push_back(path("target.vec"));
  save_dict(pair.dictionary, path("dict.tsv"));
  written.push_back(path("dict.tsv"));
  save_dataset(pair.source_train, path("train.tsv"));
  written.push_back(path("train.tsv"));
  save_dataset(pair.source_dev, path("dev.tsv"));
  written.push_back(path("dev.tsv"));
  save_dataset(pair.target_test, path("test.tsv"));
  written.push_back(path("test.tsv"));

  std::string spec;
  spec += "# synthetic pair: vocab=" + std::to_string(cfg.vocab_size) + " dim=" + std::to_string(cfg.dim) +
          " seed=" + std::to_string(cfg.seed) + " rotation_seed=" + std::to_string(cfg.rotation_seed) +
          " noise_sigma=" + format_double(cfg.noise_sigma) + "\n";
  spec += "mode=crosslingual\n";
  spec += "source_lang=" + cfg.source_lang + "\n";
  spec += "target_lang=" + cfg.target_lang + "\n";
  spec += "method=orto\n";
  spec += "direction=source_to_target\n";
  spec += "classifier=mean_baseline\n";
  spec += "source_embeddings=source.vec\n";
  spec += "target_embeddings=target.vec\n";
  spec += "dictionary=dict.tsv\n";
  spec += "source_train=train.tsv\n";
  spec += "source_dev=dev.tsv\n";
  spec += "target_test=test.tsv\n";
  spec += "learning_rate=0.1\n";
  spec += "seed=42\n";
  spec += "repeats=6\n";
  write_text_file(path("experiment.cfg"), spec);
  written.push_back(path("experiment.cfg"));
  return written;
}

}  // namespace xling
