#include "test_support.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "xling/cli.hpp"
#include "xling/numerics.hpp"
#include "xling/text_format.hpp"

namespace xling::test {

TempDir::TempDir(const std::string& tag) {
  static std::uint64_t counter = 0;
  const auto base = std::filesystem::temp_directory_path();
  Rng rng(derive_seed(static_cast<std::uint64_t>(std::hash<std::string>{}(tag)), ++counter));
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = base / ("xling-" + tag + "-" + std::to_string(rng.next_u64() % 1000000000ULL));
    if (std::filesystem::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("could not create a temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double scale) {
  Matrix m(rows, cols);
  for (double& v : m.values()) v = scale * rng.normal();
  return m;
}

Matrix random_orthogonal(std::size_t n, Rng& rng) { return qr_thin(random_matrix(n, n, rng)).q; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path);
}

EmbeddingSpace make_space(const Matrix& vectors, const std::string& prefix, const std::string& language) {
  std::vector<std::string> words;
  for (std::size_t i = 0; i < vectors.rows(); ++i) words.push_back(prefix + std::to_string(i));
  return EmbeddingSpace(std::move(words), vectors, language);
}

SeedMatrices make_seeds(const Matrix& xs, const Matrix& xt) {
  SeedMatrices s;
  s.xs = xs;
  s.xt = xt;
  for (std::size_t i = 0; i < xs.rows(); ++i) s.kept_pairs.push_back({"s" + std::to_string(i), "t" + std::to_string(i)});
  return s;
}

std::string data_path(const std::string& relative) { return std::string(XLING_TEST_DATA_DIR) + "/" + relative; }
std::string source_path(const std::string& relative) { return std::string(XLING_SOURCE_DIR) + "/" + relative; }

Matrix normal_equations_map(const SeedMatrices& seeds) {
  Matrix g = matmul_tn(seeds.xs, seeds.xs);
  const std::size_t n = g.rows();
  Matrix inv = Matrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(g(r, c)) > std::abs(g(piv, c))) piv = r;
    }
    for (std::size_t k = 0; k < n; ++k) {
      std::swap(g(c, k), g(piv, k));
      std::swap(inv(c, k), inv(piv, k));
    }
    const double d = g(c, c);
    for (std::size_t k = 0; k < n; ++k) {
      g(c, k) /= d;
      inv(c, k) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = g(r, c);
      for (std::size_t k = 0; k < n; ++k) {
        g(r, k) -= f * g(c, k);
        inv(r, k) -= f * inv(c, k);
      }
    }
  }
  return transpose(matmul(inv, matmul_tn(seeds.xs, seeds.xt)));
}

GradCheckResult cnn_gradient_check(std::uint64_t seed, double h) {
  CnnConfig cfg;
  cfg.filters_per_width = 2;
  CnnModel model = CnnModel::initialize(4, cfg, seed);
  Rng rng(derive_seed(seed, 77));
  for (auto p : model.parameters()) {
    for (double& v : p) v += 0.1 * rng.normal();
  }
  const Matrix input = random_matrix(3, 4, rng);
  const Matrix* batch[] = {&input};
  const Label labels[] = {rng.index(2) ? Label::kNegative : Label::kPositive};
  const std::uint64_t dropout_seed = derive_seed(seed, 78);

  const CnnLossGrad analytic = loss_and_grads(model, batch, labels, dropout_seed);
  const auto grads = analytic.grads.parameters();
  auto params = model.parameters();
  GradCheckResult result;
  for (std::size_t t = 0; t < params.size(); ++t) {
    for (std::size_t i = 0; i < params[t].size(); ++i) {
      const double saved = params[t][i];
      params[t][i] = saved + h;
      const double up = loss_and_grads(model, batch, labels, dropout_seed).loss;
      params[t][i] = saved - h;
      const double down = loss_and_grads(model, batch, labels, dropout_seed).loss;
      params[t][i] = saved;
      const double numeric = (up - down) / (2 * h);
      const double a = grads[t][i];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-7});
      result.max_relative_error = std::max(result.max_relative_error, std::abs(a - numeric) / denom);
      ++result.parameters_checked;
    }
  }
  return result;
}

std::vector<MalformedCase> load_malformed_manifest() {
  std::vector<MalformedCase> out;
  for (const std::string& line : read_lines(data_path("malformed/MANIFEST.tsv"))) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1) {
      f.push_back(line.substr(start, tab - start));
    }
    f.push_back(line.substr(start));
    if (f.size() != 5) throw std::runtime_error("bad manifest row: " + line);
    MalformedCase c{f[0], f[1], std::stoi(f[2]), std::nullopt, f[4]};
    if (f[3] != "-") c.line = std::stoul(f[3]);
    out.push_back(std::move(c));
  }
  return out;
}

std::string check_malformed_case(const MalformedCase& c) {
  const std::string bad = data_path("malformed/" + c.file);
  const std::string src = data_path("valid/src.vec");
  const std::string tgt = data_path("valid/tgt.vec");
  const std::string dict = data_path("valid/dict.tsv");
  TempDir out_dir("malformed");
  std::vector<std::string> args;
  if (c.kind == "vec" || c.kind == "dict") {
    args = {"align", "--method", "orto", "--src-emb", c.kind == "vec" ? bad : src, "--tgt-emb", tgt,
            "--dict", c.kind == "dict" ? bad : dict, "--out", out_dir.file("map.txt")};
  } else if (c.kind == "dataset") {
    args = {"train", "--dataset", bad, "--dev", data_path("valid/dev.tsv"), "--emb", src, "--model-out",
            out_dir.file("m.ckpt"), "--classifier", "mean_baseline"};
  } else {
    return "unknown kind '" + c.kind + "'";
  }
  std::istringstream in;
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, in, out, err);
  const std::string diag = err.str();
  if (code != c.exit_code) {
    return "exit " + std::to_string(code) + ", expected " + std::to_string(c.exit_code) + ": " + diag;
  }
  if (c.line) {
    const std::string where = bad + ":" + std::to_string(*c.line) + ":";
    if (diag.find(where) == std::string::npos) return "diagnostic lacks '" + where + "': " + diag;
  }
  if (diag.find(c.message) == std::string::npos) return "diagnostic lacks '" + c.message + "': " + diag;
  return {};
}

}  // namespace xling::test
