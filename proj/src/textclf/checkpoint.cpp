#include "xling/textclf/checkpoint.hpp"

#include <map>
#include <sstream>

#include "xling/errors.hpp"
#include "xling/text_format.hpp"

namespace xling {

namespace {

constexpr std::string_view kMagic = "xling-checkpoint 1";

void put_tensor(std::string& out, const std::string& name, std::size_t rows, std::size_t cols,
                std::span<const double> values) {
  out += "tensor " + name + " " + std::to_string(rows) + " " + std::to_string(cols) + "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) out += ' ';
      out += format_double(values[r * cols + c]);
    }
    out += '\n';
  }
}

struct Tensor {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::size_t line = 0;
};

class Reader {
 public:
  Reader(const std::string& text, std::string origin) : origin_(std::move(origin)) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines_.push_back(line);
    }
  }

  DataError fail(std::size_t line, const std::string& what) const {
    return DataError(origin_ + ":" + std::to_string(line) + ": " + what);
  }

  void parse() {
    if (lines_.empty() || trim(lines_[0]) != kMagic) {
      throw fail(1, "not a checkpoint (expected '" + std::string(kMagic) + "')");
    }
    std::size_t i = 1;
    while (i < lines_.size()) {
      const std::string_view line = trim(lines_[i]);
      if (line.empty()) {
        ++i;
        continue;
      }
      if (line.rfind("tensor ", 0) == 0) {
        i = read_tensor(i);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw fail(i + 1, "expected key=value or tensor header");
      const std::string key(line.substr(0, eq));
      if (settings_.count(key)) throw fail(i + 1, "duplicate key '" + key + "'");
      settings_[key] = {std::string(line.substr(eq + 1)), i + 1};
      ++i;
    }
  }

  const std::string& get(const std::string& key) const {
    const auto it = settings_.find(key);
    if (it == settings_.end()) throw fail(lines_.size(), "missing key '" + key + "'");
    return it->second.first;
  }
  std::size_t line_of(const std::string& key) const { return settings_.at(key).second; }

  double get_double(const std::string& key) const {
    const auto v = parse_double(get(key));
    if (!v) throw fail(line_of(key), "invalid number for '" + key + "'");
    return *v;
  }
  std::uint64_t get_uint(const std::string& key) const {
    const auto v = parse_int(get(key));
    if (!v || *v < 0) throw fail(line_of(key), "invalid non-negative integer for '" + key + "'");
    return static_cast<std::uint64_t>(*v);
  }

  Tensor take(const std::string& name, std::size_t rows, std::size_t cols) {
    const auto it = tensors_.find(name);
    if (it == tensors_.end()) throw fail(lines_.size(), "missing tensor '" + name + "'");
    Tensor t = std::move(it->second.first);
    if (t.rows != rows || t.cols != cols) {
      throw fail(it->second.second, "tensor '" + name + "' has shape " + std::to_string(t.rows) + "x" +
                                        std::to_string(t.cols) + ", expected " + std::to_string(rows) + "x" +
                                        std::to_string(cols));
    }
    tensors_.erase(it);
    return t;
  }

  Tensor take_any(const std::string& name) {
    const auto it = tensors_.find(name);
    if (it == tensors_.end()) throw fail(lines_.size(), "missing tensor '" + name + "'");
    Tensor t = std::move(it->second.first);
    t.line = it->second.second;
    tensors_.erase(it);
    return t;
  }

  void expect_no_tensors_left() const {
    if (!tensors_.empty()) {
      const auto& [name, t] = *tensors_.begin();
      throw fail(t.second, "unexpected tensor '" + name + "'");
    }
  }

 private:
  std::size_t read_tensor(std::size_t i) {
    const auto head = split_whitespace(lines_[i]);
    if (head.size() != 4) throw fail(i + 1, "malformed tensor header");
    const auto rows = parse_int(head[2]);
    const auto cols = parse_int(head[3]);
    if (!rows || !cols || *rows < 0 || *cols < 0) throw fail(i + 1, "malformed tensor shape");
    const std::string name(head[1]);
    if (tensors_.count(name)) throw fail(i + 1, "duplicate tensor '" + name + "'");
    Tensor t{static_cast<std::size_t>(*rows), static_cast<std::size_t>(*cols), {}};
    t.values.reserve(t.rows * t.cols);
    for (std::size_t r = 0; r < t.rows; ++r) {
      const std::size_t li = i + 1 + r;
      if (li >= lines_.size()) throw fail(li + 1, "tensor '" + name + "' is truncated");
      const auto fields = split_whitespace(lines_[li]);
      if (fields.size() != t.cols) {
        throw fail(li + 1, "expected " + std::to_string(t.cols) + " values, found " + std::to_string(fields.size()));
      }
      for (const auto f : fields) {
        const auto v = parse_double(f);
        if (!v) throw fail(li + 1, "invalid number '" + std::string(f) + "'");
        t.values.push_back(*v);
      }
    }
    tensors_[name] = {std::move(t), i + 1};
    return i + 1 + static_cast<std::size_t>(*rows);
  }

  std::string origin_;
  std::vector<std::string> lines_;
  std::map<std::string, std::pair<std::string, std::size_t>> settings_;
  std::map<std::string, std::pair<Tensor, std::size_t>> tensors_;
};

}  // namespace

std::string serialize_checkpoint(const Checkpoint& checkpoint) {
  std::string out(kMagic);
  out += '\n';
  const bool is_cnn = std::holds_alternative<CnnModel>(checkpoint.model);
  out += std::string("kind=") + (is_cnn ? "cnn" : "mean_baseline") + "\n";
  out += "dim=" + std::to_string(classifier_dim(checkpoint.model)) + "\n";
  out += "normalization=" + std::string(to_string(checkpoint.normalization)) + "\n";
  const TrainConfig& t = checkpoint.train;
  out += "train.learning_rate=" + format_double(t.learning_rate) + "\n";
  out += "train.schedule=" + std::string(to_string(t.schedule)) + "\n";
  out += "train.batch_size=" + std::to_string(t.batch_size) + "\n";
  out += "train.max_epochs=" + std::to_string(t.max_epochs) + "\n";
  out += "train.seed=" + std::to_string(t.seed) + "\n";
  out += "train.beta1=" + format_double(t.beta1) + "\n";
  out += "train.beta2=" + format_double(t.beta2) + "\n";
  out += "train.epsilon=" + format_double(t.epsilon) + "\n";

  if (is_cnn) {
    const auto& m = std::get<CnnModel>(checkpoint.model);
    out += "cnn.dropout=" + format_double(m.dropout_rate) + "\n";
    std::string widths;
    for (const auto& b : m.banks) widths += (widths.empty() ? "" : ",") + std::to_string(b.width);
    out += "cnn.widths=" + widths + "\n";
    for (std::size_t i = 0; i < m.banks.size(); ++i) {
      const auto& b = m.banks[i];
      put_tensor(out, "conv" + std::to_string(i) + ".weights", b.weights.rows(), b.weights.cols(),
                 b.weights.values());
      put_tensor(out, "conv" + std::to_string(i) + ".bias", 1, b.bias.size(), b.bias);
    }
    put_tensor(out, "dense.weights", m.dense_w.rows(), m.dense_w.cols(), m.dense_w.values());
    put_tensor(out, "dense.bias", 1, m.dense_b.size(), m.dense_b);
  } else {
    const auto& m = std::get<MeanBaselineModel>(checkpoint.model);
    put_tensor(out, "baseline.weights", 1, m.weights.size(), m.weights);
    put_tensor(out, "baseline.bias", 1, m.bias.size(), m.bias);
  }
  return out;
}

Checkpoint parse_checkpoint(const std::string& text, const std::string& origin) {
  Reader r(text, origin);
  r.parse();
  Checkpoint cp;
  const std::size_t dim = r.get_uint("dim");
  if (dim == 0) throw r.fail(r.line_of("dim"), "dimension must be positive");
  try {
    cp.normalization = parse_normalization(r.get("normalization"));
  } catch (const UsageError& e) {
    throw r.fail(r.line_of("normalization"), e.what());
  }
  try {
    cp.train.schedule = parse_lr_schedule(r.get("train.schedule"));
  } catch (const UsageError& e) {
    throw r.fail(r.line_of("train.schedule"), e.what());
  }
  cp.train.learning_rate = r.get_double("train.learning_rate");
  cp.train.batch_size = r.get_uint("train.batch_size");
  cp.train.max_epochs = r.get_uint("train.max_epochs");
  cp.train.seed = r.get_uint("train.seed");
  cp.train.beta1 = r.get_double("train.beta1");
  cp.train.beta2 = r.get_double("train.beta2");
  cp.train.epsilon = r.get_double("train.epsilon");

  const std::string& kind = r.get("kind");
  if (kind == "cnn") {
    CnnModel m;
    m.dim = dim;
    m.dropout_rate = r.get_double("cnn.dropout");
    if (!(m.dropout_rate >= 0.0 && m.dropout_rate < 1.0)) throw r.fail(r.line_of("cnn.dropout"), "dropout out of range");
    std::string_view rest = r.get("cnn.widths");
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto w = parse_int(rest.substr(0, comma));
      if (!w || *w <= 0) throw r.fail(r.line_of("cnn.widths"), "invalid filter width");
      ConvBank bank;
      bank.width = static_cast<std::size_t>(*w);
      m.banks.push_back(std::move(bank));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (m.banks.empty()) throw r.fail(r.line_of("cnn.widths"), "no filter widths");
    std::size_t features = 0;
    for (std::size_t i = 0; i < m.banks.size(); ++i) {
      auto& bank = m.banks[i];
      const std::string prefix = "conv" + std::to_string(i);
      Tensor bias = r.take_any(prefix + ".bias");
      if (bias.rows != 1) throw r.fail(bias.line, "bias must have one row");
      Tensor w = r.take(prefix + ".weights", bias.cols, bank.width * dim);
      bank.weights = Matrix(w.rows, w.cols, std::move(w.values));
      bank.bias = std::move(bias.values);
      features += bank.bias.size();
    }
    Tensor dw = r.take("dense.weights", 2, features);
    Tensor db = r.take("dense.bias", 1, 2);
    m.dense_w = Matrix(2, features, std::move(dw.values));
    m.dense_b = std::move(db.values);
    cp.model = std::move(m);
  } else if (kind == "mean_baseline") {
    MeanBaselineModel m;
    m.dim = dim;
    m.weights = r.take("baseline.weights", 1, dim).values;
    m.bias = r.take("baseline.bias", 1, 1).values;
    cp.model = std::move(m);
  } else {
    throw r.fail(r.line_of("kind"), "unknown classifier kind '" + kind + "'");
  }
  r.expect_no_tensors_left();
  return cp;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  write_text_file(path, serialize_checkpoint(checkpoint));
}

Checkpoint load_checkpoint(const std::string& path) {
  std::string text;
  for (const auto& l : read_lines(path)) text += l + "\n";
  return parse_checkpoint(text, path);
}

}  // namespace xling
