#include <algorithm>
#include <cmath>

#include "xling/embeddings.hpp"
#include "xling/errors.hpp"
#include "xling/kernels.hpp"
#include "xling/text_format.hpp"

namespace xling {

std::string_view to_string(Normalization mode) {
  switch (mode) {
    case Normalization::kNone: return "none";
    case Normalization::kUnit: return "unit";
    case Normalization::kCenterUnit: return "center_unit";
  }
  return "none";
}

Normalization parse_normalization(std::string_view name) {
  if (name == "none") return Normalization::kNone;
  if (name == "unit") return Normalization::kUnit;
  if (name == "center_unit") return Normalization::kCenterUnit;
  throw UsageError("unknown normalization '" + std::string(name) + "' (expected none|unit|center_unit)");
}

EmbeddingSpace::EmbeddingSpace(std::vector<std::string> words, Matrix vectors, std::string language,
                               Normalization normalization)
    : words_(std::move(words)),
      vectors_(std::move(vectors)),
      language_(std::move(language)),
      normalization_(normalization) {
  if (words_.size() != vectors_.rows()) {
    throw DataError("embedding space: " + std::to_string(words_.size()) + " words but " +
                    std::to_string(vectors_.rows()) + " vectors");
  }
  if (!all_finite(vectors_)) throw DataError("embedding space: non-finite vector entry");
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      throw DataError("embedding space: duplicate word '" + words_[i] + "'");
    }
  }
}

std::optional<std::size_t> EmbeddingSpace::index_of(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VecLoadResult load_vec_with_stats(const std::string& path, const std::string& language) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw DataError(path + ":1: malformed header: file is empty");

  const auto header = split_whitespace(lines[0]);
  if (header.size() != 2) throw DataError(path + ":1: malformed header: expected '<count> <dim>'");
  const auto count = parse_int(header[0]);
  const auto dim = parse_int(header[1]);
  if (!count || !dim || *count < 0 || *dim < 0) {
    throw DataError(path + ":1: malformed header: expected two non-negative integers");
  }
  if (*count == 0) throw DataError(path + ":1: vocabulary size is zero");
  if (*dim == 0) throw DataError(path + ":1: dimension is zero");

  const std::size_t n = static_cast<std::size_t>(*count);
  const std::size_t d = static_cast<std::size_t>(*dim);
  if (lines.size() - 1 != n) {
    // Point at the first surplus line, or just past the end when lines are missing.
    const std::size_t line = std::min(lines.size(), n + 1) + 1;
    throw DataError(path + ":" + std::to_string(line) + ": count mismatch: header declares " + std::to_string(n) +
                    " vectors, file has " + std::to_string(lines.size() - 1) + " data lines");
  }

  VecLoadResult out;
  std::vector<std::string> words;
  std::vector<double> values;
  words.reserve(n);
  values.reserve(n * d);
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = split_whitespace(lines[li]);
    const std::string where = path + ":" + std::to_string(li + 1) + ": ";
    if (fields.size() != d + 1) {
      throw DataError(where + "dimension mismatch: expected a word and " + std::to_string(d) +
                      " values, found " + std::to_string(fields.empty() ? 0 : fields.size() - 1));
    }
    std::vector<double> row(d);
    for (std::size_t j = 0; j < d; ++j) {
      const auto v = parse_double(fields[j + 1]);
      if (!v) throw DataError(where + "invalid number '" + std::string(fields[j + 1]) + "'");
      row[j] = *v;
    }
    std::string word(fields[0]);
    if (!seen.emplace(word, words.size()).second) {
      ++out.duplicates_dropped;
      continue;
    }
    words.push_back(std::move(word));
    values.insert(values.end(), row.begin(), row.end());
  }
  const std::size_t kept = words.size();
  out.space = EmbeddingSpace(std::move(words), Matrix(kept, d, std::move(values)), language);
  return out;
}

EmbeddingSpace load_vec(const std::string& path, const std::string& language) {
  return load_vec_with_stats(path, language).space;
}

std::string serialize_vec(const EmbeddingSpace& space) {
  std::string out = std::to_string(space.size()) + " " + std::to_string(space.dim()) + "\n";
  for (std::size_t i = 0; i < space.size(); ++i) {
    out += space.words()[i];
    for (double v : space.row(i)) {
      out += ' ';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void save_vec(const EmbeddingSpace& space, const std::string& path) {
  write_text_file(path, serialize_vec(space));
}

LookupResult lookup(const EmbeddingSpace& space, std::string_view word) {
  if (const auto idx = space.index_of(word)) {
    const auto r = space.row(*idx);
    return {std::vector<double>(r.begin(), r.end()), false};
  }
  return {std::vector<double>(space.dim(), 0.0), true};
}

EmbeddingSpace normalize(const EmbeddingSpace& space, Normalization mode) {
  if (mode == Normalization::kNone) return space;
  Matrix v = space.vectors();
  if (mode == Normalization::kCenterUnit && v.rows() > 0) {
    std::vector<double> mean(v.cols(), 0.0);
    for (std::size_t i = 0; i < v.rows(); ++i)
      for (std::size_t j = 0; j < v.cols(); ++j) mean[j] += v(i, j);
    for (double& m : mean) m /= static_cast<double>(v.rows());
    for (std::size_t i = 0; i < v.rows(); ++i)
      for (std::size_t j = 0; j < v.cols(); ++j) v(i, j) -= mean[j];
  }
  for (std::size_t i = 0; i < v.rows(); ++i) {
    auto r = v.row(i);
    const double n = std::sqrt(kernels::dot(r, r));
    if (n > 0.0)
      for (double& x : r) x /= n;
  }
  return EmbeddingSpace(space.words(), std::move(v), space.language(), mode);
}

EmbeddingSpace apply_transform(const EmbeddingSpace& space, const LinearMap& map) {
  if (map.dim() != space.dim()) {
    throw DataError("apply_transform: map dimension " + std::to_string(map.dim()) +
                    " does not match space dimension " + std::to_string(space.dim()));
  }
  return EmbeddingSpace(space.words(), matmul_nt(space.vectors(), map.w), space.language(),
                        space.normalization());
}

}  // namespace xling
