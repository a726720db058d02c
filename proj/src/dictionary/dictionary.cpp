#include <algorithm>
#include <set>

#include "xling/dictionary.hpp"
#include "xling/errors.hpp"
#include "xling/text_format.hpp"

namespace xling {

DictLoadResult load_dict_with_stats(const std::string& path) {
  const auto lines = read_lines(path);
  DictLoadResult out;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    const std::string where = path + ":" + std::to_string(i + 1) + ": ";
    const auto tabs = std::count(line.begin(), line.end(), '\t');
    if (tabs != 1) {
      throw DataError(where + "expected 'source<TAB>target', found " + std::to_string(tabs) + " tab(s)");
    }
    const auto tab = line.find('\t');
    std::string source = line.substr(0, tab);
    std::string target = line.substr(tab + 1);
    if (source.empty() || target.empty()) throw DataError(where + "empty source or target word");
    if (!seen.emplace(source, target).second) {
      ++out.duplicates_dropped;
      continue;
    }
    out.dictionary.pairs.push_back({std::move(source), std::move(target)});
  }
  return out;
}

BilingualDictionary load_dict(const std::string& path) { return load_dict_with_stats(path).dictionary; }

void save_dict(const BilingualDictionary& dict, const std::string& path) {
  std::string out;
  for (const auto& p : dict.pairs) out += p.source + "\t" + p.target + "\n";
  write_text_file(path, out);
}

SeedMatrices build_seed_matrices(const BilingualDictionary& dict, const EmbeddingSpace& src,
                                 const EmbeddingSpace& tgt, std::size_t max_pairs) {
  if (src.dim() != tgt.dim()) {
    throw DataError("seed matrices: source dimension " + std::to_string(src.dim()) +
                    " differs from target dimension " + std::to_string(tgt.dim()));
  }
  if (max_pairs == 0) throw UsageError("seed matrices: max_pairs must be at least 1");

  SeedMatrices out;
  std::vector<std::size_t> src_rows;
  std::vector<std::size_t> tgt_rows;
  for (const auto& pair : dict.pairs) {
    if (out.kept_pairs.size() == max_pairs) break;
    const auto s = src.index_of(pair.source);
    const auto t = tgt.index_of(pair.target);
    if (!s || !t) {
      ++out.skipped_oov;
      continue;
    }
    src_rows.push_back(*s);
    tgt_rows.push_back(*t);
    out.kept_pairs.push_back(pair);
  }
  if (out.kept_pairs.empty()) {
    throw DataError("seed matrices: no dictionary pair has both words in vocabulary (" +
                    std::to_string(out.skipped_oov) + " skipped)");
  }
  const std::size_t n = out.kept_pairs.size();
  const std::size_t d = src.dim();
  out.xs = Matrix(n, d);
  out.xt = Matrix(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(src.row(src_rows[i]).begin(), d, out.xs.row(i).begin());
    std::copy_n(tgt.row(tgt_rows[i]).begin(), d, out.xt.row(i).begin());
  }
  out.normalization = src.normalization();
  return out;
}

SeedMatrices swap_sides(const SeedMatrices& seeds) {
  SeedMatrices out;
  out.xs = seeds.xt;
  out.xt = seeds.xs;
  out.skipped_oov = seeds.skipped_oov;
  out.normalization = seeds.normalization;
  out.kept_pairs.reserve(seeds.kept_pairs.size());
  for (const auto& p : seeds.kept_pairs) out.kept_pairs.push_back({p.target, p.source});
  return out;
}

}  // namespace xling
