#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "xling/embedding_space.hpp"
#include "xling/matrix.hpp"

namespace xling {

struct DictPair {
  std::string source;
  std::string target;
  bool operator==(const DictPair&) const = default;
};

// Ordered (source, target) pairs. A source word may have several targets;
// an identical pair appears at most once.
struct BilingualDictionary {
  std::vector<DictPair> pairs;

  std::size_t size() const noexcept { return pairs.size(); }
};

struct DictLoadResult {
  BilingualDictionary dictionary;
  std::size_t duplicates_dropped = 0;
};

// One "source<TAB>target" pair per line. DataError with the line number on
// any line that does not split into exactly two non-empty fields.
DictLoadResult load_dict_with_stats(const std::string& path);
BilingualDictionary load_dict(const std::string& path);
void save_dict(const BilingualDictionary& dict, const std::string& path);

inline constexpr std::size_t kDefaultMaxPairs = 20000;

// Row i of xs and xt are the vectors of kept_pairs[i].
struct SeedMatrices {
  Matrix xs;
  Matrix xt;
  std::vector<DictPair> kept_pairs;
  std::size_t skipped_oov = 0;
  Normalization normalization = Normalization::kNone;

  std::size_t rows() const noexcept { return kept_pairs.size(); }
};

// Walks the dictionary in file order, skipping pairs with an out-of-vocabulary
// side, until max_pairs rows are kept. DataError when nothing survives.
SeedMatrices build_seed_matrices(const BilingualDictionary& dict, const EmbeddingSpace& src,
                                 const EmbeddingSpace& tgt, std::size_t max_pairs = kDefaultMaxPairs);

// Exchanges the source and target roles.
SeedMatrices swap_sides(const SeedMatrices& seeds);

}  // namespace xling
