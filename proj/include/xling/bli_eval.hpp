#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xling/dictionary.hpp"
#include "xling/embedding_space.hpp"
#include "xling/linear_map.hpp"

namespace xling {

// Cosine retrieval over a fixed space; row norms are computed once.
class CosineIndex {
 public:
  explicit CosineIndex(const EmbeddingSpace& space);

  // Top-k row indices by cosine similarity, descending, ties to the lower
  // index. Zero rows score -1. k is clamped to the vocabulary size.
  std::vector<std::size_t> top_k(std::span<const double> query, std::size_t k,
                                 std::vector<double>* scores = nullptr) const;
  const EmbeddingSpace& space() const noexcept { return *space_; }

 private:
  const EmbeddingSpace* space_;
  std::vector<double> norms_;
};

struct NeighborList {
  std::vector<std::string> words;
  std::vector<double> scores;
  bool clamped = false;  // k exceeded the vocabulary size
};

NeighborList nearest_neighbors(std::span<const double> query, const EmbeddingSpace& space, std::size_t k);

struct BliReport {
  std::map<std::size_t, double> precision_at;
  std::size_t evaluated_pairs = 0;
  std::size_t skipped_oov = 0;
  std::optional<double> hubness_skew;
};

// A pair scores a hit at k when any in-vocabulary translation listed for its
// source word is among the k nearest targets of W·source.
BliReport precision_at_k(const LinearMap& map, const BilingualDictionary& test_dict, const EmbeddingSpace& src,
                         const EmbeddingSpace& tgt, std::vector<std::size_t> ks);

// Skewness of the k-occurrence distribution N_k over target words, for a
// seeded sample of transformed source vectors.
double hubness_skew(const LinearMap& map, const EmbeddingSpace& src, const EmbeddingSpace& tgt, std::size_t k,
                    std::size_t sample, std::uint64_t seed);

// Population skewness E[(x-μ)³]/σ³; zero when σ is zero.
double standardized_skewness(std::span<const double> values);

// "p@k=..." lines (6 decimals), then counts and the optional hubness value.
std::string format_report(const BliReport& report);

}  // namespace xling
