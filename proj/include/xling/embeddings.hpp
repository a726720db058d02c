#pragma once

#include <string>
#include <vector>

#include "xling/embedding_space.hpp"
#include "xling/linear_map.hpp"

namespace xling {

struct VecLoadResult {
  EmbeddingSpace space;
  // Repeated words after the first occurrence; those lines are ignored.
  std::size_t duplicates_dropped = 0;
};

// Text .vec format: header "<n> <d>", then n lines "<word> <d reals>".
// Errors are DataError with the offending line number.
VecLoadResult load_vec_with_stats(const std::string& path, const std::string& language = {});
EmbeddingSpace load_vec(const std::string& path, const std::string& language = {});

// Same format; reals use the shortest exact round-trip representation.
std::string serialize_vec(const EmbeddingSpace& space);
void save_vec(const EmbeddingSpace& space, const std::string& path);

struct LookupResult {
  std::vector<double> vector;
  bool oov = false;
};

// In-vocabulary words return their row; anything else an all-zero vector.
LookupResult lookup(const EmbeddingSpace& space, std::string_view word);

EmbeddingSpace normalize(const EmbeddingSpace& space, Normalization mode);

// Replaces every row x by W·x. Throws DataError when dimensions disagree.
EmbeddingSpace apply_transform(const EmbeddingSpace& space, const LinearMap& map);

}  // namespace xling
