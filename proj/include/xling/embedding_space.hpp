#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xling/matrix.hpp"

namespace xling {

enum class Normalization { kNone, kUnit, kCenterUnit };

std::string_view to_string(Normalization mode);
// Accepts "none", "unit", "center_unit"; throws UsageError otherwise.
Normalization parse_normalization(std::string_view name);

// Ordered vocabulary with one vector per word. Immutable once built.
class EmbeddingSpace {
 public:
  EmbeddingSpace() = default;
  // Throws DataError on duplicate words, row-count mismatch or non-finite rows.
  EmbeddingSpace(std::vector<std::string> words, Matrix vectors, std::string language = {},
                 Normalization normalization = Normalization::kNone);

  std::size_t size() const noexcept { return words_.size(); }
  std::size_t dim() const noexcept { return vectors_.cols(); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  const Matrix& vectors() const noexcept { return vectors_; }
  const std::string& language() const noexcept { return language_; }
  Normalization normalization() const noexcept { return normalization_; }

  std::optional<std::size_t> index_of(std::string_view word) const;
  bool contains(std::string_view word) const { return index_of(word).has_value(); }
  std::span<const double> row(std::size_t i) const { return vectors_.row(i); }

  bool operator==(const EmbeddingSpace& other) const {
    return words_ == other.words_ && vectors_ == other.vectors_;
  }

 private:
  std::vector<std::string> words_;
  Matrix vectors_;
  std::string language_;
  Normalization normalization_ = Normalization::kNone;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace xling
