#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xling/embedding_space.hpp"
#include "xling/matrix.hpp"

namespace xling {

// Class index 0 is positive; argmax ties resolve to it.
enum class Label { kPositive = 0, kNegative = 1 };
enum class Split { kTrain, kDev, kTest };

std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view name);
inline std::size_t class_index(Label label) { return static_cast<std::size_t>(label); }

struct Example {
  std::string text;
  Label label = Label::kPositive;
  std::vector<std::string> tokens;
};

struct LabeledDataset {
  std::vector<Example> examples;
  Split split = Split::kTrain;
  // Texts that tokenized to nothing; they are not in `examples`.
  std::size_t excluded_empty = 0;

  std::size_t size() const noexcept { return examples.size(); }
  bool empty() const noexcept { return examples.empty(); }
};

LabeledDataset make_dataset(const std::vector<std::pair<std::string, Label>>& rows, Split split);

// TSV "label<TAB>text" with labels exactly "positive"/"negative". DataError
// with the line number on a missing tab or unknown label.
LabeledDataset load_dataset(const std::string& path, Split split);
void save_dataset(const LabeledDataset& dataset, const std::string& path);

// One row per token (OOV tokens give zero rows). DataError on an empty list.
Matrix embed_sequence(const std::vector<std::string>& tokens, const EmbeddingSpace& space);

}  // namespace xling
