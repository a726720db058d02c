#include "xling/textclf/dataset.hpp"

#include <algorithm>

#include "xling/errors.hpp"
#include "xling/text_format.hpp"
#include "xling/textclf/tokenize.hpp"

namespace xling {

std::string_view to_string(Label label) { return label == Label::kPositive ? "positive" : "negative"; }

std::optional<Label> parse_label(std::string_view name) {
  if (name == "positive") return Label::kPositive;
  if (name == "negative") return Label::kNegative;
  return std::nullopt;
}

LabeledDataset make_dataset(const std::vector<std::pair<std::string, Label>>& rows, Split split) {
  LabeledDataset ds;
  ds.split = split;
  for (const auto& [text, label] : rows) {
    auto tokens = tokenize(text);
    if (tokens.empty()) {
      ++ds.excluded_empty;
      continue;
    }
    ds.examples.push_back({text, label, std::move(tokens)});
  }
  return ds;
}

LabeledDataset load_dataset(const std::string& path, Split split) {
  const auto lines = read_lines(path);
  std::vector<std::pair<std::string, Label>> rows;
  rows.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = path + ":" + std::to_string(i + 1) + ": ";
    const auto tab = lines[i].find('\t');
    if (tab == std::string::npos) throw DataError(where + "expected 'label<TAB>text'");
    const std::string_view name(lines[i].data(), tab);
    const auto label = parse_label(name);
    if (!label) throw DataError(where + "bad label '" + std::string(name) + "' (expected positive|negative)");
    rows.emplace_back(lines[i].substr(tab + 1), *label);
  }
  return make_dataset(rows, split);
}

void save_dataset(const LabeledDataset& dataset, const std::string& path) {
  std::string out;
  for (const auto& ex : dataset.examples) out += std::string(to_string(ex.label)) + "\t" + ex.text + "\n";
  write_text_file(path, out);
}

Matrix embed_sequence(const std::vector<std::string>& tokens, const EmbeddingSpace& space) {
  if (tokens.empty()) throw DataError("embed_sequence: empty token list");
  Matrix out(tokens.size(), space.dim());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (const auto idx = space.index_of(tokens[i])) {
      std::copy_n(space.row(*idx).begin(), space.dim(), out.row(i).begin());
    }
  }
  return out;
}

}  // namespace xling
