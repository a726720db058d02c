#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xling/dictionary.hpp"
#include "xling/embedding_space.hpp"
#include "xling/linear_map.hpp"
#include "xling/textclf/cnn.hpp"
#include "xling/textclf/dataset.hpp"
#include "xling/textclf/training.hpp"
#include "xling/transforms.hpp"

namespace xling {

enum class ExperimentMode { kCrosslingual, kMonolingual };
enum class Direction { kSourceToTarget, kTargetToSource };
enum class ClassifierKind { kCnn, kMeanBaseline };

std::string_view to_string(ExperimentMode mode);
std::string_view to_string(Direction direction);
std::string_view to_string(ClassifierKind kind);
Direction parse_direction(std::string_view name);
ClassifierKind parse_classifier_kind(std::string_view name);

inline constexpr std::size_t kDefaultRepeats = 6;
inline constexpr std::size_t kCrosslingualMaxEpochs = 5;

struct ExperimentSpec {
  ExperimentMode mode = ExperimentMode::kCrosslingual;
  std::string source_lang = "en";
  std::string target_lang = "cs";
  Method method = Method::kOrto;
  Direction direction = Direction::kSourceToTarget;
  ClassifierKind classifier = ClassifierKind::kCnn;

  std::string source_embeddings;
  std::string target_embeddings;  // cross-lingual only
  std::string dictionary;         // cross-lingual only
  std::string source_train;
  std::string source_dev;
  std::string target_test;        // cross-lingual only
  std::string source_test;        // monolingual only

  Normalization normalization = Normalization::kNone;
  std::size_t max_pairs = kDefaultMaxPairs;
  TrainConfig train;
  CnnConfig cnn;
  RankConfig rank;
  std::optional<double> cca_ridge;
  std::size_t repeats = kDefaultRepeats;
};

// Defaults for a mode: cross-lingual runs train for at most 5 epochs.
ExperimentSpec default_spec(ExperimentMode mode);

// Flat "key=value" lines; '#' starts a comment line. Relative paths resolve
// against base_dir. Unknown keys, bad values and any target_train/target_dev
// key (target-language training data is never read) are UsageErrors.
ExperimentSpec parse_experiment_spec(const std::string& text, const std::string& base_dir = {},
                                     const std::string& origin = "<spec>");
ExperimentSpec load_experiment_spec(const std::string& path);
// Throws UsageError when a value is out of range; paths are not checked.
void validate_settings(const ExperimentSpec& spec);
// validate_settings plus the input paths the spec's mode requires.
void validate(const ExperimentSpec& spec);

// Ordered key/value echo of every field.
std::vector<std::pair<std::string, std::string>> spec_entries(const ExperimentSpec& spec);

// "EN-s ⇒ CS-t" for source_to_target, "CS-t ⇒ EN-s" for target_to_source.
std::string setting_label(const ExperimentSpec& spec);

struct RepeatOutcome {
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::size_t best_epoch = 0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<RepeatOutcome> repeats;
  double mean_accuracy = 0.0;
  double mean_macro_f1 = 0.0;
  // 1.96 · sample stdev / sqrt(repeats); absent for a single repeat.
  std::optional<double> ci_accuracy;
  std::optional<double> ci_macro_f1;
  std::size_t seed_pairs = 0;     // cross-lingual only
  std::size_t skipped_oov = 0;    // dictionary pairs without both vectors
};

// Arithmetic mean and normal-approximation 95% half-width.
std::pair<double, std::optional<double>> mean_and_ci(const std::vector<double>& values);

// In-memory inputs of a cross-lingual run.
struct CrosslingualInputs {
  EmbeddingSpace source;
  EmbeddingSpace target;
  BilingualDictionary dictionary;
  LabeledDataset source_train;
  LabeledDataset source_dev;
  LabeledDataset target_test;
};

struct MonolingualInputs {
  EmbeddingSpace space;
  LabeledDataset train;
  LabeledDataset dev;
  LabeledDataset test;
};

// Spaces are normalized per spec.normalization before use. Errors keep their
// type and gain a "[stage] " prefix. Epoch logs go to log when given.
ExperimentResult run_crosslingual(const ExperimentSpec& spec, const CrosslingualInputs& inputs,
                                  std::ostream* log = nullptr);
ExperimentResult run_monolingual(const ExperimentSpec& spec, const MonolingualInputs& inputs,
                                 std::ostream* log = nullptr);
// Loads the files named by the spec and dispatches on its mode.
ExperimentResult run_experiment(const ExperimentSpec& spec, std::ostream* log = nullptr);

// Machine-readable block: "key=value" lines.
std::string format_result_block(const ExperimentResult& result);
// Human-readable table of the repeats and the aggregate.
std::string format_result_table(const ExperimentResult& result);

}  // namespace xling
