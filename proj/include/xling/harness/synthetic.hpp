#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xling/dictionary.hpp"
#include "xling/embedding_space.hpp"
#include "xling/matrix.hpp"
#include "xling/textclf/dataset.hpp"

namespace xling {

// A planted language pair: the target space is a random orthogonal image of
// the source space plus isotropic noise.
struct SynthConfig {
  std::size_t vocab_size = 300;
  std::size_t dim = 10;
  std::uint64_t seed = 42;           // vectors, noise and texts
  std::uint64_t rotation_seed = 7;
  double noise_sigma = 0.2;         // expected norm of the target noise vector
  std::size_t n_examples = 400;      // source training texts
  double polarity_fraction = 0.2;    // leading share of the vocabulary carrying sentiment
  double polarity_strength = 1.5;    // weight of the class direction before re-normalizing
  std::size_t min_tokens = 4;
  std::size_t max_tokens = 12;
  std::string source_lang = "src";
  std::string target_lang = "tgt";
};

// Throws UsageError for vocab_size < 20, dim < 2 and other invalid sizes.
void validate(const SynthConfig& cfg);

struct SynthPair {
  EmbeddingSpace source;
  EmbeddingSpace target;
  BilingualDictionary dictionary;  // "<src>_w<i>" -> "<tgt>_w<i>" for every word
  LabeledDataset source_train;
  LabeledDataset source_dev;       // n_examples / 4 texts
  LabeledDataset target_test;      // n_examples / 2 texts
  Matrix rotation;                 // target ≈ rotation · source
  std::size_t polarity_words = 0;  // first half positive, second half negative
};

SynthPair generate_synthetic_pair(const SynthConfig& cfg);

// Writes source.vec, target.vec, dict.tsv, train.tsv, dev.tsv, test.tsv and
// experiment.cfg (a cross-lingual spec over those files) into dir, which is
// created if missing. Returns the written paths.
std::vector<std::string> write_synthetic_fixtures(const SynthPair& pair, const SynthConfig& cfg,
                                                  const std::string& dir);

}  // namespace xling
