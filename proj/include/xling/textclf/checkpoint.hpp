#pragma once

#include <string>

#include "xling/embedding_space.hpp"
#include "xling/textclf/training.hpp"

namespace xling {

// A trained classifier plus the configuration that produced it.
struct Checkpoint {
  Classifier model;
  TrainConfig train;
  Normalization normalization = Normalization::kNone;

  bool operator==(const Checkpoint&) const = default;
};

// Text container: "xling-checkpoint 1", key=value settings, then tensors as
// "tensor <name> <rows> <cols>" followed by rows of shortest round-trip reals.
std::string serialize_checkpoint(const Checkpoint& checkpoint);
Checkpoint parse_checkpoint(const std::string& text, const std::string& origin = "<checkpoint>");
void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace xling
