#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xling/embedding_space.hpp"
#include "xling/matrix.hpp"

namespace xling {

enum class Method { kMse, kOrto, kCca, kRank, kOrRa };

std::string_view to_string(Method method);
// Accepts mse|orto|cca|rank|orra (or_ra is an alias); throws UsageError otherwise.
Method parse_method(std::string_view name);

struct FitMeta {
  std::size_t seed_pairs = 0;
  Normalization normalization = Normalization::kNone;
  // Objective of the returned map: sum of squared residuals for the
  // closed-form fits, hinge loss on the evaluation negatives for rank/orra.
  double final_objective = 0.0;
  // Ranking fits only: hinge loss of the initial map.
  double initial_objective = 0.0;
  std::vector<double> loss_history;
  std::vector<std::pair<std::string, std::string>> hyperparameters;
  std::uint64_t seed = 0;
};

// Square map applied as W·x (column-vector convention).
struct LinearMap {
  Matrix w;
  Method method = Method::kMse;
  FitMeta meta;

  std::size_t dim() const noexcept { return w.rows(); }
};

// Text form: "<method> <d> <seed> <normalization>", d rows of d reals, then
// optional "# key=value" metadata lines.
std::string serialize_map(const LinearMap& map);
LinearMap parse_map(const std::string& text, const std::string& origin = "<map>");
void save_map(const LinearMap& map, const std::string& path);
LinearMap load_map(const std::string& path);

}  // namespace xling
