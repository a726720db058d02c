#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace xling {

// Lowercases (ASCII, Latin-1, Latin Extended-A, Greek, Cyrillic), splits on
// Unicode whitespace, strips leading/trailing punctuation from each token
// and drops tokens left empty. No length limit.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace xling
