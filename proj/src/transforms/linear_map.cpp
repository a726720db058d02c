#include <sstream>

#include "xling/errors.hpp"
#include "xling/linear_map.hpp"
#include "xling/text_format.hpp"

namespace xling {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kMse: return "mse";
    case Method::kOrto: return "orto";
    case Method::kCca: return "cca";
    case Method::kRank: return "rank";
    case Method::kOrRa: return "orra";
  }
  return "mse";
}

Method parse_method(std::string_view name) {
  if (name == "mse") return Method::kMse;
  if (name == "orto") return Method::kOrto;
  if (name == "cca") return Method::kCca;
  if (name == "rank") return Method::kRank;
  if (name == "orra" || name == "or_ra") return Method::kOrRa;
  throw UsageError("unknown method '" + std::string(name) + "' (expected mse|orto|cca|rank|orra)");
}

std::string serialize_map(const LinearMap& map) {
  const FitMeta& m = map.meta;
  std::string out;
  out += std::string(to_string(map.method)) + " " + std::to_string(map.dim()) + " " +
         std::to_string(m.seed) + " " + std::string(to_string(m.normalization)) + "\n";
  for (std::size_t i = 0; i < map.w.rows(); ++i) {
    for (std::size_t j = 0; j < map.w.cols(); ++j) {
      if (j) out += ' ';
      out += format_double(map.w(i, j));
    }
    out += '\n';
  }
  out += "# seed_pairs=" + std::to_string(m.seed_pairs) + "\n";
  out += "# final_objective=" + format_double(m.final_objective) + "\n";
  out += "# initial_objective=" + format_double(m.initial_objective) + "\n";
  if (!m.loss_history.empty()) {
    out += "# loss_history=";
    for (std::size_t i = 0; i < m.loss_history.size(); ++i) {
      if (i) out += ',';
      out += format_double(m.loss_history[i]);
    }
    out += '\n';
  }
  for (const auto& [k, v] : m.hyperparameters) out += "# hp." + k + "=" + v + "\n";
  return out;
}

LinearMap parse_map(const std::string& text, const std::string& origin) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
  }
  const auto fail = [&](std::size_t line, const std::string& what) -> DataError {
    return DataError(origin + ":" + std::to_string(line) + ": " + what);
  };
  if (lines.empty()) throw fail(1, "empty map file");
  const auto header = split_whitespace(lines[0]);
  if (header.size() != 4) throw fail(1, "malformed header: expected '<method> <d> <seed> <normalization>'");

  LinearMap map;
  try {
    map.method = parse_method(header[0]);
    map.meta.normalization = parse_normalization(header[3]);
  } catch (const UsageError& e) {
    throw fail(1, e.what());
  }
  const auto d = parse_int(header[1]);
  const auto seed = parse_int(header[2]);
  if (!d || *d <= 0) throw fail(1, "malformed header: dimension must be a positive integer");
  if (!seed || *seed < 0) throw fail(1, "malformed header: seed must be a non-negative integer");
  map.meta.seed = static_cast<std::uint64_t>(*seed);
  const std::size_t dim = static_cast<std::size_t>(*d);
  if (lines.size() < dim + 1) throw fail(lines.size() + 1, "expected " + std::to_string(dim) + " matrix rows");

  map.w = Matrix(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto fields = split_whitespace(lines[i + 1]);
    if (fields.size() != dim) {
      throw fail(i + 2, "expected " + std::to_string(dim) + " values, found " + std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < dim; ++j) {
      const auto v = parse_double(fields[j]);
      if (!v) throw fail(i + 2, "invalid number '" + std::string(fields[j]) + "'");
      map.w(i, j) = *v;
    }
  }
  for (std::size_t li = dim + 1; li < lines.size(); ++li) {
    const std::string_view line = trim(lines[li]);
    if (line.empty()) continue;
    if (line.front() != '#') throw fail(li + 1, "unexpected content after matrix rows");
    const std::string_view body = trim(line.substr(1));
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) continue;
    const std::string key(body.substr(0, eq));
    const std::string value(body.substr(eq + 1));
    if (key == "seed_pairs") {
      if (const auto v = parse_int(value); v && *v >= 0) map.meta.seed_pairs = static_cast<std::size_t>(*v);
    } else if (key == "final_objective") {
      if (const auto v = parse_double(value)) map.meta.final_objective = *v;
    } else if (key == "initial_objective") {
      if (const auto v = parse_double(value)) map.meta.initial_objective = *v;
    } else if (key == "loss_history") {
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        if (const auto v = parse_double(rest.substr(0, comma))) map.meta.loss_history.push_back(*v);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
    } else if (key.rfind("hp.", 0) == 0) {
      map.meta.hyperparameters.emplace_back(key.substr(3), value);
    }
  }
  return map;
}

void save_map(const LinearMap& map, const std::string& path) { write_text_file(path, serialize_map(map)); }

LinearMap load_map(const std::string& path) {
  const auto lines = read_lines(path);
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  return parse_map(text, path);
}

}  // namespace xling
