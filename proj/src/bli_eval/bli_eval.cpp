#include "xling/bli_eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include "xling/errors.hpp"
#include "xling/kernels.hpp"
#include "xling/rng.hpp"
#include "xling/text_format.hpp"

namespace xling {

CosineIndex::CosineIndex(const EmbeddingSpace& space) : space_(&space), norms_(space.size()) {
  for (std::size_t i = 0; i < space.size(); ++i) norms_[i] = std::sqrt(kernels::dot(space.row(i), space.row(i)));
}

std::vector<std::size_t> CosineIndex::top_k(std::span<const double> query, std::size_t k,
                                            std::vector<double>* scores) const {
  if (query.size() != space_->dim()) {
    throw DataError("nearest neighbors: query dimension " + std::to_string(query.size()) +
                    " does not match space dimension " + std::to_string(space_->dim()));
  }
  if (k == 0) throw UsageError("nearest neighbors: k must be >= 1");
  const std::size_t n = space_->size();
  k = std::min(k, n);
  const double qnorm = std::sqrt(kernels::dot(query, query));
  const auto& table = kernels::active();
  std::vector<double> sim(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (norms_[i] == 0.0) {
      sim[i] = -1.0;
    } else if (qnorm == 0.0) {
      sim[i] = 0.0;
    } else {
      sim[i] = table.dot(query.data(), space_->row(i).data(), query.size()) / (qnorm * norms_[i]);
    }
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  const auto better = [&](std::size_t a, std::size_t b) { return sim[a] > sim[b] || (sim[a] == sim[b] && a < b); };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), better);
  idx.resize(k);
  if (scores) {
    scores->clear();
    for (std::size_t i : idx) scores->push_back(sim[i]);
  }
  return idx;
}

NeighborList nearest_neighbors(std::span<const double> query, const EmbeddingSpace& space, std::size_t k) {
  const CosineIndex index(space);
  NeighborList out;
  out.clamped = k > space.size();
  for (std::size_t i : index.top_k(query, k, &out.scores)) out.words.push_back(space.words()[i]);
  return out;
}

BliReport precision_at_k(const LinearMap& map, const BilingualDictionary& test_dict, const EmbeddingSpace& src,
                         const EmbeddingSpace& tgt, std::vector<std::size_t> ks) {
  if (map.dim() != src.dim() || map.dim() != tgt.dim()) {
    throw DataError("precision_at_k: map dimension " + std::to_string(map.dim()) + " incompatible with spaces (" +
                    std::to_string(src.dim()) + ", " + std::to_string(tgt.dim()) + ")");
  }
  if (ks.empty()) throw UsageError("precision_at_k: no k values");
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  if (ks.front() == 0) throw UsageError("precision_at_k: k must be >= 1");

  std::unordered_map<std::string, std::set<std::size_t>> translations;
  for (const auto& p : test_dict.pairs) {
    if (src.contains(p.source)) {
      if (const auto t = tgt.index_of(p.target)) translations[p.source].insert(*t);
    }
  }

  const CosineIndex index(tgt);
  BliReport report;
  std::vector<std::size_t> hits(ks.size(), 0);
  for (const auto& p : test_dict.pairs) {
    const auto s = src.index_of(p.source);
    if (!s || !tgt.contains(p.target)) {
      ++report.skipped_oov;
      continue;
    }
    ++report.evaluated_pairs;
    const auto& valid = translations[p.source];
    const std::vector<double> query = matvec(map.w, src.row(*s));
    const auto neighbors = index.top_k(query, ks.back());
    std::size_t first_hit = neighbors.size();
    for (std::size_t r = 0; r < neighbors.size(); ++r) {
      if (valid.count(neighbors[r])) {
        first_hit = r;
        break;
      }
    }
    for (std::size_t m = 0; m < ks.size(); ++m) {
      if (first_hit < ks[m]) ++hits[m];
    }
  }
  if (report.evaluated_pairs == 0) {
    throw DataError("precision_at_k: no test pair has both words in vocabulary (" +
                    std::to_string(report.skipped_oov) + " skipped)");
  }
  for (std::size_t m = 0; m < ks.size(); ++m) {
    report.precision_at[ks[m]] = static_cast<double>(hits[m]) / static_cast<double>(report.evaluated_pairs);
  }
  return report;
}

double standardized_skewness(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : values) {
    const double c = v - mean;
    m2 += c * c;
    m3 += c * c * c;
  }
  m2 /= n;
  m3 /= n;
  if (m2 <= 0.0) return 0.0;
  return m3 / std::pow(m2, 1.5);
}

double hubness_skew(const LinearMap& map, const EmbeddingSpace& src, const EmbeddingSpace& tgt, std::size_t k,
                    std::size_t sample, std::uint64_t seed) {
  if (map.dim() != src.dim() || map.dim() != tgt.dim()) throw DataError("hubness_skew: dimension mismatch");
  if (sample == 0 || sample > src.size()) {
    throw UsageError("hubness_skew: sample size " + std::to_string(sample) + " must be in [1, " +
                     std::to_string(src.size()) + "]");
  }
  std::vector<std::size_t> rows(src.size());
  std::iota(rows.begin(), rows.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < sample; ++i) std::swap(rows[i], rows[i + rng.index(rows.size() - i)]);
  rows.resize(sample);

  const CosineIndex index(tgt);
  std::vector<double> counts(tgt.size(), 0.0);
  bool any_nonzero = false;
  for (std::size_t r : rows) {
    const std::vector<double> query = matvec(map.w, src.row(r));
    if (std::any_of(query.begin(), query.end(), [](double v) { return v != 0.0; })) any_nonzero = true;
    for (std::size_t j : index.top_k(query, k)) counts[j] += 1.0;
  }
  if (!any_nonzero) throw DataError("hubness_skew: every sampled vector is zero");
  return standardized_skewness(counts);
}

std::string format_report(const BliReport& report) {
  std::string out;
  for (const auto& [k, p] : report.precision_at) out += "p@" + std::to_string(k) + "=" + format_fixed(p, 6) + "\n";
  out += "evaluated_pairs=" + std::to_string(report.evaluated_pairs) + "\n";
  out += "skipped_oov=" + std::to_string(report.skipped_oov) + "\n";
  if (report.hubness_skew) out += "hubness_skew=" + format_fixed(*report.hubness_skew, 6) + "\n";
  return out;
}

}  // namespace xling
