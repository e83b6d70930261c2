#include "cascade_dtw/dtw.hpp"

#include <algorithm>
#include <cmath>

#include "cascade_dtw/errors.hpp"

namespace cascade_dtw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double naive_recursion(std::span<const WeightVector> a, std::span<const WeightVector> b,
                       std::size_t i, std::size_t j, ElementDistance kind) {
  if (i == 0 && j == 0) return 0.0;
  if (i == 0 || j == 0) return kInf;
  const double best = std::min({naive_recursion(a, b, i - 1, j - 1, kind),
                                naive_recursion(a, b, i, j - 1, kind),
                                naive_recursion(a, b, i - 1, j, kind)});
  return delta(a[i - 1], b[j - 1], kind) + best;
}

}  // namespace

void DtwConfig::check() const {
  if (std::isnan(empty_vs_nonempty_distance) || empty_vs_nonempty_distance < 0.0) {
    throw DomainError("empty_vs_nonempty_distance must be >= 0");
  }
}

double delta(const WeightVector& a, const WeightVector& b, ElementDistance kind) noexcept {
  const double df = a.follow - b.follow;
  const double dm = a.mention - b.mention;
  const double dr = a.retweet - b.retweet;
  switch (kind) {
    case ElementDistance::manhattan: return std::abs(df) + std::abs(dm) + std::abs(dr);
    case ElementDistance::euclidean: break;
  }
  return std::sqrt(df * df + dm * dm + dr * dr);
}

DtwMatrix::DtwMatrix(std::span<const WeightVector> a, std::span<const WeightVector> b,
                     ElementDistance kind)
    : rows_(a.size() + 1), cols_(b.size() + 1), costs_(rows_ * cols_, kInf) {
  costs_[0] = 0.0;
  for (std::size_t i = 1; i < rows_; ++i) {
    const WeightVector& ai = a[i - 1];
    double* row = &costs_[i * cols_];
    const double* above = &costs_[(i - 1) * cols_];
    for (std::size_t j = 1; j < cols_; ++j) {
      row[j] = delta(ai, b[j - 1], kind) + std::min({above[j - 1], row[j - 1], above[j]});
    }
  }
}

double dtw(std::span<const WeightVector> a, std::span<const WeightVector> b, const DtwConfig& cfg) {
  if (a.empty() || b.empty()) throw DomainError("dtw: input sequences must be non-empty");
  return DtwMatrix(a, b, cfg.element_distance).distance();
}

double dtw_naive(std::span<const WeightVector> a, std::span<const WeightVector> b,
                 const DtwConfig& cfg) {
  if (a.empty() || b.empty()) throw DomainError("dtw_naive: input sequences must be non-empty");
  if (a.size() > kNaiveDtwMaxLength || b.size() > kNaiveDtwMaxLength) {
    throw DomainError("dtw_naive: sequences longer than " + std::to_string(kNaiveDtwMaxLength) +
                      " are refused");
  }
  return naive_recursion(a, b, a.size(), b.size(), cfg.element_distance);
}

double dipath_set_distance(std::span<const Dipath> from, std::span<const Dipath> to,
                           const DtwConfig& cfg) {
  if (from.empty() && to.empty()) return 0.0;
  if (from.empty() || to.empty()) return cfg.empty_vs_nonempty_distance;

  double total = 0.0;
  for (const auto& p : from) {
    double best = kInf;
    for (const auto& q : to) best = std::min(best, dtw(p.elements, q.elements, cfg));
    total += best;
  }
  return total / static_cast<double>(from.size());
}

double prnet_dtw(const PropagationNetwork& first, const PropagationNetwork& second,
                 const DtwConfig& cfg) {
  cfg.check();
  const auto d1 = extract_dipaths(first, cfg.max_dipaths);
  const auto d2 = extract_dipaths(second, cfg.max_dipaths);
  const double forward = dipath_set_distance(d1, d2, cfg);
  if (!cfg.symmetrize) return forward;
  return 0.5 * (forward + dipath_set_distance(d2, d1, cfg));
}

}  // namespace cascade_dtw
