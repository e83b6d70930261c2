#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "cascade_dtw/prnet.hpp"

namespace cascade_dtw {

enum class ElementDistance { euclidean, manhattan };

struct DtwConfig {
  ElementDistance element_distance = ElementDistance::euclidean;
  /// Distance between an arc-less network and one with arcs.
  double empty_vs_nonempty_distance = std::numeric_limits<double>::infinity();
  /// Average both argument orders of prnet_dtw.
  bool symmetrize = false;
  std::size_t max_dipaths = kDefaultMaxDipaths;

  /// Throws DomainError if empty_vs_nonempty_distance is negative or NaN.
  void check() const;
};

double delta(const WeightVector& a, const WeightVector& b,
             ElementDistance kind = ElementDistance::euclidean) noexcept;

/// Memoization table for one DTW evaluation: (|A|+1) x (|B|+1), row-major.
/// Row and column 0 are the boundary: cost(0,0) = 0, the rest +inf.
class DtwMatrix {
 public:
  DtwMatrix(std::span<const WeightVector> a, std::span<const WeightVector> b,
            ElementDistance kind = ElementDistance::euclidean);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return costs_[i * cols_ + j]; }
  /// Cost of aligning the full sequences.
  double distance() const noexcept { return costs_.back(); }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> costs_;
};

/// Unconstrained DTW in O(|A|*|B|). Throws DomainError on an empty input.
double dtw(std::span<const WeightVector> a, std::span<const WeightVector> b,
           const DtwConfig& cfg = {});

inline constexpr std::size_t kNaiveDtwMaxLength = 8;

/// The DTW recursion evaluated literally, without memoization. Exponential;
/// kept as a reference oracle. Refuses sequences longer than 8.
double dtw_naive(std::span<const WeightVector> a, std::span<const WeightVector> b,
                 const DtwConfig& cfg = {});

/// Mean over `from` of the minimal DTW distance to any dipath of `to`.
/// Ignores cfg.symmetrize.
double dipath_set_distance(std::span<const Dipath> from, std::span<const Dipath> to,
                           const DtwConfig& cfg = {});

/// Network distance driven by the dipaths of `first`; see dipath_set_distance.
/// With cfg.symmetrize the two argument orders are averaged.
double prnet_dtw(const PropagationNetwork& first, const PropagationNetwork& second,
                 const DtwConfig& cfg = {});

}  // namespace cascade_dtw
