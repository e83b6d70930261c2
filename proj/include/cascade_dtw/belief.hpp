#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cascade_dtw {

/// Subset of a frame, bit i set when the frame's i-th label is included.
using Subset = std::uint32_t;

inline constexpr double kMassTolerance = 1e-9;

/// Ordered set of 2..32 mutually exclusive class labels.
class Frame {
 public:
  explicit Frame(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  /// Bitmask of the whole frame.
  Subset omega() const noexcept;
  /// Throws DomainError for an unknown label.
  std::size_t index_of(std::string_view label) const;
  Subset singleton(std::string_view label) const { return Subset{1} << index_of(label); }
  /// Labels in `set`, in frame order.
  std::vector<std::string> members(Subset set) const;

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::vector<std::string> labels_;
};

/// Basic belief assignment over a frame. Only focal sets are stored;
/// the empty set (mask 0) may carry mass after conjunctive combination.
class MassFunction {
 public:
  /// Drops zero entries. Throws DomainError on negative or non-finite
  /// masses, masks outside the frame, or a total further than 1e-9 from 1;
  /// smaller drifts are renormalized away.
  MassFunction(Frame frame, std::map<Subset, double> masses);

  static MassFunction vacuous(Frame frame);

  const Frame& frame() const noexcept { return frame_; }
  const std::map<Subset, double>& focal() const noexcept { return masses_; }
  double mass(Subset set) const noexcept;
  /// Mass on the empty set.
  double conflict() const noexcept { return mass(0); }

 private:
  Frame frame_;
  std::map<Subset, double> masses_;
};

/// m({label}) = alpha, m(frame) = 1 - alpha. alpha must lie in (0,1).
MassFunction simple_bba(const Frame& frame, std::string_view label, double alpha);

/// Unnormalized conjunctive rule; conflict stays on the empty set.
MassFunction combine_conjunctive(const MassFunction& m1, const MassFunction& m2);

/// Conjunctive rule followed by normalization. Throws ConflictError when
/// the evidence is totally conflicting.
MassFunction combine_dempster(const MassFunction& m1, const MassFunction& m2);

MassFunction combine_disjunctive(const MassFunction& m1, const MassFunction& m2);

enum class CombinationRule { dempster, conjunctive, disjunctive };

const char* to_string(CombinationRule rule) noexcept;
/// Accepts "dempster", "conjunctive", "disjunctive".
CombinationRule parse_combination_rule(std::string_view name);

MassFunction combine(const MassFunction& m1, const MassFunction& m2, CombinationRule rule);

/// Pignistic probabilities, indexed like frame().labels(). The empty-set
/// mass is discarded by renormalizing. Throws DomainError when m(empty) = 1.
std::vector<double> pignistic(const MassFunction& m);

}  // namespace cascade_dtw
