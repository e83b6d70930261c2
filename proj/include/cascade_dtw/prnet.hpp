#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cascade_dtw {

/// Relationship strengths carried by one propagation arc.
struct WeightVector {
  double follow = 0.0;
  double mention = 0.0;
  double retweet = 0.0;

  /// Every component finite and in [0,1].
  bool valid() const noexcept;

  friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

struct Arc {
  std::string src;
  std::string dst;
  WeightVector weight;
  int rank = 1;  // propagation order; strictly increases along every path

  friend bool operator==(const Arc&, const Arc&) = default;
};

enum class ViolationKind {
  single_source,    // a node other than the source has in-degree 0, or the source has in-arcs
  acyclic,
  unreachable,
  rank_order,
  invalid_weight,
  duplicate_arc,
};

const char* to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::string detail;
};

inline constexpr std::size_t kDefaultMaxDipaths = 10'000;

/// A single-source, rank-ordered, arc-weighted DAG. Immutable once built.
///
/// Construction never throws on structural problems; call `validate` to
/// inspect them. Operations that need a well-formed network (dipath
/// extraction, distances) raise StructuralError instead.
class PropagationNetwork {
 public:
  /// Nodes are the source plus every arc endpoint plus `extra_nodes`.
  PropagationNetwork(std::string source, std::vector<Arc> arcs,
                     std::optional<std::string> label = std::nullopt,
                     std::vector<std::string> extra_nodes = {});

  const std::string& source() const noexcept { return source_; }
  const std::optional<std::string>& label() const noexcept { return label_; }
  /// Sorted, unique.
  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }

  /// Copy with a different label.
  PropagationNetwork with_label(std::optional<std::string> label) const;

  friend bool operator==(const PropagationNetwork&, const PropagationNetwork&) = default;

 private:
  std::string source_;
  std::vector<Arc> arcs_;
  std::optional<std::string> label_;
  std::vector<std::string> nodes_;
};

/// A maximal source-to-leaf path, as the weights of its arcs in order.
struct Dipath {
  std::vector<WeightVector> elements;
  std::vector<std::string> node_trace;
};

/// Every violated invariant; empty means the network is valid.
std::vector<Violation> validate(const PropagationNetwork& net);

/// All maximal source-to-leaf directed paths. A source-only network yields
/// an empty set. Throws StructuralError for an invalid network or when more
/// than `max_dipaths` paths exist.
std::vector<Dipath> extract_dipaths(const PropagationNetwork& net,
                                    std::size_t max_dipaths = kDefaultMaxDipaths);

/// Each component becomes 1 if positive, else 0.
WeightVector discretize(const WeightVector& v) noexcept;

/// The same network with every arc weight discretized.
PropagationNetwork discretize(const PropagationNetwork& net);

}  // namespace cascade_dtw
