#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cascade_dtw/belief.hpp"
#include "cascade_dtw/corpus.hpp"
#include "cascade_dtw/dtw.hpp"

namespace cascade_dtw {

struct NeighborRecord {
  std::size_t train_index = 0;
  std::string label;
  double distance = 0.0;  // may be +inf
};

struct ClassificationResult {
  std::string predicted;
  /// Per-class probability: vote fraction or pignistic probability.
  std::map<std::string, double> scores;
  std::vector<NeighborRecord> neighbors;
  bool tie_broken = false;
  /// Combined neighbor evidence (evidential classifier, frames of >= 2 classes).
  std::optional<MassFunction> combined;
};

/// Estimate gamma per class from intra-class distances.
struct GammaAuto {};
using GammaSetting = std::variant<GammaAuto, double, std::map<std::string, double>>;

struct EvidentialParams {
  double alpha0 = 0.95;
  int beta = 1;
  GammaSetting gamma = GammaAuto{};

  /// Throws DomainError unless 0 < alpha0 < 1, beta >= 1 and every gamma > 0.
  void check() const;
};

struct GammaEstimate {
  std::map<std::string, double> gamma;
  /// Classes whose mean intra-class distance was zero (gamma fell back to 1).
  std::vector<std::string> fallback_classes;
};

/// Distances prnet_dtw(query, corpus[i]) for every corpus entry.
std::vector<double> query_distances(const PropagationNetwork& query, const LabeledCorpus& corpus,
                                    const DtwConfig& cfg = {});

/// The k smallest distances, ascending; equal distances keep index order.
std::vector<NeighborRecord> select_neighbors(std::span<const double> distances,
                                             std::span<const std::string> labels, std::size_t k);

std::vector<NeighborRecord> nearest_neighbors(const PropagationNetwork& query,
                                              const LabeledCorpus& corpus, std::size_t k,
                                              const DtwConfig& cfg = {});

/// Majority vote over `neighbors`. Ties go to the smallest mean distance,
/// then to the lexicographically first label.
ClassificationResult vote(std::vector<NeighborRecord> neighbors,
                          std::span<const std::string> class_labels);

/// alpha0 * exp(-gamma * d^beta); 0 for an infinite distance.
double neighbor_alpha(double alpha0, double gamma, int beta, double distance) noexcept;

/// Combine one simple mass function per neighbor and decide by maximum
/// pignistic probability. `gamma` must cover every neighbor's class.
ClassificationResult evidential_decision(std::vector<NeighborRecord> neighbors,
                                         std::span<const std::string> class_labels,
                                         double alpha0, int beta,
                                         const std::map<std::string, double>& gamma,
                                         CombinationRule rule);

ClassificationResult classify_probabilistic(const PropagationNetwork& query,
                                            const LabeledCorpus& corpus, std::size_t k,
                                            const DtwConfig& cfg = {});

/// With GammaAuto the per-class gamma is estimated from `corpus` on every
/// call; resolve it once with resolve_gamma when classifying many queries.
ClassificationResult classify_evidential(const PropagationNetwork& query,
                                         const LabeledCorpus& corpus, std::size_t k,
                                         const DtwConfig& cfg = {},
                                         const EvidentialParams& params = {},
                                         CombinationRule rule = CombinationRule::dempster);

/// gamma_i = 1 / mean(d^beta) over ordered intra-class pairs (i != j).
/// Every class needs at least two members.
GammaEstimate estimate_gamma_from_distances(
    std::span<const std::string> labels,
    const std::function<double(std::size_t, std::size_t)>& distance, int beta);

GammaEstimate estimate_gamma(const LabeledCorpus& corpus, const DtwConfig& cfg = {}, int beta = 1);

/// Per-class gamma for every corpus class, whatever the setting.
std::map<std::string, double> resolve_gamma(const GammaSetting& setting,
                                            const LabeledCorpus& corpus, const DtwConfig& cfg,
                                            int beta);

}  // namespace cascade_dtw
