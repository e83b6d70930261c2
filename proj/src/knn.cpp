#include "cascade_dtw/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cascade_dtw/errors.hpp"

namespace cascade_dtw {

namespace {

constexpr double kScoreTieTolerance = 1e-12;

std::vector<std::vector<Dipath>> decompose(const LabeledCorpus& corpus, const DtwConfig& cfg) {
  std::vector<std::vector<Dipath>> out;
  out.reserve(corpus.size());
  for (const auto& e : corpus) out.push_back(extract_dipaths(e.network, cfg.max_dipaths));
  return out;
}

double directed_distance(std::span<const Dipath> a, std::span<const Dipath> b, const DtwConfig& cfg) {
  const double forward = dipath_set_distance(a, b, cfg);
  return cfg.symmetrize ? 0.5 * (forward + dipath_set_distance(b, a, cfg)) : forward;
}

}  // namespace

void EvidentialParams::check() const {
  if (!(alpha0 > 0.0 && alpha0 < 1.0)) throw DomainError("alpha0 must lie in (0,1)");
  if (beta < 1) throw DomainError("beta must be a positive integer");
  if (const auto* g = std::get_if<double>(&gamma); g && !(*g > 0.0 && std::isfinite(*g))) {
    throw DomainError("gamma must be positive");
  }
  if (const auto* m = std::get_if<std::map<std::string, double>>(&gamma)) {
    for (const auto& [label, g] : *m)
      if (!(g > 0.0 && std::isfinite(g))) throw DomainError("gamma for class '" + label + "' must be positive");
  }
}

std::vector<double> query_distances(const PropagationNetwork& query, const LabeledCorpus& corpus,
                                    const DtwConfig& cfg) {
  cfg.check();
  const auto query_paths = extract_dipaths(query, cfg.max_dipaths);
  std::vector<double> out;
  out.reserve(corpus.size());
  for (const auto& e : corpus) {
    const auto paths = extract_dipaths(e.network, cfg.max_dipaths);
    out.push_back(directed_distance(query_paths, paths, cfg));
  }
  return out;
}

std::vector<NeighborRecord> select_neighbors(std::span<const double> distances,
                                             std::span<const std::string> labels, std::size_t k) {
  if (distances.size() != labels.size()) throw DomainError("distances and labels differ in length");
  if (k == 0) throw DomainError("k must be positive");
  if (k > distances.size()) {
    throw DomainError("k = " + std::to_string(k) + " exceeds corpus size " + std::to_string(distances.size()));
  }
  std::vector<std::size_t> order(distances.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return distances[a] != distances[b] ? distances[a] < distances[b] : a < b;
                    });
  std::vector<NeighborRecord> out;
  out.reserve(k);
  for (std::size_t r = 0; r < k; ++r) out.push_back({order[r], labels[order[r]], distances[order[r]]});
  return out;
}

std::vector<NeighborRecord> nearest_neighbors(const PropagationNetwork& query,
                                              const LabeledCorpus& corpus, std::size_t k,
                                              const DtwConfig& cfg) {
  if (k > corpus.size()) {
    throw DomainError("k = " + std::to_string(k) + " exceeds corpus size " + std::to_string(corpus.size()));
  }
  const auto distances = query_distances(query, corpus, cfg);
  const auto labels = corpus.entry_labels();
  return select_neighbors(distances, labels, k);
}

ClassificationResult vote(std::vector<NeighborRecord> neighbors,
                          std::span<const std::string> class_labels) {
  if (neighbors.empty()) throw DomainError("vote: no neighbors");
  struct Tally {
    std::size_t count = 0;
    double distance_sum = 0.0;
  };
  std::map<std::string, Tally> tally;
  for (const auto& label : class_labels) tally[label];
  for (const auto& n : neighbors) {
    auto& t = tally[n.label];
    ++t.count;
    t.distance_sum += n.distance;
  }

  std::size_t best_count = 0;
  for (const auto& [label, t] : tally) best_count = std::max(best_count, t.count);

  ClassificationResult result;
  std::size_t tied = 0;
  double best_mean = std::numeric_limits<double>::infinity();
  // std::map iterates labels in lexicographic order, so the first strict
  // improvement wins the final tiebreak.
  for (const auto& [label, t] : tally) {
    if (t.count != best_count) continue;
    const double mean = t.distance_sum / static_cast<double>(t.count);
    if (tied++ == 0 || mean < best_mean) {
      best_mean = mean;
      result.predicted = label;
    }
  }
  result.tie_broken = tied > 1;
  for (const auto& [label, t] : tally) {
    result.scores[label] = static_cast<double>(t.count) / static_cast<double>(neighbors.size());
  }
  result.neighbors = std::move(neighbors);
  return result;
}

double neighbor_alpha(double alpha0, double gamma, int beta, double distance) noexcept {
  if (std::isinf(distance)) return 0.0;
  return alpha0 * std::exp(-gamma * std::pow(distance, beta));
}

ClassificationResult evidential_decision(std::vector<NeighborRecord> neighbors,
                                         std::span<const std::string> class_labels,
                                         double alpha0, int beta,
                                         const std::map<std::string, double>& gamma,
                                         CombinationRule rule) {
  if (neighbors.empty()) throw DomainError("evidential_decision: no neighbors");
  std::vector<std::string> sorted_labels(class_labels.begin(), class_labels.end());
  std::sort(sorted_labels.begin(), sorted_labels.end());
  sorted_labels.erase(std::unique(sorted_labels.begin(), sorted_labels.end()), sorted_labels.end());

  ClassificationResult result;
  if (sorted_labels.size() == 1) {
    // A one-class frame carries no uncertainty to combine.
    result.predicted = sorted_labels.front();
    result.scores[result.predicted] = 1.0;
    result.neighbors = std::move(neighbors);
    return result;
  }

  const Frame frame(sorted_labels);
  MassFunction combined = MassFunction::vacuous(frame);
  for (const auto& n : neighbors) {
    const auto g = gamma.find(n.label);
    if (g == gamma.end()) throw DomainError("no gamma for class '" + n.label + "'");
    const double alpha = neighbor_alpha(alpha0, g->second, beta, n.distance);
    if (alpha <= 0.0) continue;  // vacuous evidence
    combined = combine(combined, simple_bba(frame, n.label, alpha), rule);
  }

  const auto betp = pignistic(combined);
  std::size_t best = 0;
  std::size_t tied = 1;
  for (std::size_t i = 1; i < betp.size(); ++i) {
    if (betp[i] > betp[best] + kScoreTieTolerance) {
      best = i;
      tied = 1;
    } else if (std::abs(betp[i] - betp[best]) <= kScoreTieTolerance) {
      ++tied;
    }
  }
  result.predicted = sorted_labels[best];
  result.tie_broken = tied > 1;
  for (std::size_t i = 0; i < betp.size(); ++i) result.scores[sorted_labels[i]] = betp[i];
  result.neighbors = std::move(neighbors);
  result.combined = std::move(combined);
  return result;
}

ClassificationResult classify_probabilistic(const PropagationNetwork& query,
                                            const LabeledCorpus& corpus, std::size_t k,
                                            const DtwConfig& cfg) {
  const auto labels = corpus.labels();
  return vote(nearest_neighbors(query, corpus, k, cfg), labels);
}

ClassificationResult classify_evidential(const PropagationNetwork& query,
                                         const LabeledCorpus& corpus, std::size_t k,
                                         const DtwConfig& cfg, const EvidentialParams& params,
                                         CombinationRule rule) {
  params.check();
  auto neighbors = nearest_neighbors(query, corpus, k, cfg);
  const auto labels = corpus.labels();
  std::map<std::string, double> gamma;
  if (labels.size() > 1) gamma = resolve_gamma(params.gamma, corpus, cfg, params.beta);
  return evidential_decision(std::move(neighbors), labels, params.alpha0, params.beta, gamma, rule);
}

GammaEstimate estimate_gamma_from_distances(
    std::span<const std::string> labels,
    const std::function<double(std::size_t, std::size_t)>& distance, int beta) {
  if (beta < 1) throw DomainError("beta must be a positive integer");
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);

  GammaEstimate out;
  for (const auto& [label, idx] : members) {
    if (idx.size() < 2) {
      throw DomainError("class '" + label + "' needs at least 2 members to estimate gamma");
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (auto i : idx) {
      for (auto j : idx) {
        if (i == j) continue;
        const double d = distance(i, j);
        if (std::isinf(d)) continue;
        sum += std::pow(d, beta);
        ++count;
      }
    }
    const double mean = count == 0 ? 0.0 : sum / static_cast<double>(count);
    if (mean > 0.0) {
      out.gamma[label] = 1.0 / mean;
    } else {
      out.gamma[label] = 1.0;
      out.fallback_classes.push_back(label);
    }
  }
  return out;
}

GammaEstimate estimate_gamma(const LabeledCorpus& corpus, const DtwConfig& cfg, int beta) {
  cfg.check();
  const auto paths = decompose(corpus, cfg);
  const auto labels = corpus.entry_labels();
  return estimate_gamma_from_distances(
      labels, [&](std::size_t i, std::size_t j) { return directed_distance(paths[i], paths[j], cfg); },
      beta);
}

std::map<std::string, double> resolve_gamma(const GammaSetting& setting,
                                            const LabeledCorpus& corpus, const DtwConfig& cfg,
                                            int beta) {
  const auto labels = corpus.labels();
  if (std::holds_alternative<GammaAuto>(setting)) return estimate_gamma(corpus, cfg, beta).gamma;
  std::map<std::string, double> out;
  if (const auto* global = std::get_if<double>(&setting)) {
    for (const auto& label : labels) out[label] = *global;
    return out;
  }
  out = std::get<std::map<std::string, double>>(setting);
  for (const auto& label : labels)
    if (!out.contains(label)) throw DomainError("no gamma given for class '" + label + "'");
  return out;
}

}  // namespace cascade_dtw
