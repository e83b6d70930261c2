#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cascade_dtw/prnet.hpp"

namespace cascade_dtw {

struct LabeledNetwork {
  PropagationNetwork network;
  std::string label;
};

/// Training or evaluation set: networks paired with their class labels.
class LabeledCorpus {
 public:
  LabeledCorpus() = default;
  explicit LabeledCorpus(std::vector<LabeledNetwork> entries) : entries_(std::move(entries)) {}

  /// Uses each network's own label; throws DomainError if one is missing.
  static LabeledCorpus from_networks(std::vector<PropagationNetwork> networks);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const LabeledNetwork& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<LabeledNetwork>& entries() const noexcept { return entries_; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  /// Distinct labels, sorted.
  std::vector<std::string> labels() const;
  /// Per-entry labels, in corpus order.
  std::vector<std::string> entry_labels() const;

  LabeledCorpus subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<LabeledNetwork> entries_;
};

}  // namespace cascade_dtw
