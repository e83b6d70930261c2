#include "cascade_dtw/corpus.hpp"

#include <set>

#include "cascade_dtw/errors.hpp"

namespace cascade_dtw {

LabeledCorpus LabeledCorpus::from_networks(std::vector<PropagationNetwork> networks) {
  std::vector<LabeledNetwork> entries;
  entries.reserve(networks.size());
  for (std::size_t i = 0; i < networks.size(); ++i) {
    if (!networks[i].label()) {
      throw DomainError("network " + std::to_string(i) + " (source " + networks[i].source() +
                        ") has no class label");
    }
    std::string label = *networks[i].label();
    entries.push_back({std::move(networks[i]), std::move(label)});
  }
  return LabeledCorpus(std::move(entries));
}

std::vector<std::string> LabeledCorpus::labels() const {
  std::set<std::string> distinct;
  for (const auto& e : entries_) distinct.insert(e.label);
  return {distinct.begin(), distinct.end()};
}

std::vector<std::string> LabeledCorpus::entry_labels() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.label);
  return out;
}

LabeledCorpus LabeledCorpus::subset(std::span<const std::size_t> indices) const {
  std::vector<LabeledNetwork> picked;
  picked.reserve(indices.size());
  for (auto i : indices) picked.push_back(entries_.at(i));
  return LabeledCorpus(std::move(picked));
}

}  // namespace cascade_dtw
