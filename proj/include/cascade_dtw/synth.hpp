#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cascade_dtw/corpus.hpp"

namespace cascade_dtw {

/// Shape and weight distribution of one synthetic message class.
struct ClassProfile {
  std::string label;
  std::pair<int, int> depth_range{1, 1};      // arc levels below the source
  std::pair<int, int> branching_range{1, 1};  // children per internal node
  std::array<double, 3> weight_means{0.0, 0.0, 0.0};
  double weight_noise = 0.0;  // half-width of the uniform noise

  /// Throws DomainError for empty or inverted ranges, depth or branching
  /// below 1, means outside [0,1] or negative noise.
  void check() const;
};

struct GeneratorOptions {
  /// Probability that a new node also receives an arc from a second node
  /// of the previous level, turning the tree into a DAG.
  double merge_probability = 0.0;
};

/// n_per_class networks per profile, in profile order. Deterministic for a
/// given seed.
LabeledCorpus generate(const std::vector<ClassProfile>& profiles, std::size_t n_per_class,
                       std::uint64_t seed, const GeneratorOptions& options = {});

/// Profile files are a JSON array of objects with the ClassProfile field
/// names: label, depth_range, branching_range, weight_means, weight_noise.
std::vector<ClassProfile> read_profiles(const std::filesystem::path& path);
std::vector<ClassProfile> profiles_from_json(const std::string& text);

}  // namespace cascade_dtw
