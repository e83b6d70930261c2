#include "cascade_dtw/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "cascade_dtw/errors.hpp"
#include "json.hpp"

namespace cascade_dtw {

namespace {

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

PropagationNetwork random_cascade(const ClassProfile& p, double merge_probability, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> depth_dist(p.depth_range.first, p.depth_range.second);
  std::uniform_int_distribution<int> branch_dist(p.branching_range.first, p.branching_range.second);
  std::uniform_real_distribution<double> noise(-p.weight_noise, p.weight_noise);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  auto weight = [&] {
    return WeightVector{clamp_unit(p.weight_means[0] + noise(rng)), clamp_unit(p.weight_means[1] + noise(rng)),
                        clamp_unit(p.weight_means[2] + noise(rng))};
  };

  const int depth = depth_dist(rng);
  std::size_t next_id = 0;
  auto fresh = [&] { return "n" + std::to_string(next_id++); };

  const std::string source = fresh();
  std::vector<std::string> level{source};
  std::vector<Arc> arcs;
  for (int rank = 1; rank <= depth; ++rank) {
    std::vector<std::string> next_level;
    for (const auto& parent : level) {
      const int children = branch_dist(rng);
      for (int c = 0; c < children; ++c) {
        const auto child = fresh();
        arcs.push_back({parent, child, weight(), rank});
        if (level.size() > 1 && coin(rng) < merge_probability) {
          std::uniform_int_distribution<std::size_t> pick(0, level.size() - 2);
          auto other = pick(rng);
          if (level[other] == parent) other = level.size() - 1;
          arcs.push_back({level[other], child, weight(), rank});
        }
        next_level.push_back(child);
      }
    }
    level = std::move(next_level);
  }
  return PropagationNetwork(source, std::move(arcs), p.label);
}

}  // namespace

void ClassProfile::check() const {
  if (label.empty()) throw DomainError("profile label must be non-empty");
  if (depth_range.first < 1 || depth_range.first > depth_range.second) {
    throw DomainError("profile '" + label + "': depth_range must satisfy 1 <= min <= max");
  }
  if (branching_range.first < 1 || branching_range.first > branching_range.second) {
    throw DomainError("profile '" + label + "': branching_range must satisfy 1 <= min <= max");
  }
  for (double m : weight_means) {
    if (!(m >= 0.0 && m <= 1.0)) throw DomainError("profile '" + label + "': weight means must lie in [0,1]");
  }
  if (!(weight_noise >= 0.0) || !std::isfinite(weight_noise)) {
    throw DomainError("profile '" + label + "': weight_noise must be >= 0");
  }
}

LabeledCorpus generate(const std::vector<ClassProfile>& profiles, std::size_t n_per_class,
                       std::uint64_t seed, const GeneratorOptions& options) {
  if (profiles.empty()) throw DomainError("generate: no class profiles");
  if (n_per_class == 0) throw DomainError("generate: n_per_class must be positive");
  if (!(options.merge_probability >= 0.0 && options.merge_probability <= 1.0)) {
    throw DomainError("generate: merge_probability must lie in [0,1]");
  }
  std::set<std::string> labels;
  for (const auto& p : profiles) {
    p.check();
    if (!labels.insert(p.label).second) throw DomainError("generate: duplicate profile label '" + p.label + "'");
  }

  std::mt19937_64 rng(seed);
  std::vector<LabeledNetwork> entries;
  entries.reserve(profiles.size() * n_per_class);
  for (const auto& p : profiles) {
    for (std::size_t i = 0; i < n_per_class; ++i) {
      entries.push_back({random_cascade(p, options.merge_probability, rng), p.label});
    }
  }
  return LabeledCorpus(std::move(entries));
}

std::vector<ClassProfile> profiles_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, e.what());
  }
  if (!doc.is_array()) throw ParseError(0, "profile file must hold a JSON array");
  std::vector<ClassProfile> out;
  for (const auto& obj : doc) {
    try {
      ClassProfile p;
      p.label = obj.at("label").get<std::string>();
      const auto depth = obj.at("depth_range").get<std::vector<int>>();
      const auto branching = obj.at("branching_range").get<std::vector<int>>();
      const auto means = obj.at("weight_means").get<std::vector<double>>();
      if (depth.size() != 2 || branching.size() != 2 || means.size() != 3) {
        throw ParseError(0, "profile ranges need 2 entries and weight_means 3");
      }
      p.depth_range = {depth[0], depth[1]};
      p.branching_range = {branching[0], branching[1]};
      p.weight_means = {means[0], means[1], means[2]};
      p.weight_noise = obj.at("weight_noise").get<double>();
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(0, std::string("bad profile: ") + e.what());
    }
  }
  return out;
}

std::vector<ClassProfile> read_profiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return profiles_from_json(buf.str());
}

}  // namespace cascade_dtw
