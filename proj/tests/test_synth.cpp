#include <gtest/gtest.h>

#include <map>

#include "cascade_dtw/dtw.hpp"
#include "cascade_dtw/errors.hpp"
#include "cascade_dtw/synth.hpp"
#include "test_support.hpp"

using namespace cascade_dtw;

TEST(Generate, DeterministicPerSeed) {
  const auto profiles = fixtures::benchmark_profiles();
  const auto a = generate(profiles, 5, 17);
  const auto b = generate(profiles, 5, 17);
  const auto c = generate(profiles, 5, 18);
  ASSERT_EQ(a.size(), b.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].network, b[i].network);
    differs = differs || !(a[i].network == c[i].network);
  }
  EXPECT_TRUE(differs);
}

TEST(Generate, SizesLabelsAndValidity) {
  auto profiles = fixtures::benchmark_profiles();
  profiles.push_back({"mention_heavy", {1, 2}, {2, 2}, {0.1, 0.9, 0.1}, 0.2});
  const auto corpus = generate(profiles, 5, 3);
  ASSERT_EQ(corpus.size(), 15u);
  std::map<std::string, int> per_class;
  for (const auto& e : corpus) {
    ++per_class[e.label];
    EXPECT_EQ(e.network.label(), std::optional<std::string>(e.label));
    EXPECT_TRUE(validate(e.network).empty());
    EXPECT_FALSE(e.network.arcs().empty());
    for (const auto& arc : e.network.arcs()) {
      EXPECT_TRUE(arc.weight.valid());
      EXPECT_GE(arc.rank, 1);
    }
  }
  for (const auto& [label, n] : per_class) EXPECT_EQ(n, 5) << label;
  EXPECT_EQ(per_class.size(), 3u);
}

TEST(Generate, DepthStaysInRange) {
  const ClassProfile p{"x", {2, 3}, {1, 2}, {0.5, 0.5, 0.5}, 0.0};
  const auto corpus = generate({p}, 30, 9);
  for (const auto& e : corpus) {
    for (const auto& path : extract_dipaths(e.network)) {
      EXPECT_GE(path.elements.size(), 1u);
      EXPECT_LE(path.elements.size(), 3u);
    }
    for (const auto& arc : e.network.arcs()) EXPECT_EQ(arc.weight, (WeightVector{0.5, 0.5, 0.5}));
  }
}

TEST(Generate, MergesKeepNetworksValid) {
  GeneratorOptions opts;
  opts.merge_probability = 0.5;
  const ClassProfile p{"x", {3, 4}, {2, 3}, {0.3, 0.3, 0.3}, 0.1};
  std::size_t merged = 0;
  for (const auto& e : generate({p}, 20, 4, opts)) {
    EXPECT_TRUE(validate(e.network).empty());
    std::map<std::string, int> indeg;
    for (const auto& arc : e.network.arcs()) ++indeg[arc.dst];
    for (const auto& [v, d] : indeg) merged += d > 1;
  }
  EXPECT_GT(merged, 0u);
}

TEST(Generate, ClassesAreFartherApartThanWithin) {
  const auto corpus = generate(fixtures::benchmark_profiles(), 10, 1);
  double within = 0.0, across = 0.0;
  std::size_t nw = 0, na = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t j = 0; j < corpus.size(); ++j) {
      if (i == j) continue;
      const double d = prnet_dtw(corpus[i].network, corpus[j].network);
      if (corpus[i].label == corpus[j].label) {
        within += d;
        ++nw;
      } else {
        across += d;
        ++na;
      }
    }
  }
  EXPECT_GT(across / na, 2.0 * within / nw);
}

TEST(ClassProfile, Check) {
  EXPECT_THROW((ClassProfile{"x", {0, 1}, {1, 1}, {0, 0, 0}, 0}.check()), DomainError);
  EXPECT_THROW((ClassProfile{"x", {3, 2}, {1, 1}, {0, 0, 0}, 0}.check()), DomainError);
  EXPECT_THROW((ClassProfile{"x", {1, 1}, {0, 1}, {0, 0, 0}, 0}.check()), DomainError);
  EXPECT_THROW((ClassProfile{"x", {1, 1}, {1, 1}, {1.5, 0, 0}, 0}.check()), DomainError);
  EXPECT_THROW((ClassProfile{"x", {1, 1}, {1, 1}, {0, 0, 0}, -0.1}.check()), DomainError);
  EXPECT_THROW(generate({ClassProfile{"x", {0, 1}, {1, 1}, {0, 0, 0}, 0}}, 1, 0), DomainError);
}

TEST(Profiles, FromJson) {
  const auto profiles = profiles_from_json(R"([
    {"label": "a", "depth_range": [2, 4], "branching_range": [1, 3],
     "weight_means": [0.9, 0.1, 0.1], "weight_noise": 0.05}
  ])");
  ASSERT_EQ(profiles.size(), 1u);
  EXPECT_EQ(profiles[0].label, "a");
  EXPECT_EQ(profiles[0].depth_range, (std::pair<int, int>{2, 4}));
  EXPECT_DOUBLE_EQ(profiles[0].weight_means[0], 0.9);
  EXPECT_THROW(profiles_from_json("{}"), ParseError);
  EXPECT_THROW(profiles_from_json("[{\"label\": 3}]"), ParseError);
}
