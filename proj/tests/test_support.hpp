#pragma once

// Shared generators and brute-force oracles for the test suites. Nothing
// here calls into the implementation it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cascade_dtw/ingest.hpp"
#include "cascade_dtw/prnet.hpp"
#include "cascade_dtw/synth.hpp"

namespace cascade_dtw::fixtures {

inline WeightVector random_weight(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {u(rng), u(rng), u(rng)};
}

inline std::vector<WeightVector> random_sequence(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::vector<WeightVector> out(len(rng));
  for (auto& w : out) w = random_weight(rng);
  return out;
}

/// Random single-source DAG on `n` nodes: node i > 0 gets 1..3 parents among
/// nodes < i, arc rank = longest hop depth of the parent + 1.
inline PropagationNetwork random_dag(std::mt19937_64& rng, std::size_t n, std::string label = "x") {
  std::vector<int> depth(n, 0);
  std::vector<Arc> arcs;
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, v - 1);
    std::set<std::size_t> parents;
    const std::size_t want = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(3, v))(rng);
    while (parents.size() < want) parents.insert(pick(rng));
    for (auto u : parents) depth[v] = std::max(depth[v], depth[u] + 1);
    for (auto u : parents) {
      arcs.push_back({"v" + std::to_string(u), "v" + std::to_string(v), random_weight(rng), depth[u] + 1});
    }
  }
  std::shuffle(arcs.begin(), arcs.end(), rng);
  return PropagationNetwork("v0", std::move(arcs), std::move(label));
}

/// Maximal source-to-leaf paths counted by plain recursion over an
/// adjacency map built from the arc list.
inline std::size_t brute_force_path_count(const PropagationNetwork& net) {
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& a : net.arcs()) children[a.src].push_back(a.dst);
  std::function<std::size_t(const std::string&)> count = [&](const std::string& v) -> std::size_t {
    const auto it = children.find(v);
    if (it == children.end()) return 1;
    std::size_t total = 0;
    for (const auto& c : it->second) total += count(c);
    return total;
  };
  return children.contains(net.source()) ? count(net.source()) : 0;
}

inline double euclid(const WeightVector& a, const WeightVector& b) {
  return std::sqrt((a.follow - b.follow) * (a.follow - b.follow) + (a.mention - b.mention) * (a.mention - b.mention) +
                   (a.retweet - b.retweet) * (a.retweet - b.retweet));
}

/// Minimum summed cost over every monotone warping path, by explicit
/// enumeration of the paths.
inline double brute_force_dtw(const std::vector<WeightVector>& a, const std::vector<WeightVector>& b) {
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j, double acc) {
    acc += euclid(a[i], b[j]);
    if (i + 1 == a.size() && j + 1 == b.size()) {
      best = std::min(best, acc);
      return;
    }
    if (i + 1 < a.size() && j + 1 < b.size()) walk(i + 1, j + 1, acc);
    if (j + 1 < b.size()) walk(i, j + 1, acc);
    if (i + 1 < a.size()) walk(i + 1, j, acc);
  };
  walk(0, 0, 0.0);
  return best;
}

/// Mass function over label sets, for set-algebra oracles.
using SetMass = std::map<std::set<std::string>, double>;

inline SetMass set_product(const SetMass& m1, const SetMass& m2, bool intersect) {
  SetMass out;
  for (const auto& [b, x] : m1) {
    for (const auto& [c, y] : m2) {
      std::set<std::string> r;
      if (intersect) {
        std::set_intersection(b.begin(), b.end(), c.begin(), c.end(), std::inserter(r, r.end()));
      } else {
        std::set_union(b.begin(), b.end(), c.begin(), c.end(), std::inserter(r, r.end()));
      }
      out[r] += x * y;
    }
  }
  return out;
}

inline SetMass set_dempster(const SetMass& m1, const SetMass& m2) {
  auto out = set_product(m1, m2, true);
  const std::set<std::string> empty;
  const double conflict = out.contains(empty) ? out[empty] : 0.0;
  out.erase(empty);
  for (auto& [s, m] : out) m /= (1.0 - conflict);
  return out;
}

inline std::map<std::string, double> set_pignistic(const SetMass& m) {
  const std::set<std::string> empty;
  const double conflict = m.contains(empty) ? m.at(empty) : 0.0;
  std::map<std::string, double> out;
  for (const auto& [s, mass] : m)
    for (const auto& label : s) out[label] += mass / (static_cast<double>(s.size()) * (1.0 - conflict));
  return out;
}

/// The two-class benchmark corpus profile used by the end-to-end checks.
inline std::vector<ClassProfile> benchmark_profiles() {
  return {
      ClassProfile{"follow_heavy", {2, 4}, {1, 3}, {0.9, 0.1, 0.1}, 0.05},
      ClassProfile{"retweet_heavy", {2, 4}, {1, 3}, {0.1, 0.1, 0.9}, 0.05},
  };
}

/// Random interaction log over `users` users and labels {a, b}. Every tweet
/// gets a distinct timestamp.
inline InteractionLog random_log(std::mt19937_64& rng, std::size_t users) {
  InteractionLog log;
  auto user = [](std::size_t i) { return "u" + std::to_string(i); };
  std::uniform_int_distribution<std::size_t> pick_user(0, users - 1);
  std::uniform_int_distribution<int> tweets_per_user(0, 4);
  std::bernoulli_distribution coin(0.5);

  std::vector<std::int64_t> stamps(users * 4);
  for (std::size_t i = 0; i < stamps.size(); ++i) stamps[i] = static_cast<std::int64_t>(100 + 7 * i);
  std::shuffle(stamps.begin(), stamps.end(), rng);
  std::size_t next_stamp = 0;
  for (std::size_t u = 0; u < users; ++u) {
    for (int t = tweets_per_user(rng); t > 0; --t) {
      log.tweets.push_back({"t" + std::to_string(log.tweets.size()), user(u), coin(rng) ? "a" : "b",
                            stamps[next_stamp++]});
    }
  }
  for (std::size_t i = 0; i < users * 2; ++i) {
    const auto a = pick_user(rng), b = pick_user(rng);
    if (a != b) log.follows.push_back({user(a), user(b)});
  }
  if (!log.tweets.empty()) {
    std::uniform_int_distribution<std::size_t> pick_tweet(0, log.tweets.size() - 1);
    for (std::size_t i = 0; i < users; ++i) {
      const auto& t = log.tweets[pick_tweet(rng)];
      log.retweets.push_back({user(pick_user(rng)), t.id, t.ts + 1});
    }
    for (std::size_t i = 0; i < users; ++i) {
      const auto& t = log.tweets[pick_tweet(rng)];
      const auto target = user(pick_user(rng));
      if (target != t.user) log.mentions.push_back({t.id, t.user, target});
    }
  }
  return log;
}

/// Every event twice: copies get fresh tweet ids and timestamps shifted past
/// the last original one, so each user's first tweet is unchanged.
inline InteractionLog duplicate_log(const InteractionLog& log) {
  InteractionLog out = log;
  std::int64_t offset = 1;
  for (const auto& t : log.tweets) offset = std::max(offset, t.ts + 1000);
  for (const auto& r : log.retweets) offset = std::max(offset, r.ts + 1000);
  out.follows.insert(out.follows.end(), log.follows.begin(), log.follows.end());
  for (const auto& t : log.tweets) out.tweets.push_back({t.id + "_dup", t.user, t.label, t.ts + offset});
  for (const auto& r : log.retweets) out.retweets.push_back({r.user, r.original + "_dup", r.ts + offset});
  for (const auto& m : log.mentions) out.mentions.push_back({m.tweet + "_dup", m.by, m.of});
  return out;
}

/// Each user's earliest tweet time for `label`, straight from the log.
inline std::map<std::string, std::int64_t> first_tweet_times(const InteractionLog& log, const std::string& label) {
  std::map<std::string, std::int64_t> out;
  for (const auto& t : log.tweets) {
    if (t.label != label) continue;
    auto [it, fresh] = out.emplace(t.user, t.ts);
    if (!fresh) it->second = std::min(it->second, t.ts);
  }
  return out;
}

}  // namespace cascade_dtw::fixtures
