#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cascade_dtw/prnet.hpp"

namespace cascade_dtw {

struct FollowEvent {
  std::string follower;
  std::string followee;
};

struct TweetEvent {
  std::string id;
  std::string user;
  std::string label;
  std::int64_t ts = 0;
};

struct RetweetEvent {
  std::string user;
  std::string original;  // tweet id
  std::int64_t ts = 0;
};

struct MentionEvent {
  std::string tweet;
  std::string by;
  std::string of;
};

/// Raw social interactions. Event log lines (JSON Lines):
///   {"type":"follow","src":u,"dst":v}            u follows v
///   {"type":"tweet","id":t,"user":u,"label":c,"ts":s}
///   {"type":"retweet","user":u,"orig":t,"ts":s}
///   {"type":"mention","tweet":t,"by":u,"of":v}
struct InteractionLog {
  std::vector<FollowEvent> follows;
  std::vector<TweetEvent> tweets;
  std::vector<RetweetEvent> retweets;
  std::vector<MentionEvent> mentions;
};

/// Throws ParseError (with line number) on malformed lines, unknown event
/// types, duplicate tweet ids, two tweets of one user sharing a timestamp,
/// or references to unknown tweets.
InteractionLog parse_log(std::istream& in);
InteractionLog parse_log(const std::filesystem::path& path);

/// How the follow weight is computed.
enum class FollowWeightMode {
  /// |S_u ∩ P_u| / |S_u| when v follows u, else 0.
  reciprocal,
  /// |S_u ∩ (P_u ∩ {u})| / |S_u|, exactly as the formula is usually printed (always 0
  /// unless u follows itself).
  literal,
};

/// Per-user tallies the arc weights are computed from.
class UserStats {
 public:
  explicit UserStats(const InteractionLog& log);

  bool knows(const std::string& user) const { return users_.contains(user); }
  /// Users that `user` follows.
  const std::set<std::string>& successors(const std::string& user) const;
  /// Followers of `user`.
  const std::set<std::string>& predecessors(const std::string& user) const;
  std::size_t tweet_count(const std::string& user) const;
  /// Tweets of `author` retweeted by `by`.
  std::size_t retweeted_by(const std::string& author, const std::string& by) const;
  /// Tweets of `author` mentioning `target`.
  std::size_t mentions_of(const std::string& author, const std::string& target) const;
  /// Tweets of `author` mentioning anyone.
  std::size_t mention_tweets(const std::string& author) const;

 private:
  std::set<std::string> users_;
  std::map<std::string, std::set<std::string>> successors_;
  std::map<std::string, std::set<std::string>> predecessors_;
  std::map<std::string, std::size_t> tweets_;
  std::map<std::pair<std::string, std::string>, std::set<std::string>> retweeted_;
  std::map<std::pair<std::string, std::string>, std::set<std::string>> mentioned_;
  std::map<std::string, std::set<std::string>> mention_tweets_;
};

/// Weight of the propagation arc u -> v. Throws DomainError for an unknown
/// user or u == v.
WeightVector compute_weights(const UserStats& stats, const std::string& u, const std::string& v,
                             FollowWeightMode mode = FollowWeightMode::reciprocal);
WeightVector compute_weights(const InteractionLog& log, const std::string& u, const std::string& v,
                             FollowWeightMode mode = FollowWeightMode::reciprocal);

struct TraceOptions {
  FollowWeightMode follow_mode = FollowWeightMode::reciprocal;
  /// Keep only the latest qualifying earlier propagator as each user's parent.
  bool tree_mode = false;
};

/// Propagation networks of one message class, one per propagation source,
/// labelled with `label`. Networks without arcs are dropped.
std::vector<PropagationNetwork> build_traces(const InteractionLog& log, const std::string& label,
                                             const TraceOptions& options = {});

struct ClassStats {
  std::size_t users = 0;  // distinct users across the class's networks
  std::size_t links = 0;
  std::size_t networks = 0;
};

/// Keyed by label; unlabeled networks are counted under "".
std::map<std::string, ClassStats> dataset_stats(const std::vector<PropagationNetwork>& networks);

/// Plain-text table with #User, #Prop. links and #PrNet columns.
std::string format_stats_table(const std::map<std::string, ClassStats>& stats);

}  // namespace cascade_dtw
