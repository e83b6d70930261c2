#include "cascade_dtw/ingest.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>
#include <unordered_map>

#include "cascade_dtw/errors.hpp"
#include "json.hpp"

namespace cascade_dtw {

namespace {

using nlohmann::json;

std::string string_field(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw ParseError(line, std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

std::int64_t int_field(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    throw ParseError(line, std::string("field '") + key + "' must be an integer");
  }
  return it->get<std::int64_t>();
}

const std::set<std::string> kNoUsers;

std::size_t count_in(const std::map<std::pair<std::string, std::string>, std::set<std::string>>& m,
                     const std::string& a, const std::string& b) {
  const auto it = m.find({a, b});
  return it == m.end() ? 0 : it->second.size();
}

}  // namespace

InteractionLog parse_log(std::istream& in) {
  InteractionLog log;
  std::vector<std::size_t> retweet_lines;
  std::vector<std::size_t> mention_lines;
  std::unordered_map<std::string, std::size_t> tweet_index;
  std::set<std::pair<std::string, std::int64_t>> user_times;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(lineno, e.what());
    }
    if (!obj.is_object()) throw ParseError(lineno, "expected a JSON object");
    const auto type = string_field(obj, "type", lineno);
    if (type == "follow") {
      log.follows.push_back({string_field(obj, "src", lineno), string_field(obj, "dst", lineno)});
    } else if (type == "tweet") {
      TweetEvent t{string_field(obj, "id", lineno), string_field(obj, "user", lineno),
                   string_field(obj, "label", lineno), int_field(obj, "ts", lineno)};
      if (!tweet_index.emplace(t.id, log.tweets.size()).second) {
        throw ParseError(lineno, "duplicate tweet id '" + t.id + "'");
      }
      if (!user_times.emplace(t.user, t.ts).second) {
        throw ParseError(lineno, "user '" + t.user + "' has two tweets at ts " + std::to_string(t.ts));
      }
      log.tweets.push_back(std::move(t));
    } else if (type == "retweet") {
      log.retweets.push_back(
          {string_field(obj, "user", lineno), string_field(obj, "orig", lineno), int_field(obj, "ts", lineno)});
      retweet_lines.push_back(lineno);
    } else if (type == "mention") {
      log.mentions.push_back(
          {string_field(obj, "tweet", lineno), string_field(obj, "by", lineno), string_field(obj, "of", lineno)});
      mention_lines.push_back(lineno);
    } else {
      throw ParseError(lineno, "unknown event type '" + type + "'");
    }
  }

  // References may point forward in the file, so they are checked last.
  for (std::size_t i = 0; i < log.retweets.size(); ++i) {
    if (!tweet_index.contains(log.retweets[i].original)) {
      throw ParseError(retweet_lines[i], "retweet of unknown tweet '" + log.retweets[i].original + "'");
    }
  }
  for (std::size_t i = 0; i < log.mentions.size(); ++i) {
    const auto it = tweet_index.find(log.mentions[i].tweet);
    if (it == tweet_index.end()) {
      throw ParseError(mention_lines[i], "mention in unknown tweet '" + log.mentions[i].tweet + "'");
    }
    if (log.tweets[it->second].user != log.mentions[i].by) {
      throw ParseError(mention_lines[i], "mention author '" + log.mentions[i].by +
                                             "' did not write tweet '" + log.mentions[i].tweet + "'");
    }
  }
  return log;
}

InteractionLog parse_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return parse_log(in);
}

UserStats::UserStats(const InteractionLog& log) {
  std::unordered_map<std::string, const TweetEvent*> by_id;
  for (const auto& t : log.tweets) {
    by_id.emplace(t.id, &t);
    users_.insert(t.user);
    ++tweets_[t.user];
  }
  for (const auto& f : log.follows) {
    users_.insert(f.follower);
    users_.insert(f.followee);
    successors_[f.follower].insert(f.followee);
    predecessors_[f.followee].insert(f.follower);
  }
  for (const auto& r : log.retweets) {
    users_.insert(r.user);
    const auto* t = by_id.at(r.original);
    retweeted_[{t->user, r.user}].insert(t->id);
  }
  for (const auto& m : log.mentions) {
    users_.insert(m.by);
    users_.insert(m.of);
    mentioned_[{m.by, m.of}].insert(m.tweet);
    mention_tweets_[m.by].insert(m.tweet);
  }
}

const std::set<std::string>& UserStats::successors(const std::string& user) const {
  const auto it = successors_.find(user);
  return it == successors_.end() ? kNoUsers : it->second;
}

const std::set<std::string>& UserStats::predecessors(const std::string& user) const {
  const auto it = predecessors_.find(user);
  return it == predecessors_.end() ? kNoUsers : it->second;
}

std::size_t UserStats::tweet_count(const std::string& user) const {
  const auto it = tweets_.find(user);
  return it == tweets_.end() ? 0 : it->second;
}

std::size_t UserStats::retweeted_by(const std::string& author, const std::string& by) const {
  return count_in(retweeted_, author, by);
}

std::size_t UserStats::mentions_of(const std::string& author, const std::string& target) const {
  return count_in(mentioned_, author, target);
}

std::size_t UserStats::mention_tweets(const std::string& author) const {
  const auto it = mention_tweets_.find(author);
  return it == mention_tweets_.end() ? 0 : it->second.size();
}

WeightVector compute_weights(const UserStats& stats, const std::string& u, const std::string& v,
                             FollowWeightMode mode) {
  if (u == v) throw DomainError("compute_weights: u and v must differ");
  if (!stats.knows(u)) throw DomainError("unknown user '" + u + "'");
  if (!stats.knows(v)) throw DomainError("unknown user '" + v + "'");

  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };

  const auto& succ = stats.successors(u);
  const auto& pred = stats.predecessors(u);
  std::size_t follow_num = 0;
  switch (mode) {
    case FollowWeightMode::reciprocal:
      if (pred.contains(v)) {
        follow_num = static_cast<std::size_t>(
            std::count_if(succ.begin(), succ.end(), [&](const std::string& s) { return pred.contains(s); }));
      }
      break;
    case FollowWeightMode::literal:
      follow_num = (succ.contains(u) && pred.contains(u)) ? 1 : 0;
      break;
  }

  return {ratio(follow_num, succ.size()), ratio(stats.mentions_of(u, v), stats.mention_tweets(u)),
          ratio(stats.retweeted_by(u, v), stats.tweet_count(u))};
}

WeightVector compute_weights(const InteractionLog& log, const std::string& u, const std::string& v,
                             FollowWeightMode mode) {
  return compute_weights(UserStats(log), u, v, mode);
}

std::vector<PropagationNetwork> build_traces(const InteractionLog& log, const std::string& label,
                                             const TraceOptions& options) {
  std::map<std::string, std::int64_t> first;
  std::unordered_map<std::string, const TweetEvent*> by_id;
  for (const auto& t : log.tweets) {
    by_id.emplace(t.id, &t);
    if (t.label != label) continue;
    auto [it, inserted] = first.emplace(t.user, t.ts);
    if (!inserted) it->second = std::min(it->second, t.ts);
  }

  // Candidate relations u -> v; the time filter is applied afterwards.
  std::set<std::pair<std::string, std::string>> related;
  for (const auto& f : log.follows) related.emplace(f.followee, f.follower);
  for (const auto& m : log.mentions)
    if (by_id.at(m.tweet)->label == label) related.emplace(m.by, m.of);
  for (const auto& r : log.retweets) {
    const auto* t = by_id.at(r.original);
    if (t->label == label) related.emplace(t->user, r.user);
  }

  std::map<std::string, std::vector<std::string>> parents;
  std::set<std::string> participants;
  for (const auto& [u, v] : related) {
    if (u == v) continue;
    const auto fu = first.find(u);
    const auto fv = first.find(v);
    if (fu == first.end() || fv == first.end() || !(fu->second < fv->second)) continue;
    parents[v].push_back(u);
    participants.insert(u);
    participants.insert(v);
  }

  if (options.tree_mode) {
    for (auto& [v, ps] : parents) {
      // Latest earlier propagator; equal times resolve to the smallest id.
      const auto best = std::min_element(ps.begin(), ps.end(), [&](const auto& a, const auto& b) {
        return first.at(a) != first.at(b) ? first.at(a) > first.at(b) : a < b;
      });
      ps = {*best};
    }
  }

  std::map<std::string, std::vector<std::string>> children;
  for (const auto& [v, ps] : parents)
    for (const auto& u : ps) children[u].push_back(v);

  const UserStats stats(log);
  std::vector<PropagationNetwork> out;
  for (const auto& source : participants) {
    if (parents.contains(source)) continue;

    std::set<std::string> reach{source};
    std::deque<std::string> frontier{source};
    while (!frontier.empty()) {
      const auto u = frontier.front();
      frontier.pop_front();
      if (const auto it = children.find(u); it != children.end()) {
        for (const auto& v : it->second)
          if (reach.insert(v).second) frontier.push_back(v);
      }
    }

    // Arcs run forward in time, so first-tweet order is a topological order.
    std::vector<std::string> order(reach.begin(), reach.end());
    std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
      return first.at(a) != first.at(b) ? first.at(a) < first.at(b) : a < b;
    });
    std::map<std::string, int> depth{{source, 0}};
    std::vector<Arc> arcs;
    for (const auto& v : order) {
      if (v == source) continue;
      int d = 0;
      for (const auto& u : parents.at(v)) {
        if (!reach.contains(u)) continue;
        d = std::max(d, depth.at(u) + 1);
        arcs.push_back({u, v, compute_weights(stats, u, v, options.follow_mode), depth.at(u) + 1});
      }
      depth[v] = d;
    }
    if (!arcs.empty()) out.emplace_back(source, std::move(arcs), label);
  }
  return out;
}

std::map<std::string, ClassStats> dataset_stats(const std::vector<PropagationNetwork>& networks) {
  std::map<std::string, std::set<std::string>> users;
  std::map<std::string, ClassStats> out;
  for (const auto& net : networks) {
    const std::string label = net.label().value_or("");
    auto& s = out[label];
    ++s.networks;
    s.links += net.arcs().size();
    users[label].insert(net.nodes().begin(), net.nodes().end());
  }
  for (auto& [label, s] : out) s.users = users[label].size();
  return out;
}

std::string format_stats_table(const std::map<std::string, ClassStats>& stats) {
  std::size_t width = 5;
  for (const auto& [label, s] : stats) width = std::max(width, label.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(width)) << "class" << std::right << std::setw(10) << "#User"
     << std::setw(15) << "#Prop. links" << std::setw(10) << "#PrNet" << '\n';
  for (const auto& [label, s] : stats) {
    os << std::left << std::setw(static_cast<int>(width)) << label << std::right << std::setw(10) << s.users
       << std::setw(15) << s.links << std::setw(10) << s.networks << '\n';
  }
  return os.str();
}

}  // namespace cascade_dtw
