#include "cascade_dtw/prnet.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <tuple>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "cascade_dtw/errors.hpp"

namespace cascade_dtw {

namespace {

bool unit_interval(double x) noexcept { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

// Node-indexed view of a network, adjacency sorted by (rank, dst) so that
// enumeration order does not depend on arc order in the input.
struct IndexedGraph {
  std::vector<std::string> names;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<std::size_t>> out_arcs;  // arc indices
  std::vector<std::vector<std::size_t>> in_arcs;
  std::vector<std::size_t> arc_src;
  std::vector<std::size_t> arc_dst;

  explicit IndexedGraph(const PropagationNetwork& net) : names(net.nodes()) {
    index.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], i);
    out_arcs.resize(names.size());
    in_arcs.resize(names.size());
    const auto& arcs = net.arcs();
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      const auto s = index.at(arcs[a].src);
      const auto d = index.at(arcs[a].dst);
      arc_src.push_back(s);
      arc_dst.push_back(d);
      out_arcs[s].push_back(a);
      in_arcs[d].push_back(a);
    }
    for (auto& outs : out_arcs) {
      std::sort(outs.begin(), outs.end(), [&](std::size_t x, std::size_t y) {
        return std::tie(arcs[x].rank, arcs[x].dst) < std::tie(arcs[y].rank, arcs[y].dst);
      });
    }
  }
};

}  // namespace

bool WeightVector::valid() const noexcept {
  return unit_interval(follow) && unit_interval(mention) && unit_interval(retweet);
}

const char* to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::single_source: return "single source";
    case ViolationKind::acyclic: return "acyclic";
    case ViolationKind::unreachable: return "unreachable";
    case ViolationKind::rank_order: return "rank order";
    case ViolationKind::invalid_weight: return "invalid weight";
    case ViolationKind::duplicate_arc: return "duplicate arc";
  }
  return "unknown";
}

PropagationNetwork::PropagationNetwork(std::string source, std::vector<Arc> arcs,
                                       std::optional<std::string> label,
                                       std::vector<std::string> extra_nodes)
    : source_(std::move(source)), arcs_(std::move(arcs)), label_(std::move(label)) {
  std::set<std::string> nodes(std::make_move_iterator(extra_nodes.begin()),
                              std::make_move_iterator(extra_nodes.end()));
  nodes.insert(source_);
  for (const auto& arc : arcs_) {
    nodes.insert(arc.src);
    nodes.insert(arc.dst);
  }
  nodes_.assign(nodes.begin(), nodes.end());
}

PropagationNetwork PropagationNetwork::with_label(std::optional<std::string> label) const {
  PropagationNetwork copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

std::vector<Violation> validate(const PropagationNetwork& net) {
  std::vector<Violation> out;
  const IndexedGraph g(net);
  const auto& arcs = net.arcs();
  const std::size_t n = g.names.size();
  const std::size_t source = g.index.at(net.source());

  for (const auto& arc : arcs) {
    if (!arc.weight.valid()) {
      out.push_back({ViolationKind::invalid_weight, arc.src + "->" + arc.dst});
    }
  }

  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& arc : arcs) {
    if (!seen.emplace(arc.src, arc.dst).second) {
      out.push_back({ViolationKind::duplicate_arc, arc.src + "->" + arc.dst});
    }
  }

  if (!g.in_arcs[source].empty()) {
    out.push_back({ViolationKind::single_source, "source " + net.source() + " has incoming arcs"});
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (v != source && g.in_arcs[v].empty()) {
      out.push_back({ViolationKind::single_source, "node " + g.names[v] + " has in-degree 0"});
    }
  }

  // Kahn's algorithm; whatever is left over lies on or behind a cycle.
  std::vector<std::size_t> indegree(n);
  for (std::size_t v = 0; v < n; ++v) indegree[v] = g.in_arcs[v].size();
  std::deque<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push_back(v);
  std::size_t removed = 0;
  while (!ready.empty()) {
    const auto v = ready.front();
    ready.pop_front();
    ++removed;
    for (auto a : g.out_arcs[v])
      if (--indegree[g.arc_dst[a]] == 0) ready.push_back(g.arc_dst[a]);
  }
  if (removed != n) {
    std::ostringstream nodes;
    bool first = true;
    for (std::size_t v = 0; v < n; ++v) {
      if (indegree[v] != 0) {
        nodes << (first ? "" : ", ") << g.names[v];
        first = false;
      }
    }
    out.push_back({ViolationKind::acyclic, "cycle through " + nodes.str()});
  }

  std::vector<bool> reached(n, false);
  reached[source] = true;
  std::deque<std::size_t> frontier{source};
  while (!frontier.empty()) {
    const auto v = frontier.front();
    frontier.pop_front();
    for (auto a : g.out_arcs[v]) {
      const auto w = g.arc_dst[a];
      if (!reached[w]) {
        reached[w] = true;
        frontier.push_back(w);
      }
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!reached[v]) out.push_back({ViolationKind::unreachable, g.names[v]});
  }

  for (std::size_t v = 0; v < n; ++v) {
    if (g.in_arcs[v].empty() || g.out_arcs[v].empty()) continue;
    int max_in = std::numeric_limits<int>::min();
    for (auto a : g.in_arcs[v]) max_in = std::max(max_in, arcs[a].rank);
    for (auto a : g.out_arcs[v]) {
      if (arcs[a].rank <= max_in) {
        out.push_back({ViolationKind::rank_order,
                       arcs[a].src + "->" + arcs[a].dst + " rank " + std::to_string(arcs[a].rank) +
                           " does not exceed incoming rank " + std::to_string(max_in)});
      }
    }
  }
  return out;
}

std::vector<Dipath> extract_dipaths(const PropagationNetwork& net, std::size_t max_dipaths) {
  if (const auto violations = validate(net); !violations.empty()) {
    std::string msg = "invalid propagation network (source " + net.source() + "):";
    for (const auto& v : violations) msg += std::string(" [") + to_string(v.kind) + ": " + v.detail + "]";
    throw StructuralError(msg);
  }

  const IndexedGraph g(net);
  const auto& arcs = net.arcs();
  std::vector<Dipath> paths;

  // Explicit DFS: stack of (node, position in its out-arc list).
  std::vector<std::pair<std::size_t, std::size_t>> stack{{g.index.at(net.source()), 0}};
  std::vector<std::size_t> arc_path;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (g.out_arcs[node].empty() && !arc_path.empty()) {
      if (paths.size() == max_dipaths) {
        throw StructuralError("network with source " + net.source() + " has more than " +
                              std::to_string(max_dipaths) + " dipaths");
      }
      Dipath p;
      p.elements.reserve(arc_path.size());
      p.node_trace.reserve(arc_path.size() + 1);
      p.node_trace.push_back(net.source());
      for (auto a : arc_path) {
        p.elements.push_back(arcs[a].weight);
        p.node_trace.push_back(arcs[a].dst);
      }
      paths.push_back(std::move(p));
    }
    if (next < g.out_arcs[node].size()) {
      const auto a = g.out_arcs[node][next++];
      arc_path.push_back(a);
      stack.emplace_back(g.arc_dst[a], 0);
    } else {
      stack.pop_back();
      if (!arc_path.empty()) arc_path.pop_back();
    }
  }
  return paths;
}

WeightVector discretize(const WeightVector& v) noexcept {
  auto bit = [](double x) { return x > 0.0 ? 1.0 : 0.0; };
  return {bit(v.follow), bit(v.mention), bit(v.retweet)};
}

PropagationNetwork discretize(const PropagationNetwork& net) {
  std::vector<Arc> arcs = net.arcs();
  for (auto& arc : arcs) arc.weight = discretize(arc.weight);
  return PropagationNetwork(net.source(), std::move(arcs), net.label(), net.nodes());
}

}  // namespace cascade_dtw
