#include "cascade_dtw/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "cascade_dtw/errors.hpp"
#include "json.hpp"

namespace cascade_dtw {

namespace {

using nlohmann::json;

template <typename T>
T field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(0, std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(0, std::string("field '") + key + "' has the wrong type");
  }
}

PropagationNetwork network_from(const json& obj) {
  if (!obj.is_object()) throw ParseError(0, "expected a JSON object");
  auto source = field<std::string>(obj, "source");

  std::optional<std::string> label;
  if (const auto it = obj.find("label"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError(0, "field 'label' must be a string or null");
    label = it->get<std::string>();
  }

  std::vector<Arc> arcs;
  if (const auto it = obj.find("arcs"); it != obj.end()) {
    if (!it->is_array()) throw ParseError(0, "field 'arcs' must be an array");
    for (const auto& a : *it) {
      if (!a.is_object()) throw ParseError(0, "arc entries must be objects");
      const auto w = field<std::vector<double>>(a, "w");
      if (w.size() != 3) throw ParseError(0, "arc weight 'w' must have 3 components");
      const auto& rank = a.find("rank");
      if (rank == a.end() || !rank->is_number_integer()) throw ParseError(0, "arc 'rank' must be an integer");
      arcs.push_back({field<std::string>(a, "src"), field<std::string>(a, "dst"), {w[0], w[1], w[2]},
                      rank->get<int>()});
    }
  }
  return PropagationNetwork(std::move(source), std::move(arcs), std::move(label));
}

}  // namespace

PropagationNetwork network_from_json(const std::string& text) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, e.what());
  }
  return network_from(obj);
}

std::string network_to_json(const PropagationNetwork& net) {
  nlohmann::ordered_json obj;
  obj["source"] = net.source();
  obj["label"] = net.label() ? nlohmann::ordered_json(*net.label()) : nlohmann::ordered_json(nullptr);
  obj["arcs"] = nlohmann::ordered_json::array();
  for (const auto& arc : net.arcs()) {
    obj["arcs"].push_back({{"src", arc.src},
                           {"dst", arc.dst},
                           {"w", {arc.weight.follow, arc.weight.mention, arc.weight.retweet}},
                           {"rank", arc.rank}});
  }
  return obj.dump();
}

std::vector<PropagationNetwork> read_networks(std::istream& in) {
  std::vector<PropagationNetwork> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(network_from_json(line));
    } catch (const ParseError& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return out;
}

std::vector<PropagationNetwork> read_networks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return read_networks(in);
}

void write_networks(std::ostream& out, const std::vector<PropagationNetwork>& networks) {
  for (const auto& net : networks) out << network_to_json(net) << '\n';
}

void write_networks(const std::filesystem::path& path, const std::vector<PropagationNetwork>& networks) {
  std::ofstream out(path);
  if (!out) throw ParseError(0, "cannot write " + path.string());
  write_networks(out, networks);
}

}  // namespace cascade_dtw
