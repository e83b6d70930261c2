#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cascade_dtw/prnet.hpp"

namespace cascade_dtw {

// Network files hold one JSON object per line:
//   {"source": str, "label": str|null,
//    "arcs": [{"src": str, "dst": str, "w": [f, m, r], "rank": int}]}
// Blank lines are skipped. Arc order is not significant.

/// Throws ParseError (0 as line number) on malformed input.
PropagationNetwork network_from_json(const std::string& text);
std::string network_to_json(const PropagationNetwork& net);

/// Throws ParseError with the offending line number.
std::vector<PropagationNetwork> read_networks(std::istream& in);
std::vector<PropagationNetwork> read_networks(const std::filesystem::path& path);

void write_networks(std::ostream& out, const std::vector<PropagationNetwork>& networks);
void write_networks(const std::filesystem::path& path, const std::vector<PropagationNetwork>& networks);

}  // namespace cascade_dtw
