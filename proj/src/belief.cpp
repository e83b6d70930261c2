#include "cascade_dtw/belief.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "cascade_dtw/errors.hpp"

namespace cascade_dtw {

namespace {

void require_same_frame(const MassFunction& m1, const MassFunction& m2) {
  if (!(m1.frame() == m2.frame())) throw DomainError("mass functions are defined on different frames");
}

template <typename SetOp>
std::map<Subset, double> product(const MassFunction& m1, const MassFunction& m2, SetOp op) {
  std::map<Subset, double> out;
  for (const auto& [b, mb] : m1.focal())
    for (const auto& [c, mc] : m2.focal()) out[op(b, c)] += mb * mc;
  return out;
}

}  // namespace

Frame::Frame(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2 || labels_.size() > 32) {
    throw DomainError("a frame needs between 2 and 32 labels, got " + std::to_string(labels_.size()));
  }
  std::set<std::string_view> distinct(labels_.begin(), labels_.end());
  if (distinct.size() != labels_.size()) throw DomainError("frame labels must be distinct");
}

Subset Frame::omega() const noexcept {
  return labels_.size() == 32 ? ~Subset{0} : (Subset{1} << labels_.size()) - 1;
}

std::size_t Frame::index_of(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw DomainError("label '" + std::string(label) + "' is not in the frame");
  return static_cast<std::size_t>(it - labels_.begin());
}

std::vector<std::string> Frame::members(Subset set) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (set & (Subset{1} << i)) out.push_back(labels_[i]);
  return out;
}

MassFunction::MassFunction(Frame frame, std::map<Subset, double> masses)
    : frame_(std::move(frame)) {
  const Subset omega = frame_.omega();
  double total = 0.0;
  for (const auto& [set, mass] : masses) {
    if ((set & ~omega) != 0) throw DomainError("focal set outside the frame");
    if (!std::isfinite(mass) || mass < 0.0) throw DomainError("masses must be finite and >= 0");
    total += mass;
    if (mass > 0.0) masses_.emplace(set, mass);
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw DomainError("masses sum to " + std::to_string(total) + ", expected 1");
  }
  for (auto& [set, mass] : masses_) mass /= total;
}

MassFunction MassFunction::vacuous(Frame frame) {
  const Subset omega = frame.omega();
  return MassFunction(std::move(frame), {{omega, 1.0}});
}

double MassFunction::mass(Subset set) const noexcept {
  const auto it = masses_.find(set);
  return it == masses_.end() ? 0.0 : it->second;
}

MassFunction simple_bba(const Frame& frame, std::string_view label, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("simple_bba: alpha must lie in (0,1)");
  return MassFunction(frame, {{frame.singleton(label), alpha}, {frame.omega(), 1.0 - alpha}});
}

MassFunction combine_conjunctive(const MassFunction& m1, const MassFunction& m2) {
  require_same_frame(m1, m2);
  return MassFunction(m1.frame(), product(m1, m2, [](Subset b, Subset c) { return b & c; }));
}

MassFunction combine_dempster(const MassFunction& m1, const MassFunction& m2) {
  require_same_frame(m1, m2);
  auto masses = product(m1, m2, [](Subset b, Subset c) { return b & c; });
  const double conflict = masses.contains(0) ? masses[0] : 0.0;
  masses.erase(0);
  const double kept = 1.0 - conflict;
  if (masses.empty() || kept <= 0.0) throw ConflictError("Dempster's rule: totally conflicting evidence");
  for (auto& [set, mass] : masses) mass /= kept;
  return MassFunction(m1.frame(), std::move(masses));
}

MassFunction combine_disjunctive(const MassFunction& m1, const MassFunction& m2) {
  require_same_frame(m1, m2);
  return MassFunction(m1.frame(), product(m1, m2, [](Subset b, Subset c) { return b | c; }));
}

const char* to_string(CombinationRule rule) noexcept {
  switch (rule) {
    case CombinationRule::dempster: return "dempster";
    case CombinationRule::conjunctive: return "conjunctive";
    case CombinationRule::disjunctive: return "disjunctive";
  }
  return "unknown";
}

CombinationRule parse_combination_rule(std::string_view name) {
  if (name == "dempster") return CombinationRule::dempster;
  if (name == "conjunctive") return CombinationRule::conjunctive;
  if (name == "disjunctive") return CombinationRule::disjunctive;
  throw DomainError("unknown combination rule '" + std::string(name) + "'");
}

MassFunction combine(const MassFunction& m1, const MassFunction& m2, CombinationRule rule) {
  switch (rule) {
    case CombinationRule::conjunctive: return combine_conjunctive(m1, m2);
    case CombinationRule::disjunctive: return combine_disjunctive(m1, m2);
    case CombinationRule::dempster: break;
  }
  return combine_dempster(m1, m2);
}

std::vector<double> pignistic(const MassFunction& m) {
  const double kept = 1.0 - m.conflict();
  if (kept <= kMassTolerance) throw DomainError("pignistic: all mass is on the empty set");
  std::vector<double> betp(m.frame().size(), 0.0);
  for (const auto& [set, mass] : m.focal()) {
    if (set == 0) continue;
    const double share = mass / (std::popcount(set) * kept);
    for (std::size_t i = 0; i < betp.size(); ++i)
      if (set & (Subset{1} << i)) betp[i] += share;
  }
  return betp;
}

}  // namespace cascade_dtw
