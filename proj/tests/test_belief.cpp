#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "cascade_dtw/belief.hpp"
#include "cascade_dtw/errors.hpp"

using namespace cascade_dtw;

namespace {

const Frame kAbc({"a", "b", "c"});
const Frame kS12({"s1", "s2"});

MassFunction random_mass(std::mt19937_64& rng, const Frame& frame, bool allow_empty = false) {
  std::uniform_int_distribution<Subset> set(allow_empty ? 0 : 1, frame.omega());
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::map<Subset, double> raw;
  double total = 0.0;
  for (int i = count(rng); i > 0; --i) {
    const double x = w(rng);
    raw[set(rng)] += x;
    total += x;
  }
  for (auto& [s, m] : raw) m /= total;
  return MassFunction(frame, raw);
}

void expect_same(const MassFunction& x, const MassFunction& y, double tol = 1e-9) {
  for (Subset s = 0; s <= x.frame().omega(); ++s) EXPECT_NEAR(x.mass(s), y.mass(s), tol) << "subset " << s;
}

double total(const MassFunction& m) {
  double t = 0.0;
  for (const auto& [s, v] : m.focal()) t += v;
  return t;
}

}  // namespace

TEST(Frame, Validation) {
  EXPECT_THROW(Frame({"a"}), DomainError);
  EXPECT_THROW(Frame({"a", "a"}), DomainError);
  EXPECT_EQ(kAbc.omega(), 0b111u);
  EXPECT_EQ(kAbc.singleton("b"), 0b010u);
  EXPECT_THROW(kAbc.singleton("z"), DomainError);
  EXPECT_EQ(kAbc.members(0b101), (std::vector<std::string>{"a", "c"}));
}

TEST(MassFunction, RenormalizesTinyDriftAndRejectsLargeOnes) {
  const MassFunction m(kS12, {{0b01, 0.5 + 4e-10}, {0b11, 0.5}});
  EXPECT_NEAR(total(m), 1.0, 1e-15);
  EXPECT_THROW(MassFunction(kS12, {{0b01, 0.6}, {0b11, 0.5}}), DomainError);
  EXPECT_THROW(MassFunction(kS12, {{0b01, -0.1}, {0b11, 1.1}}), DomainError);
  EXPECT_THROW(MassFunction(kS12, {{0b100, 1.0}}), DomainError);
}

TEST(SimpleBba, Structure) {
  const auto m = simple_bba(kAbc, "a", 0.95);
  EXPECT_DOUBLE_EQ(m.mass(0b001), 0.95);
  EXPECT_NEAR(m.mass(0b111), 0.05, 1e-15);
  EXPECT_EQ(m.focal().size(), 2u);
  EXPECT_EQ(simple_bba(kAbc, "a", 0.95).focal(), m.focal());
}

TEST(SimpleBba, OpenIntervalAndKnownLabel) {
  EXPECT_THROW(simple_bba(kAbc, "a", 0.0), DomainError);
  EXPECT_THROW(simple_bba(kAbc, "a", 1.0), DomainError);
  EXPECT_THROW(simple_bba(kAbc, "z", 0.5), DomainError);
}

TEST(Conjunctive, Examples) {
  const auto m = simple_bba(kS12, "s1", 0.3);
  expect_same(combine_conjunctive(MassFunction::vacuous(kS12), m), m);

  const auto same = combine_conjunctive(simple_bba(kS12, "s1", 0.5), simple_bba(kS12, "s1", 0.5));
  EXPECT_NEAR(same.mass(0b01), 0.75, 1e-12);
  EXPECT_NEAR(same.mass(0b11), 0.25, 1e-12);
  EXPECT_EQ(same.conflict(), 0.0);

  const auto clash = combine_conjunctive(MassFunction(kS12, {{0b01, 1.0}}), MassFunction(kS12, {{0b10, 1.0}}));
  EXPECT_EQ(clash.conflict(), 1.0);
}

TEST(Dempster, Examples) {
  const auto m = simple_bba(kS12, "s2", 0.4);
  expect_same(combine_dempster(MassFunction::vacuous(kS12), m), m);

  const auto r = combine_dempster(simple_bba(kS12, "s1", 0.8), simple_bba(kS12, "s2", 0.5));
  EXPECT_NEAR(r.mass(0b01), 0.4 / 0.6, 1e-12);
  EXPECT_NEAR(r.mass(0b10), 0.1 / 0.6, 1e-12);
  EXPECT_NEAR(r.mass(0b11), 0.1 / 0.6, 1e-12);
  EXPECT_EQ(r.conflict(), 0.0);

  EXPECT_THROW(combine_dempster(MassFunction(kS12, {{0b01, 1.0}}), MassFunction(kS12, {{0b10, 1.0}})),
               ConflictError);
}

TEST(Disjunctive, Examples) {
  const auto vac = MassFunction::vacuous(kAbc);
  expect_same(combine_disjunctive(vac, simple_bba(kAbc, "b", 0.6)), vac);

  const auto same = combine_disjunctive(simple_bba(kAbc, "a", 0.7), simple_bba(kAbc, "a", 0.4));
  EXPECT_NEAR(same.mass(0b001), 0.28, 1e-12);
  EXPECT_NEAR(same.mass(0b111), 0.72, 1e-12);

  const auto mixed = combine_disjunctive(simple_bba(kAbc, "a", 0.7), simple_bba(kAbc, "b", 0.4));
  EXPECT_NEAR(mixed.mass(0b011), 0.28, 1e-12);
  EXPECT_NEAR(mixed.mass(0b111), 0.72, 1e-12);
  EXPECT_EQ(mixed.focal().size(), 2u);
}

TEST(Combination, FrameMismatch) {
  EXPECT_THROW(combine_conjunctive(MassFunction::vacuous(kAbc), MassFunction::vacuous(kS12)), DomainError);
  EXPECT_THROW(combine_disjunctive(MassFunction::vacuous(kAbc), MassFunction::vacuous(kS12)), DomainError);
  EXPECT_THROW(combine_dempster(MassFunction::vacuous(kAbc), MassFunction::vacuous(kS12)), DomainError);
}

TEST(Pignistic, Examples) {
  const auto uniform = pignistic(MassFunction::vacuous(kAbc));
  for (double p : uniform) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);

  const auto p2 = pignistic(simple_bba(kS12, "s1", 0.95));
  EXPECT_NEAR(p2[0], 0.975, 1e-12);
  EXPECT_NEAR(p2[1], 0.025, 1e-12);

  const Frame s123({"s1", "s2", "s3"});
  const auto p3 = pignistic(MassFunction(s123, {{0b001, 0.6}, {0b011, 0.4}}));
  EXPECT_NEAR(p3[0], 0.8, 1e-12);
  EXPECT_NEAR(p3[1], 0.2, 1e-12);
  EXPECT_EQ(p3[2], 0.0);

  EXPECT_THROW(pignistic(MassFunction(kS12, {{0, 1.0}})), DomainError);
}

TEST(Pignistic, RenormalizesConflict) {
  const auto p = pignistic(MassFunction(kS12, {{0, 0.5}, {0b01, 0.25}, {0b11, 0.25}}));
  EXPECT_NEAR(p[0], 0.75, 1e-12);
  EXPECT_NEAR(p[1], 0.25, 1e-12);
}

TEST(BeliefProperties, CommutativeAssociativeNormalized) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const Frame& frame = trial % 2 ? kAbc : kS12;
    const auto m1 = random_mass(rng, frame), m2 = random_mass(rng, frame), m3 = random_mass(rng, frame);
    expect_same(combine_conjunctive(m1, m2), combine_conjunctive(m2, m1));
    expect_same(combine_disjunctive(m1, m2), combine_disjunctive(m2, m1));
    expect_same(combine_conjunctive(combine_conjunctive(m1, m2), m3),
                combine_conjunctive(m1, combine_conjunctive(m2, m3)));
    expect_same(combine_disjunctive(combine_disjunctive(m1, m2), m3),
                combine_disjunctive(m1, combine_disjunctive(m2, m3)));
    EXPECT_NEAR(total(combine_conjunctive(m1, m2)), 1.0, 1e-9);
    EXPECT_NEAR(total(combine_disjunctive(m1, m2)), 1.0, 1e-9);

    const auto vac = MassFunction::vacuous(frame);
    expect_same(combine_conjunctive(vac, m1), m1);
    expect_same(combine_dempster(vac, m1), m1);

    const auto conj = combine_conjunctive(m1, m2);
    if (conj.conflict() < 1.0 - 1e-12) {
      const auto dem = combine_dempster(m1, m2);
      for (Subset s = 1; s <= frame.omega(); ++s) EXPECT_NEAR(dem.mass(s), conj.mass(s) / (1.0 - conj.conflict()), 1e-9);
      EXPECT_EQ(dem.conflict(), 0.0);
      const auto p = pignistic(conj);
      EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
    }
  }
}

TEST(BeliefProperties, PignisticOfBayesianIsIdentity) {
  const MassFunction bayes(kAbc, {{0b001, 0.2}, {0b010, 0.5}, {0b100, 0.3}});
  const auto p = pignistic(bayes);
  EXPECT_NEAR(p[0], 0.2, 1e-15);
  EXPECT_NEAR(p[1], 0.5, 1e-15);
  EXPECT_NEAR(p[2], 0.3, 1e-15);
}

TEST(CombinationRule, ParseRoundTrip) {
  for (auto r : {CombinationRule::dempster, CombinationRule::conjunctive, CombinationRule::disjunctive}) {
    EXPECT_EQ(parse_combination_rule(to_string(r)), r);
  }
  EXPECT_THROW(parse_combination_rule("yager"), DomainError);
}
