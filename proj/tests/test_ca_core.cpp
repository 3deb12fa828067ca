#include <gtest/gtest.h>

#include <set>

#include "maca/ca_core.hpp"
#include "maca/errors.hpp"
#include "maca/rng.hpp"
#include "oracles.hpp"

using namespace maca;

namespace {

std::vector<int> as_ints(const RuleVector& rv) { return {rv.codes().begin(), rv.codes().end()}; }

RuleVector random_rules(Rng& rng, int n) {
  std::vector<std::uint8_t> codes(static_cast<std::size_t>(n));
  for (auto& c : codes) c = static_cast<std::uint8_t>(rng.below(256));
  return RuleVector(codes);
}

std::vector<std::string> strings(const std::vector<CAState>& states) {
  std::vector<std::string> out;
  for (const auto& s : states) out.push_back(s.to_string());
  return out;
}

}  // namespace

TEST(RuleNumber, RangeChecked) {
  EXPECT_NO_THROW(RuleNumber(0));
  EXPECT_NO_THROW(RuleNumber(255));
  EXPECT_THROW(RuleNumber(256), ParameterError);
  EXPECT_THROW(RuleNumber(-1), ParameterError);
}

TEST(ApplyRule, TruthTableExamples) {
  EXPECT_TRUE(apply_rule(RuleNumber(238), false, true, false));
  EXPECT_FALSE(apply_rule(RuleNumber(204), true, false, true));
  EXPECT_FALSE(apply_rule(RuleNumber(85), false, false, true));
  for (int j = 0; j < 8; ++j) EXPECT_FALSE(apply_rule(RuleNumber(0), j & 4, j & 2, j & 1));
}

TEST(ApplyRule, MatchesBitExpansionForAllRules) {
  for (int rule = 0; rule < 256; ++rule) {
    for (int j = 0; j < 8; ++j) {
      const int l = (j >> 2) & 1, c = (j >> 1) & 1, r = j & 1;
      EXPECT_EQ(apply_rule(RuleNumber(rule), l, c, r), oracle::rule_bit(rule, l, c, r) == 1);
    }
  }
}

TEST(ApplyRule, Rule170CopiesRightNeighbor) {
  for (int j = 0; j < 8; ++j) EXPECT_EQ(apply_rule(RuleNumber(170), j & 4, j & 2, j & 1), (j & 1) != 0);
}

TEST(RuleVector, ParseForms) {
  EXPECT_EQ(as_ints(RuleVector::parse("90, 150,204")), (std::vector<int>{90, 150, 204}));
  EXPECT_EQ(RuleVector::parse("238", 3), RuleVector::uniform(RuleNumber(238), 3));
  EXPECT_EQ(RuleVector::parse("238").size(), 1);
  EXPECT_THROW(RuleVector::parse("1,x"), ParameterError);
  EXPECT_THROW(RuleVector::parse("1,300"), ParameterError);
  EXPECT_THROW(RuleVector::parse("1,2", 3), DimensionError);
  EXPECT_EQ(RuleVector::parse("90,150").to_string(), "90,150");
}

TEST(RuleVector, SizeLimits) {
  EXPECT_THROW(RuleVector(std::vector<std::uint8_t>{}), ParameterError);
  EXPECT_THROW(RuleVector(std::vector<std::uint8_t>(65, 0)), CapacityError);
  EXPECT_THROW(RuleVector::uniform(RuleNumber(0), 0), ParameterError);
  EXPECT_EQ(RuleVector::uniform(RuleNumber(0), 64).size(), 64);
}

TEST(CAState, StringRoundTripAndCellOrder) {
  const auto s = CAState::from_string("0011");
  EXPECT_EQ(s.width(), 4);
  EXPECT_FALSE(s.cell(0));
  EXPECT_TRUE(s.cell(3));
  EXPECT_EQ(s.to_string(), "0011");
  EXPECT_EQ(s.with_cell(0, true).to_string(), "1011");
  EXPECT_LT(CAState::from_string("0111"), CAState::from_string("1000"));
  EXPECT_THROW(CAState::from_string("01a"), ParameterError);
  EXPECT_THROW(CAState::from_string(""), ParameterError);
  EXPECT_THROW(CAState(0b10000, 4), ParameterError);
}

TEST(Step, Rule238FromSingleOne) {
  const auto rv = RuleVector::uniform(RuleNumber(238), 4);
  EXPECT_EQ(step(CAState::from_string("0001"), rv).to_string(), "0011");
}

TEST(Step, IdentityAndNullRules) {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + static_cast<int>(rng.below(64));
    const CAState s(rng.next() & width_mask(n), n);
    for (auto b : {Boundary::null, Boundary::periodic}) {
      EXPECT_EQ(step(s, RuleVector::uniform(RuleNumber(204), n), b), s);
      EXPECT_EQ(step(s, RuleVector::uniform(RuleNumber(0), n), b), CAState::zeros(n));
    }
  }
  EXPECT_EQ(step(CAState::from_string("1111"), RuleVector::uniform(RuleNumber(0), 4)).to_string(), "0000");
}

TEST(Step, WidthMismatchThrows) {
  EXPECT_THROW(step(CAState::from_string("010"), RuleVector::uniform(RuleNumber(90), 4)), DimensionError);
}

TEST(Step, MatchesStringOracleOnRandomHybrids) {
  Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + static_cast<int>(rng.below(64));
    const RuleVector rv = random_rules(rng, n);
    const CAState s(rng.next() & width_mask(n), n);
    for (bool periodic : {false, true}) {
      const auto b = periodic ? Boundary::periodic : Boundary::null;
      EXPECT_EQ(step(s, rv, b).to_string(), oracle::step(s.to_string(), as_ints(rv), periodic));
    }
  }
}

TEST(Step, Deterministic) {
  Rng rng(3);
  const RuleVector rv = random_rules(rng, 40);
  const CAState s(rng.next() & width_mask(40), 40);
  EXPECT_EQ(step(s, rv), step(s, rv));
}

TEST(FindAttractor, Examples) {
  auto t = find_attractor(CAState::from_string("1111"), RuleVector::uniform(RuleNumber(0), 4), Boundary::null, 100);
  EXPECT_EQ(strings(t.transient), (std::vector<std::string>{"1111"}));
  EXPECT_EQ(strings(t.cycle), (std::vector<std::string>{"0000"}));

  t = find_attractor(CAState::from_string("0001"), RuleVector::uniform(RuleNumber(238), 4), Boundary::null, 100);
  EXPECT_EQ(strings(t.transient), (std::vector<std::string>{"0001", "0011", "0111"}));
  EXPECT_EQ(strings(t.cycle), (std::vector<std::string>{"1111"}));

  t = find_attractor(CAState::from_string("0110"), RuleVector::uniform(RuleNumber(204), 4), Boundary::null, 1);
  EXPECT_TRUE(t.transient.empty());
  EXPECT_EQ(strings(t.cycle), (std::vector<std::string>{"0110"}));
}

TEST(FindAttractor, BudgetAndArguments) {
  const auto rv = RuleVector::uniform(RuleNumber(238), 4);
  EXPECT_THROW(find_attractor(CAState::from_string("0001"), rv, Boundary::null, 2), BudgetExhaustedError);
  EXPECT_NO_THROW(find_attractor(CAState::from_string("0001"), rv, Boundary::null, 16));
  EXPECT_THROW(find_attractor(CAState::from_string("0001"), rv, Boundary::null, 0), ParameterError);
  EXPECT_THROW(find_attractor(CAState::from_string("001"), rv, Boundary::null, 16), DimensionError);
}

TEST(FindAttractor, TrajectoryInvariantsAgainstOracle) {
  Rng rng(5);
  for (int t = 0; t < 300; ++t) {
    const int n = 1 + static_cast<int>(rng.below(12));
    const RuleVector rv = random_rules(rng, n);
    const bool periodic = rng.bernoulli(0.5);
    const auto b = periodic ? Boundary::periodic : Boundary::null;
    const CAState s(rng.next() & width_mask(n), n);
    const auto traj = find_attractor(s, rv, b, std::uint64_t{1} << n);
    const auto want = oracle::walk(s.to_string(), as_ints(rv), periodic);
    EXPECT_EQ(strings(traj.transient), want.transient);
    EXPECT_EQ(strings(traj.cycle), want.cycle);
    EXPECT_LE(traj.transient.size() + traj.cycle.size(), std::size_t{1} << n);
    EXPECT_EQ(step(traj.cycle.back(), rv, b), traj.cycle.front());
    std::set<CAState> distinct(traj.transient.begin(), traj.transient.end());
    distinct.insert(traj.cycle.begin(), traj.cycle.end());
    EXPECT_EQ(distinct.size(), traj.transient.size() + traj.cycle.size());
  }
}

TEST(AttractorOf, AgreesWithFindAttractorOnWideStates) {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    const int n = 20 + static_cast<int>(rng.below(45));
    const HybridCA ca(random_rules(rng, n));
    const CAState s(rng.next() & width_mask(n), n);
    const auto key = ca.attractor_of(s.word(), 1u << 16);
    try {
      const auto traj = ca.find_attractor(s, 1u << 16);
      ASSERT_TRUE(key.has_value());
      const auto canon = canonical_cycle(traj.cycle);
      EXPECT_EQ(key->representative, canon.front());
      EXPECT_EQ(key->cycle_length, canon.size());
    } catch (const BudgetExhaustedError&) {
      // Brent's walk may need up to twice the steps, so only the converse is checked.
      EXPECT_FALSE(key.has_value());
    }
  }
}

TEST(AttractorOf, ReturnsNulloptOverBudget) {
  const HybridCA ca(RuleVector::uniform(RuleNumber(238), 8));
  EXPECT_FALSE(ca.attractor_of(CAState::from_string("00000001").word(), 3).has_value());
  EXPECT_TRUE(ca.attractor_of(CAState::from_string("00000001").word(), 64).has_value());
}

TEST(CanonicalCycle, RotatesToSmallest) {
  const std::vector<CAState> cycle{CAState::from_string("110"), CAState::from_string("011"),
                                   CAState::from_string("101")};
  EXPECT_EQ(strings(canonical_cycle(cycle)), (std::vector<std::string>{"011", "101", "110"}));
}

TEST(EnumerateBasins, Rule238Width3) {
  const auto basins = enumerate_basins(RuleVector::uniform(RuleNumber(238), 3));
  ASSERT_EQ(basins.size(), 4u);
  const std::vector<std::string> attractors{"000", "100", "110", "111"};
  const std::vector<std::uint64_t> sizes{1, 1, 2, 4};
  for (std::size_t k = 0; k < 4; ++k) {
    ASSERT_EQ(basins[k].attractor.size(), 1u);
    EXPECT_EQ(basins[k].attractor.front().to_string(), attractors[k]);
    EXPECT_EQ(basins[k].size, sizes[k]);
  }
  EXPECT_EQ(strings(basins[2].states), (std::vector<std::string>{"010", "110"}));
}

TEST(EnumerateBasins, NullAndIdentityRules) {
  auto basins = enumerate_basins(RuleVector::uniform(RuleNumber(0), 4));
  ASSERT_EQ(basins.size(), 1u);
  EXPECT_EQ(basins[0].size, 16u);
  EXPECT_EQ(basins[0].attractor.front().to_string(), "0000");

  basins = enumerate_basins(RuleVector::uniform(RuleNumber(204), 4));
  ASSERT_EQ(basins.size(), 16u);
  for (const auto& b : basins) EXPECT_EQ(b.size, 1u);
}

TEST(EnumerateBasins, CapacityLimit) {
  EXPECT_THROW(enumerate_basins(RuleVector::uniform(RuleNumber(90), 21)), CapacityError);
  EXPECT_NO_THROW(enumerate_basins(RuleVector::uniform(RuleNumber(204), 20)));
}

TEST(EnumerateBasins, PartitionAndOracleEquivalence) {
  Rng rng(21);
  for (int t = 0; t < 120; ++t) {
    const int n = 1 + static_cast<int>(rng.below(10));
    const bool periodic = t % 2 == 1;
    const RuleVector rv = random_rules(rng, n);
    const auto basins = enumerate_basins(rv, periodic ? Boundary::periodic : Boundary::null);
    std::map<std::string, std::vector<std::string>> owner;
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < basins.size(); ++k) {
      if (k > 0) EXPECT_LT(basins[k - 1].attractor.front(), basins[k].attractor.front());
      EXPECT_EQ(basins[k].states.size(), basins[k].size);
      total += basins[k].size;
      for (const auto& s : basins[k].states) {
        EXPECT_FALSE(owner.count(s.to_string()));
        owner[s.to_string()] = strings(basins[k].attractor);
      }
      for (const auto& a : basins[k].attractor) {
        EXPECT_TRUE(std::binary_search(basins[k].states.begin(), basins[k].states.end(), a));
      }
    }
    EXPECT_EQ(total, std::uint64_t{1} << n);
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) {
      const auto s = oracle::bits_of(w, n);
      EXPECT_EQ(owner.at(s), oracle::canonical(oracle::walk(s, as_ints(rv), periodic).cycle));
    }
  }
}

TEST(Boundary, ParseAndPrint) {
  EXPECT_EQ(parse_boundary("null"), Boundary::null);
  EXPECT_EQ(parse_boundary("periodic"), Boundary::periodic);
  EXPECT_EQ(to_string(Boundary::periodic), "periodic");
  EXPECT_THROW(parse_boundary("reflect"), ParameterError);
}
