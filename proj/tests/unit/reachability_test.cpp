#include <algorithm>

#include "doctest.h"
#include "sgs/mdp.hpp"
#include "sgs/reachability.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace sgs;

namespace {

// Single concurrent state where player 2 alone decides between good and bad;
// the two reach perspectives disagree there.
ConcurrentGame p2_decides() {
  ConcurrentGame g;
  g.states = {"s", "good", "bad"};
  g.moves1 = {{"a"}, {"-"}, {"-"}};
  g.moves2 = {{"b0", "b1"}, {"-"}, {"-"}};
  g.delta.resize(3);
  g.delta[0] = {{{{1, Rational(1)}}, {{2, Rational(1)}}}};
  g.delta[1] = {{{{1, Rational(1)}}}};
  g.delta[2] = {{{{2, Rational(1)}}}};
  g.rebuild_index();
  require_valid(g);
  return g;
}

}  // namespace

TEST_CASE("reach iteration climbs to the matching pennies value") {
  auto fx = fixtures::matching_pennies_reach();
  auto chain = value_iteration_reach(fx.game, fx.set, 1, 5);
  REQUIRE(chain.size() == 6);
  CHECK(chain[0] == Valuation{Rational(0), Rational(1), Rational(0)});
  for (size_t i = 1; i < chain.size(); ++i) {
    CHECK(chain[i] == Valuation{Rational(1, 2), Rational(1), Rational(0)});
    CHECK(chain[i] == reach_lower_step(fx.game, fx.set, 1, chain[i - 1]));
  }
}

TEST_CASE("the two reach perspectives maximize for different players") {
  ConcurrentGame g = p2_decides();
  std::vector<bool> target = {false, true, false};
  auto mine = value_iteration_reach(g, target, 1, 3);
  auto theirs = value_iteration_reach(g, target, 2, 3);
  CHECK(mine.back() == Valuation{Rational(0), Rational(1), Rational(0)});
  CHECK(theirs.back() == Valuation{Rational(1), Rational(1), Rational(0)});
  CHECK(theirs[1] == reach_lower_step(g, target, 2, theirs[0]));
  CHECK_THROWS_AS(value_iteration_reach(g, target, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(value_iteration_reach(g, target, 1, -1), std::invalid_argument);
}

TEST_CASE("safety upper iteration descends onto the value") {
  auto fx = fixtures::matching_pennies_safety();
  auto chain = value_iteration_safe_upper(fx.game, fx.set, 4);
  REQUIRE(chain.size() == 5);
  CHECK(chain[0] == Valuation{Rational(1), Rational(1), Rational(0)});
  CHECK(chain[1] == Valuation{Rational(1, 2), Rational(1), Rational(0)});
  CHECK(chain[4] == Valuation{Rational(1, 2), Rational(1), Rational(0)});
  for (size_t i = 1; i < chain.size(); ++i) {
    CHECK(chain[i] == safety_upper_step(fx.game, fx.set, chain[i - 1]));
    for (int s = 0; s < fx.game.n(); ++s) CHECK(chain[i][s] <= chain[i - 1][s]);
  }
}

TEST_CASE("turn-based reach improvement solves the demo game") {
  auto fx = fixtures::tb_reach_demo();
  TbReachResult res = tb_reach_strategy_improvement(fx.game, fx.set);
  CHECK(res.values == Valuation{Rational(1), Rational(1, 2), Rational(1), Rational(0)});
  CHECK(res.iterations >= 1);
  // s0 routes straight to the target, skipping the coin.
  CHECK(fx.game.edges[0][res.choice[0]] == 2);
  CHECK(res.choice[1] == -1);
}

TEST_CASE("turn-based reach improvement matches the enumeration oracle") {
  testgen::Rng rng(83);
  for (int round = 0; round < 25; ++round) {
    testgen::TurnBasedSpec spec;
    spec.p1_choice_cap = 9;
    spec.p2_choice_cap = 9;
    TurnBasedGame g = testgen::random_turn_based(rng, spec);
    std::vector<bool> target = testgen::random_subset(rng, g.n());
    TbReachResult res = tb_reach_strategy_improvement(g, target);
    CHECK(res.values == oracle::tb_reach_oracle(g, target));
  }
}

TEST_CASE("chains need a single evaluation") {
  testgen::Rng rng(89);
  for (int round = 0; round < 10; ++round) {
    TurnBasedGame g = testgen::random_binary_chain(rng);
    std::vector<bool> target = testgen::random_subset(rng, g.n());
    TbReachResult res = tb_reach_strategy_improvement(g, target);
    CHECK(res.iterations == 1);
    CHECK(res.values == oracle::chain_reach(g.dist, target));
  }
}

TEST_CASE("quarter coin becomes a two-node gadget") {
  auto fx = fixtures::coin_quarter();
  TurnBasedGame bin = binary_transform(fx.game);
  REQUIRE(bin.n() == 5);
  CHECK(bin.states[3] == "s~");
  CHECK(bin.states[4] == "s~0");
  CHECK(bin.owners[3] == Owner::Random);
  CHECK(bin.dist[0] == Distribution{{3, Rational(1)}});
  // Codeword 00 hits t, 01 hits u, and the right half collapses onto u.
  CHECK(bin.dist[3] == Distribution{{2, Rational(1, 2)}, {4, Rational(1, 2)}});
  CHECK(bin.dist[4] == Distribution{{1, Rational(1, 2)}, {2, Rational(1, 2)}});
  TbReachResult res = tb_reach_strategy_improvement(bin, {false, true, false, false, false});
  CHECK(res.values[0] == Rational(1, 4));
}

TEST_CASE("non-dyadic coins retry through the gadget root") {
  auto fx = fixtures::third_chain();
  TurnBasedGame bin = binary_transform(fx.game);
  REQUIRE(bin.n() == 6);
  CHECK(bin.states[3] == "s~");
  CHECK(bin.states[4] == "s~0");
  CHECK(bin.states[5] == "s~1");
  // Codeword 11 falls off the grid and loops back for another flip.
  CHECK(bin.dist[5] == Distribution{{2, Rational(1, 2)}, {3, Rational(1, 2)}});
  TbReachResult res = tb_reach_strategy_improvement(bin, {false, true, false, false, false, false});
  CHECK(res.values[0] == Rational(1, 3));
}

TEST_CASE("binary games pass through the transform untouched") {
  auto fx = fixtures::tb_reach_demo();
  TurnBasedGame bin = binary_transform(fx.game);
  CHECK(bin.states == fx.game.states);
  CHECK(bin.dist == fx.game.dist);
  CHECK(bin.edges == fx.game.edges);
}

TEST_CASE("the transform preserves reach values of original states") {
  testgen::Rng rng(97);
  int rewritten = 0;
  for (int round = 0; round < 15; ++round) {
    testgen::TurnBasedSpec spec;
    spec.max_states = 5;
    TurnBasedGame g = testgen::random_turn_based(rng, spec);
    std::vector<bool> target = testgen::random_subset(rng, g.n());
    TurnBasedGame bin = binary_transform(g);
    if (bin.n() > g.n()) ++rewritten;
    for (int s = 0; s < bin.n(); ++s) {
      if (bin.owners[s] != Owner::Random) continue;
      REQUIRE(bin.dist[s].size() <= 2);
      for (const auto& [t, p] : bin.dist[s]) {
        CHECK((p == Rational(1) || p == Rational(1, 2)));
      }
    }
    std::vector<bool> lifted(bin.n(), false);
    for (int s = 0; s < g.n(); ++s) lifted[s] = target[s];
    Valuation want = tb_reach_strategy_improvement(g, target).values;
    Valuation got = tb_reach_strategy_improvement(bin, lifted).values;
    for (int s = 0; s < g.n(); ++s) CHECK(got[s] == want[s]);
  }
  // The generator mixes denominators up to 8, so gadgets actually fire.
  CHECK(rewritten > 0);
}

TEST_CASE("termination bounds count the binary form") {
  auto demo = fixtures::tb_reach_demo();
  TerminationBound tb = termination_bound(demo.game);
  CHECK_FALSE(tb.transformed);
  CHECK(tb.step_bound == Rational(4));
  CHECK(tb.strategy_bound == Rational(2));

  auto coin = fixtures::third_chain();
  TerminationBound cb = termination_bound(coin.game);
  CHECK(cb.transformed);
  // Six states after the rewrite, four of them random.
  CHECK(cb.step_bound == Rational(6 * 64));
  CHECK(cb.strategy_bound == Rational(1));

  TurnBasedGame flat;
  flat.states = {"x", "y"};
  flat.owners = {Owner::P1, Owner::P1};
  flat.edges = {{0, 1}, {1}};
  flat.dist.resize(2);
  flat.rebuild_index();
  TerminationBound fb = termination_bound(flat);
  CHECK(fb.step_bound == Rational(2));
  CHECK(fb.strategy_bound == Rational(2));
}

TEST_CASE("anytime solver certifies matching pennies exactly") {
  auto fx = fixtures::matching_pennies_safety();
  SandwichReport rep = anytime_solve(fx.game, fx.set, Rational(0));
  CHECK(rep.stop == SandwichStop::ExactTermination);
  CHECK(rep.gap == Rational(0));
  CHECK(rep.values == Valuation{Rational(1, 2), Rational(1), Rational(0)});
  REQUIRE(rep.records.size() == 1);
  CHECK(rep.records[0].kind == StepKind::Terminal);
  for (const Valuation& lo : rep.lower)
    for (const Valuation& hi : rep.upper)
      for (int s = 0; s < fx.game.n(); ++s) CHECK(lo[s] <= hi[s]);
  CHECK(safety_value_under(fx.game, rep.final_selector, fx.set) == rep.values);
}

TEST_CASE("a loose epsilon stops the sandwich immediately") {
  auto fx = fixtures::matching_pennies_safety();
  SandwichReport rep = anytime_solve(fx.game, fx.set, Rational(1, 2));
  CHECK(rep.stop == SandwichStop::EpsilonGap);
  CHECK(rep.gap == Rational(1, 2));
  CHECK(rep.values == Valuation{Rational(1, 2), Rational(1), Rational(0)});
  CHECK(rep.records.empty());
}

TEST_CASE("the round cap reports the bounds reached so far") {
  auto fx = fixtures::irrational();
  SandwichReport rep = anytime_solve(fx.game, fx.set, Rational(0), 3);
  CHECK(rep.stop == SandwichStop::RoundCap);
  CHECK(rep.gap > Rational(0));
  REQUIRE(rep.lower.size() == 4);
  REQUIRE(rep.upper.size() == 4);
  for (size_t i = 0; i + 1 < rep.lower.size(); ++i) {
    CHECK(rep.lower[i][0] < rep.lower[i + 1][0]);
    CHECK(rep.upper[i][0] > rep.upper[i + 1][0]);
  }
  CHECK(rep.values == rep.lower.back());
  CHECK(rep.upper.back()[0] - rep.lower.back()[0] == rep.gap);
}

TEST_CASE("the sandwich narrows on the irrational fixture") {
  auto fx = fixtures::irrational();
  SandwichReport rep = anytime_solve(fx.game, fx.set, Rational(1, 1000));
  CHECK(rep.stop == SandwichStop::EpsilonGap);
  CHECK(rep.gap <= Rational(1, 1000));
  // sqrt(2) - 1 lies inside the certified interval.
  const Rational root2m1(414213562373095049L, 1000000000000000000L);
  CHECK(rep.values[0] < root2m1);
  CHECK(rep.values[0] + rep.gap > root2m1 - Rational(1, 1000000000));
}

TEST_CASE("anytime runs stay ordered on random concurrent games") {
  testgen::Rng rng(101);
  for (int round = 0; round < 10; ++round) {
    testgen::ConcurrentSpec spec;
    spec.max_states = 4;
    ConcurrentGame g = testgen::random_concurrent(rng, spec);
    std::vector<bool> F = testgen::random_subset(rng, g.n());
    SandwichReport rep = anytime_solve(g, F, Rational(1, 64));
    CHECK(rep.gap <= Rational(1, 64));
    for (const Valuation& lo : rep.lower)
      for (const Valuation& hi : rep.upper)
        for (int s = 0; s < g.n(); ++s) CHECK(lo[s] <= hi[s]);
    CHECK(safety_value_under(g, rep.final_selector, F) == rep.values);
  }
  CHECK_THROWS_AS(anytime_solve(p2_decides(), {true, true, false}, Rational(-1)),
                  std::invalid_argument);
}
