#include "doctest.h"
#include "sgs/mdp.hpp"
#include "sgs/qualitative.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace sgs;

TEST_CASE("almost_sure_safe on matching pennies keeps only the sink") {
  auto fx = fixtures::matching_pennies_safety();
  AlmostSureSafe w = almost_sure_safe(fx.game, fx.set);
  CHECK(w.winning == std::vector<bool>{false, true, false});
  CHECK(w.witness[1] == 0);
  CHECK(w.witness[0] == -1);
}

TEST_CASE("almost_sure_safe keeps controlled loops") {
  // a0 stays at s forever, a1 gambles and can lose.
  ConcurrentGame g;
  g.states = {"s", "bad"};
  g.moves1 = {{"a0", "a1"}, {"-"}};
  g.moves2 = {{"b0"}, {"-"}};
  g.delta.resize(2);
  g.delta[0] = {{{{0, Rational(1)}}}, {{{1, Rational(1)}}}};
  g.delta[1] = {{{{1, Rational(1)}}}};
  g.rebuild_index();
  require_valid(g);
  AlmostSureSafe w = almost_sure_safe(g, {true, false});
  CHECK(w.winning == std::vector<bool>{true, false});
  CHECK(w.witness[0] == 0);
}

TEST_CASE("turn-based almost_sure_safe on the stagnation fixture") {
  auto fx = fixtures::stagnation();
  AlmostSureSafe w = almost_sure_safe(fx.game, fx.set);
  // Every interior state is eventually dragged through a lossy coin.
  std::vector<bool> expect(8, false);
  expect[6] = true;  // home
  CHECK(w.winning == expect);
  CHECK(w.witness[6] == 0);
}

TEST_CASE("almost-sure safety matches value one in the enumeration oracle") {
  testgen::Rng rng(47);
  for (int round = 0; round < 30; ++round) {
    testgen::TurnBasedSpec spec;
    spec.max_states = 5;
    spec.p1_choice_cap = 9;
    spec.p2_choice_cap = 9;
    TurnBasedGame g = testgen::random_turn_based(rng, spec);
    std::vector<bool> F = testgen::random_subset(rng, g.n());
    AlmostSureSafe w = almost_sure_safe(g, F);
    Valuation exact = oracle::tb_safe_oracle(g, F);
    for (int s = 0; s < g.n(); ++s) CHECK(w.winning[s] == (exact[s] == Rational(1)));
  }
}

TEST_CASE("zero_reach_states on the stagnation fixture") {
  auto fx = fixtures::stagnation();
  std::vector<bool> bad_target(8, false);
  bad_target[7] = true;
  // Only home is immune to ever reaching bad, for either driver.
  std::vector<bool> expect(8, false);
  expect[6] = true;
  CHECK(zero_reach_states(fx.game, bad_target, 1) == expect);
  CHECK(zero_reach_states(fx.game, bad_target, 2) == expect);
}

TEST_CASE("zero_reach_states matches zero values in the enumeration oracle") {
  testgen::Rng rng(53);
  for (int round = 0; round < 30; ++round) {
    testgen::TurnBasedSpec spec;
    spec.max_states = 5;
    spec.p1_choice_cap = 9;
    spec.p2_choice_cap = 9;
    TurnBasedGame g = testgen::random_turn_based(rng, spec);
    std::vector<bool> target = testgen::random_subset(rng, g.n());
    Valuation exact = oracle::tb_reach_oracle(g, target);
    std::vector<bool> zero = zero_reach_states(g, target, 1);
    for (int s = 0; s < g.n(); ++s) CHECK(zero[s] == (exact[s] == Rational(0)));
  }
}

TEST_CASE("zero_reach_states concurrent overload agrees with the embedding") {
  testgen::Rng rng(59);
  for (int round = 0; round < 20; ++round) {
    TurnBasedGame g = testgen::random_turn_based(rng);
    std::vector<bool> target = testgen::random_subset(rng, g.n());
    for (int player : {1, 2}) {
      CHECK(zero_reach_states(g, target, player) ==
            zero_reach_states(embed_turn_based(g), target, player));
    }
  }
}

TEST_CASE("attractor_selector reaches the goal from everywhere") {
  auto fx = fixtures::tb_reach_demo();
  std::vector<bool> goal = fx.set;  // {t}
  goal[3] = true;                   // z joins as player 2's avoidance region
  AttractorResult attr = attractor_selector(fx.game, goal);
  REQUIRE(!attr.stages.empty());
  CHECK(attr.stages.front() == std::vector<int>{2, 3});
  CHECK(attr.stages.back().size() == 4);
  CHECK(attr.selector[0] == 1);  // s0 jumps straight to t
  CHECK(attr.selector[1] == -1);
  std::vector<bool> w2(4, false);
  w2[3] = true;
  std::vector<int> choice(4, 0);
  for (int s = 0; s < 4; ++s)
    if (fx.game.owners[s] == Owner::P1) choice[s] = attr.selector[s];
  CHECK(is_proper(embed_turn_based(fx.game), pure_selector(1, choice), fx.set, w2));
}

TEST_CASE("attractor_selector requires an exhaustive target") {
  auto fx = fixtures::tb_reach_demo();
  // z cannot reach {t}, so the stages cannot cover the state space.
  CHECK_THROWS_AS(attractor_selector(fx.game, fx.set), std::invalid_argument);
}

TEST_CASE("attractor selectors are proper on random games") {
  testgen::Rng rng(61);
  for (int round = 0; round < 40; ++round) {
    TurnBasedGame g = testgen::random_turn_based(rng);
    std::vector<bool> target = testgen::random_subset(rng, g.n());
    std::vector<bool> w2 = zero_reach_states(g, target, 1);
    std::vector<bool> goal(g.n());
    for (int s = 0; s < g.n(); ++s) goal[s] = target[s] || w2[s];
    AttractorResult attr = attractor_selector(g, goal);
    std::vector<int> choice(g.n(), 0);
    for (int s = 0; s < g.n(); ++s)
      if (g.owners[s] == Owner::P1) choice[s] = attr.selector[s];
    CHECK(is_proper(embed_turn_based(g), pure_selector(1, choice), target, w2));
  }
}
