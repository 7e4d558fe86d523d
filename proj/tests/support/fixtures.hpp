#pragma once

#include <vector>

#include "sgs/game.hpp"

// Hand-built instances with known behavior, shared by the unit tests, the
// CLI data files and the acceptance checks.
namespace sgs::fixtures {

struct ConcurrentFixture {
  ConcurrentGame game;
  std::vector<bool> set;  // safe set or reach target, per the fixture's name
};

struct TurnBasedFixture {
  TurnBasedGame game;
  std::vector<bool> set;
};

// Matching pennies: one interior state, matched moves reach "good",
// mismatched moves reach "bad". Safety value at the interior state is 1/2.
ConcurrentFixture matching_pennies_safety();
// Same game with Reach({good}); value 1/2 at the interior state.
ConcurrentFixture matching_pennies_reach();

// Eight-state turn-based game whose improvement run stalls at a valuation
// with an empty single-state improvement set strictly below the optimum,
// so only the turn-based round can make progress: the plateau holds
// {s0, s1, s2} at 1/3 while the optimum at s0 is 2/3 (player 1 commits to
// s2; player 2's only escape from the loop yields 2/3). Safety objective:
// everything except "bad".
TurnBasedFixture stagnation();

// Concurrent game with irrational safety value sqrt(2) - 1 at state "s":
// the one-shot game at s has payoff rows [(1+v)/2, 0] and [0, 1], whose
// fixpoint solves v^2 + 2v - 1 = 0. Every improvement round is a single
// state switch and the loop never terminates.
ConcurrentFixture irrational();

// One random state with distribution {t: 1/4, u: 3/4}; exercising the
// two-level coin gadget of binary_transform. Reach target {t}.
TurnBasedFixture coin_quarter();

// One random state with distribution {t: 1/3, u: 2/3}; the binary gadget
// needs a retry loop (reach probability of t through the coins solves
// x = 1/4 + x/4). Reach target {t}.
TurnBasedFixture third_chain();

// Small reachability demo: s0 owned by player 1 with a direct edge to the
// target and a detour through a fair coin. Target {t}.
TurnBasedFixture tb_reach_demo();

}  // namespace sgs::fixtures
