#pragma once

#include <vector>

#include "sgs/game.hpp"

namespace sgs {

struct AlmostSureSafe {
  std::vector<bool> winning;  // states with safety value exactly 1
  // Pure witness at each winning state (first qualifying move/successor in
  // declaration order); -1 elsewhere.
  std::vector<int> witness;
};

// States where player 1 can stay in F with probability 1. Greatest fixpoint
// of X -> {s in F ∩ X | some move a has Dest(s,a,b) ⊆ X for every b}. At any
// state outside the fixpoint every player-1 move has an escaping reply, so
// the uniform player-2 selector forces each visit to leave with probability
// at least (min transition probability)/|moves2|; staying forever then has
// probability 0, which is why the sure fixpoint already captures the
// almost-sure set.
AlmostSureSafe almost_sure_safe(const ConcurrentGame& g, const std::vector<bool>& F);

// Turn-based counterpart: player-1 states need one edge back into X, the
// other states need every edge inside X.
AlmostSureSafe almost_sure_safe(const TurnBasedGame& g, const std::vector<bool>& F);

// States with Reach(target) value 0 for `player`: complement of the set
// grown from the target by "player can step in / others must step in".
std::vector<bool> zero_reach_states(const TurnBasedGame& g, const std::vector<bool>& target,
                                    int player);
std::vector<bool> zero_reach_states(const ConcurrentGame& g, const std::vector<bool>& target,
                                    int player);

struct AttractorResult {
  std::vector<std::vector<int>> stages;  // cumulative stage sets, ascending indices
  // Player-1 choice (position in E(s)) pointing one stage closer to the
  // target, first-in-declaration-order both inside the target and out; -1 at
  // states player 1 does not own.
  std::vector<int> selector;
};

// Probabilistic attractor of `target` for player 1: a stage adds player-1
// and random states with one edge into the previous stage and player-2
// states with every edge inside it. The stages must exhaust the state space
// (callers pass target = T ∪ W2); anything less is an error.
AttractorResult attractor_selector(const TurnBasedGame& g, const std::vector<bool>& target);

}  // namespace sgs
