#pragma once

#include <vector>

#include "sgs/game.hpp"
#include "sgs/matrix_game.hpp"

namespace sgs {

enum class ReducedKind { Base, Pair, Choice };

// One realizable optimal support pair kept with the reduced game so that
// lifting a winning strategy never has to re-solve the one-shot game.
struct ReducedPair {
  int state;                       // base state the pair belongs to
  std::vector<int> support;        // player-1 move indices, ascending
  std::vector<int> counter_moves;  // player-2 move indices, ascending
  Distribution witness;            // mixed move with exactly that support and counter set
};

struct ReducedGame {
  TurnBasedGame game;
  std::vector<bool> safe;          // lifted safe set over reduced states
  std::vector<ReducedKind> kinds;
  std::vector<int> base_of;        // original state behind each reduced state
  std::vector<int> pair_of;        // index into pairs at Pair states, -1 elsewhere
  std::vector<ReducedPair> pairs;
};

// Turn-based restriction of a concurrent game against a valuation. Player 1
// first commits to a realizable optimal support pair (A, B) of the one-shot
// game at s, player 2 answers with some reply b from B, and a uniform coin
// picks among the destinations reachable from s under (A, b). Base states
// keep their original indices; pair states are named "s#{A}#{B}" and choice
// states "s#{A}#b" with moves rendered in declaration order, and choice
// states are shared between pairs that agree on (A, b). The lifted safe set
// keeps each auxiliary state exactly when its base state is safe.
ReducedGame tb_reduce(const ConcurrentGame& g, const Valuation& v, const std::vector<bool>& F);

// Installs, at every state of U, the witness of the pair that the reduced
// strategy picks there; every other state keeps base's mix. choice[s] is an
// edge position at reduced state s, as produced by almost_sure_safe.
Selector lift_strategy(const ReducedGame& red, const std::vector<int>& choice,
                       const Selector& base, const std::vector<int>& U);

}  // namespace sgs
