#pragma once

#include <vector>

#include "sgs/game.hpp"

namespace sgs {

// End component of an MDP: a state set that some selector can make closed
// and inside which the induced chain is strongly connected. move_sets[i]
// holds every retained move of states[i] (indices into the free player's
// move list, ascending).
struct EndComponent {
  std::vector<int> states;
  std::vector<std::vector<int>> move_sets;
};

// Maximal end components. `mdp` must leave exactly one player with choices
// (a chain counts as an MDP for player 2).
std::vector<EndComponent> mec_decomposition(const ConcurrentGame& mdp);

// Value of Reach(target) when the free player maximizes: least feasible
// point of the one-step-containment program, solved exactly. No qualitative
// preprocessing is needed on this side; minimizing the coordinate sum pins
// zero-value states on its own.
Valuation max_reach_value(const ConcurrentGame& mdp, const std::vector<bool>& target);

// Value of Reach(target) when the free player minimizes. States from which
// the player can avoid the target forever are pinned to zero first; the
// remaining system has the value vector as its greatest feasible point.
Valuation min_reach_value(const ConcurrentGame& mdp, const std::vector<bool>& target);

// Player 1 fixes xi1; player 2 then maximizes Reach(complement of F).
// Returns the pointwise complement, player 1's safety guarantee under xi1.
Valuation safety_value_under(const ConcurrentGame& g, const Selector& xi1,
                             const std::vector<bool>& F);

// A selector is proper when the MDP it induces has no end component avoiding
// both the target T and the set W2; play under any counter-strategy then
// reaches T ∪ W2 almost surely.
bool is_proper(const ConcurrentGame& g, const Selector& xi1, const std::vector<bool>& T,
               const std::vector<bool>& W2);

}  // namespace sgs
