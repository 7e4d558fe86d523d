#pragma once

#include <vector>

#include "sgs/game.hpp"
#include "sgs/safety_improvement.hpp"

namespace sgs {

// Exact value iteration for Reach(target) from below. Entry 0 is the target
// indicator; each later entry replaces every non-target coordinate with the
// matrix-game value of the previous entry from the maximizing player's side
// (for_player 2 maximizes the transposed local game). Returns rounds + 1
// valuations forming a nondecreasing chain of lower bounds on the reach
// value.
std::vector<Valuation> value_iteration_reach(const ConcurrentGame& g,
                                             const std::vector<bool>& target, int for_player,
                                             long rounds);

// Exact value iteration for Safe(F) from above: starts at the indicator of
// F, keeps the complement of F at 0 and backs up the player-1 matrix value
// elsewhere. Returns rounds + 1 valuations forming a nonincreasing chain of
// upper bounds on the safety value.
std::vector<Valuation> value_iteration_safe_upper(const ConcurrentGame& g,
                                                  const std::vector<bool>& F, long rounds);

// One backup of the reach chain: pins the target at 1 and replaces every
// other entry with the maximizing player's matrix value of prev. Applied to
// any term of the chain it yields the next one.
Valuation reach_lower_step(const ConcurrentGame& g, const std::vector<bool>& target,
                           int for_player, const Valuation& prev);

// One backup of the upper chain: pins the complement of F at 0 and replaces
// every other entry with the player-1 matrix value of prev. Applied to any
// term of the chain it yields the next one.
Valuation safety_upper_step(const ConcurrentGame& g, const std::vector<bool>& F,
                            const Valuation& prev);

struct TbReachResult {
  Valuation values;        // exact Reach(target) value of every state
  std::vector<int> choice; // optimal edge (position in E(s)) per player-1 state, -1 elsewhere
  long iterations = 0;     // exact policy evaluations performed (at least 1)
};

// Strategy improvement for reachability on a turn-based game. Starts from
// the attractor selector toward target ∪ (player 2's sure-avoidance set),
// which reaches that union almost surely under any opposition; every round
// evaluates the current pure strategy exactly and reroutes each improvable
// player-1 state to its first edge with a strictly larger value. Successive
// evaluations never decrease, strictly increase at every rerouted state,
// and the loop stops at the exact values.
TbReachResult tb_reach_strategy_improvement(const TurnBasedGame& g,
                                            const std::vector<bool>& target);

enum class SandwichStop { UpperStabilized, ExactTermination, EpsilonGap, RoundCap };

// Interleaved run of the safety improver (lower bounds) and safety value
// iteration from above (upper bounds), one round each per entry. lower[i]
// and upper[i] are the bounds entering round i; every lower entry is
// pointwise below every upper entry. `values` is exact when `stop` is
// UpperStabilized or ExactTermination (gap 0), otherwise the last lower
// bound with `gap` the largest pointwise distance still open. `records`
// documents the improvement rounds actually applied on `absorbed`, in the
// same convention as SolveReport.
struct SandwichReport {
  std::vector<Valuation> lower;
  std::vector<Valuation> upper;
  std::vector<IterationRecord> records;
  Valuation values;
  Rational gap;
  SandwichStop stop = SandwichStop::RoundCap;
  std::vector<bool> w1;
  ConcurrentGame absorbed;
  // Selector over the original game guaranteeing the reported lower bound,
  // in the same convention as SolveReport::final_selector.
  Selector final_selector;
};

// Anytime safety solver: each round first closes out if the current gap is
// within epsilon (or the round cap is hit), then advances the upper bound
// one backup (stopping exactly when it reproduces itself) and the lower
// bound one improvement round (stopping exactly on a Terminal step).
// max_rounds < 0 means no cap.
SandwichReport anytime_solve(const ConcurrentGame& g, const std::vector<bool>& F,
                             const Rational& epsilon, long max_rounds = -1);

// Rewrites every random state with more than two successors, or with
// successor probabilities other than 1 and 1/2, into a fair-coin gadget:
// the state keeps its identity and moves with probability 1 to the root of
// a binary tree whose 2^m leaves spell the m-bit codewords, codewords below
// the probability grid resolve to the original successors and the rest loop
// back to the root for a retry. Single-destination subtrees become direct
// edges. Auxiliary states are appended after the originals with ids like
// "s~", "s~0", "s~01" (root, then left-packed bit paths); reach values of
// original states are preserved and auxiliary states are transient.
TurnBasedGame binary_transform(const TurnBasedGame& g);

// Worst-case round counts for strategy improvement on a turn-based game,
// as exact integers: step_bound caps the improvement rounds of the
// reachability solver on the binary version of the game, strategy_bound
// counts the pure player-1 strategies (an upper bound for any
// nonrepeating improvement scheme). Games that are not already binary are
// transformed first and measured after the rewrite.
struct TerminationBound {
  Rational step_bound;      // |S| * 4^(|S_R| - 1), with 4^0 for |S_R| = 0
  Rational strategy_bound;  // product of |E(s)| over player-1 states, empty product 1
  bool transformed = false; // bounds were taken on binary_transform(g)
};
TerminationBound termination_bound(const TurnBasedGame& g);

}  // namespace sgs
