#pragma once

#include <string>
#include <vector>

#include "sgs/game.hpp"
#include "sgs/lp.hpp"

namespace sgs {

// Zero-sum one-shot game: the row player maximizes the expected payoff, the
// column player minimizes it. Entries stay in [0,1] (payoffs are expected
// valuations).
struct MatrixGame {
  std::vector<std::string> row_moves;
  std::vector<std::string> col_moves;
  std::vector<std::vector<Rational>> payoff;  // [row][col]

  int rows() const { return static_cast<int>(row_moves.size()); }
  int cols() const { return static_cast<int>(col_moves.size()); }
};

void require_valid(const MatrixGame& m);
MatrixGame transpose(const MatrixGame& m);

// One-shot game at state s with payoffs given by the expected value of v
// after the joint move.
MatrixGame local_matrix(const ConcurrentGame& g, int s, const Valuation& v);

struct MatrixGameSolution {
  Rational value;
  Distribution row_strategy;  // optimal mixed strategies, zero entries dropped
  Distribution col_strategy;
};

// Exact value and one optimal strategy per player. Solves both players'
// linear programs and insists the two optima coincide; identical inputs
// produce identical strategies.
MatrixGameSolution game_value(const MatrixGame& m);

// Expected payoff when both sides fix mixed strategies.
Rational one_step_value(const MatrixGame& m, const Distribution& xi1, const Distribution& xi2);
// Guaranteed payoff of a fixed row strategy: the minimum is attained at a
// pure column, so only pure replies are scanned.
Rational guarantee_under(const MatrixGame& m, const Distribution& xi1);
// Value of the one-shot game at s, i.e. the best guarantee over row mixes.
Rational one_shot_value(const ConcurrentGame& g, int s, const Valuation& v);

// Does xi1 achieve the one-shot value at s?
bool is_value_optimal(const ConcurrentGame& g, int s, const Valuation& v, const Distribution& xi1);
// Player-2 moves whose reply to xi1 is tight against the one-shot value.
// Requires xi1 value-optimal.
std::vector<int> counter_optimal_moves(const ConcurrentGame& g, int s, const Valuation& v,
                                       const Distribution& xi1);

// One realizable (support, counter-optimal set) combination, together with a
// witness selector over exactly that support.
struct SupportPair {
  std::vector<int> support;        // player-1 move indices, ascending
  std::vector<int> counter_moves;  // player-2 move indices, ascending, nonempty
  Distribution witness;
};

// All pairs (A, B) such that some value-optimal selector with support
// exactly A has counter-optimal move set exactly B. Enumerates subsets in
// ascending bitmask order; realizability of each pair is decided by a
// maximum-slack feasibility program, whose point doubles as the witness.
std::vector<SupportPair> optimal_support_pairs(const ConcurrentGame& g, int s, const Valuation& v);

// Thrown when a configured enumeration budget is exceeded.
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Budget shared by subset and selector enumerations; overridden by the
// SGSOLVE_ENUM_BUDGET environment variable.
long enumeration_budget();

}  // namespace sgs
