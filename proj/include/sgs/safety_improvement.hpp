#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "sgs/game.hpp"
#include "sgs/matrix_game.hpp"

namespace sgs {

enum class StepKind { PreStep, TbStep, Terminal };
enum class StopReason { ExactTermination, IterationCap, EpsilonGap };

// One round of the improvement loop: the selector in force, its exact
// valuation, and the improvement applied when moving on. Terminal records
// carry no improved states.
struct IterationRecord {
  int index = 0;
  Selector selector;
  Valuation valuation;
  StepKind kind = StepKind::Terminal;
  std::vector<int> improved;  // ascending state indices
};

struct ImprovementStep {
  Selector next;
  StepKind kind = StepKind::Terminal;
  std::vector<int> improved;
};

struct SolveOptions {
  long max_iterations = 10000;
  // Gap stop: quit once upper(s) - v_i(s) <= epsilon_gap at every state.
  // Ignored unless next_upper is set.
  std::optional<Rational> epsilon_gap;
  // Called once per iteration; must return a pointwise upper bound on the
  // safety value (each call may tighten the previous one).
  std::function<Valuation()> next_upper;
};

// records[i] documents iteration i; on an exact stop the last record is
// Terminal, on a cap or gap stop the final selector and valuation carry the
// state reached after the last recorded improvement. Valuations never
// decrease between consecutive records and strictly increase somewhere
// whenever the selector changed.
struct SolveReport {
  std::vector<IterationRecord> records;
  bool terminated = false;  // true exactly when the last record is Terminal
  StopReason stop = StopReason::IterationCap;
  std::vector<bool> w1;       // states of the input with safety value 1
  ConcurrentGame absorbed;    // preprocessed copy the run operated on
  // Selector over the original game: the run's mix at interior states, the
  // qualitative witness on w1, uniform on unsafe states.
  Selector final_selector;
  Valuation final_valuation;
};

// Uniform mix over player 1's moves at every state.
Selector initial_selector(const ConcurrentGame& g);

// One improvement round on a preprocessed game (every state of w1 and every
// unsafe state absorbing). First tries single-state improvements: states
// where the one-shot value beats v switch to an optimal mix. If none exist,
// player 1 switches, at every almost-surely safe base state of the
// turn-based restriction against v, to the witness of a winning support
// pair. If that set is empty too the step is Terminal and v is the exact
// safety value. v must be exactly the value of sel; anything stale is
// rejected with std::invalid_argument.
ImprovementStep improvement_step(const ConcurrentGame& g, const std::vector<bool>& F,
                                 const std::vector<bool>& w1, const Selector& sel,
                                 const Valuation& v);

// Full run: computes w1, makes w1 and the unsafe states absorbing, starts
// from the uniform selector and iterates improvement_step with the
// valuation recomputed exactly every round. Every recorded valuation is a
// pointwise lower bound on the safety value.
SolveReport solve_safety(const ConcurrentGame& g, const std::vector<bool>& F,
                         const SolveOptions& opt = {});

// All mixes over player 1's moves at s whose probabilities share a common
// denominator j <= k (positive numerators summing to j), deduplicated after
// reduction to lowest terms, in deterministic order: denominators ascending,
// then weight shifted toward lower move indices first. k = 1 gives exactly
// the pure mixes. Throws ResourceError when the enumeration exceeds the
// configured budget.
std::vector<Distribution> enumerate_k_uniform(const ConcurrentGame& g, int s, long k);

// Turn-based expansion of the restricted game: player 1 first commits to a
// k-uniform mix, player 2 answers with a move, and the transition mixes the
// committed distribution with delta. States are named like the turn-based
// restriction ("s#{a:1/2,b:1/2}" and "s#{a:1/2,b:1/2}#b"); auxiliary states
// are safe exactly when their base state is.
struct KUniformGame {
  TurnBasedGame game;
  std::vector<bool> safe;
  std::vector<int> base_of;               // owning original state
  std::vector<Distribution> selector_of;  // committed mix at P2 states, empty elsewhere
};
KUniformGame k_uniform_turn_based(const ConcurrentGame& g, const std::vector<bool>& F, long k);

// solve_safety with every switch restricted to k-uniform mixes: single-state
// rounds pick the best k-uniform guarantee, and the turn-based round fires
// only when every winning base state has a k-uniform witness realizing one
// of its winning support pairs (same support, same counter set). Valuations
// stay pointwise below the unrestricted run's when both start uniform.
SolveReport solve_safety_k_uniform(const ConcurrentGame& g, const std::vector<bool>& F, long k,
                                   const SolveOptions& opt = {});

}  // namespace sgs
