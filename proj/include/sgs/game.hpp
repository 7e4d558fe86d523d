#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sgs/rational.hpp"

namespace sgs {

// Sparse probability distribution over state (or move) indices: entries are
// (index, probability) pairs sorted by index, probabilities strictly positive
// and summing to one. Zero entries are never stored.
using Distribution = std::vector<std::pair<int, Rational>>;

Rational dist_sum(const Distribution& d);
Distribution uniform_distribution(const std::vector<int>& support);
// Probability assigned to `index` (0 if absent).
Rational dist_at(const Distribution& d, int index);

// Valuation: one rational in [0,1] per state, indexed like Game::states.
using Valuation = std::vector<Rational>;

// Two-player concurrent game: at every state both players pick a move
// simultaneously and the joint choice fixes a probability distribution over
// successor states. Move lists are per state and per player; all iteration
// follows declaration order.
struct ConcurrentGame {
  std::vector<std::string> states;
  std::vector<std::vector<std::string>> moves1;  // [state][move]
  std::vector<std::vector<std::string>> moves2;
  // delta[s][a][b]: successor distribution for state s, player-1 move a,
  // player-2 move b (indices into the per-state move lists).
  std::vector<std::vector<std::vector<Distribution>>> delta;

  int n() const { return static_cast<int>(states.size()); }
  int state_index(const std::string& id) const;  // throws on unknown id
  int find_state(const std::string& id) const;   // -1 on unknown id
  int move_index(int player, int s, const std::string& id) const;
  void rebuild_index();

private:
  std::unordered_map<std::string, int> index_;
};

enum class Owner { P1, P2, Random };

// Turn-based stochastic game: each state is controlled by one player or by
// chance. E(s) lists the successors in declaration order; random states carry
// a distribution whose support is exactly E(s).
struct TurnBasedGame {
  std::vector<std::string> states;
  std::vector<Owner> owners;
  std::vector<std::vector<int>> edges;  // successor state indices
  std::vector<Distribution> dist;       // nonempty exactly at Random states

  int n() const { return static_cast<int>(states.size()); }
  int state_index(const std::string& id) const;
  int find_state(const std::string& id) const;
  void rebuild_index();

private:
  std::unordered_map<std::string, int> index_;
};

// Memoryless randomized strategy for one player: a distribution over that
// player's moves at every state. For turn-based games the "moves" of an
// owned state are positions into E(s).
struct Selector {
  int player = 1;  // 1 or 2
  std::vector<Distribution> dist;  // [state] -> distribution over move indices
};

Selector uniform_selector(const ConcurrentGame& g, int player);
Selector pure_selector(int player, const std::vector<int>& choice);

struct Violation {
  std::string code;
  std::string where;
  std::string message;
};

std::vector<Violation> validate_game(const ConcurrentGame& g);
std::vector<Violation> validate_game(const TurnBasedGame& g);
// Throws std::invalid_argument listing every violation.
void require_valid(const ConcurrentGame& g);
void require_valid(const TurnBasedGame& g);

// Support of the successor distribution for a joint pure move choice.
std::vector<int> dest(const ConcurrentGame& g, int s, int a, int b);
// Support of the mixed successor distribution under two selectors at s.
std::vector<int> dest_selectors(const ConcurrentGame& g, int s,
                                const Distribution& xi1, const Distribution& xi2);
// delta_{xi1,xi2}(s): exact mixture over both selectors' supports.
Distribution mixed_transition(const ConcurrentGame& g, int s,
                              const Distribution& xi1, const Distribution& xi2);

// Fixes `sel.player`'s choices, producing the induced one-player game (an
// MDP): the fixed player's move set collapses to the single synthetic move
// "*" and transitions are mixed by the selector's weights.
ConcurrentGame fix_selector(const ConcurrentGame& g, const Selector& sel);

// Copy of g where every state in X is replaced by a sink: single move "*"
// for both players and a probability-1 self-loop.
ConcurrentGame make_absorbing(const ConcurrentGame& g, const std::vector<bool>& X);

// Partition of states by valuation value, keys ascending.
std::vector<std::pair<Rational, std::vector<int>>> value_classes(const Valuation& v);

// Concurrent view of a turn-based game: the owner's moves are the successor
// ids, the passive player gets the single move "-", random states keep their
// distribution under a ("-","-") move pair. State ids and order carry over.
ConcurrentGame embed_turn_based(const TurnBasedGame& g);

// Mirror image of g with the two players' roles exchanged.
ConcurrentGame swap_players(const ConcurrentGame& g);

bool is_mdp_for(const ConcurrentGame& g, int free_player);

}  // namespace sgs
