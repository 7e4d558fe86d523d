#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sgs/game.hpp"
#include "sgs/reachability.hpp"
#include "sgs/safety_improvement.hpp"

namespace sgs {

// Parse or validation failure. `code` is a stable machine-readable id
// ("bad-rational", "unknown-state", "bad-distribution-sum",
// "missing-transition", ...), `where` the field path that triggered it;
// what() carries all three parts.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string code, std::string where, const std::string& message)
      : std::runtime_error("[" + code + "] " + (where.empty() ? "" : where + ": ") + message),
        code_(std::move(code)),
        where_(std::move(where)) {}
  const std::string& code() const { return code_; }
  const std::string& where() const { return where_; }

 private:
  std::string code_;
  std::string where_;
};

struct Objective {
  bool reach = false;        // false: `states` is the safe set, true: the target
  std::vector<bool> states;  // indicator over game states
};

// A parsed instance: exactly one of the two game members is meaningful.
struct GameFile {
  bool turn_based = false;
  ConcurrentGame concurrent;
  TurnBasedGame turn;
  Objective objective;
};

// Instance files are JSON with formatVersion 1, kind "concurrent" or
// "turn-based", and probabilities as exact "p/q" strings (plain integers
// allowed). Every shape or reference problem raises ParseError with a
// distinct code; the assembled game additionally passes full validation.
GameFile parse_game_text(const std::string& text, const std::string& origin);
GameFile parse_game_file(const std::string& path);

// Canonical serialization; parse_game_text(render_game(f)) reproduces the
// same states, probabilities and objective. Deterministic bytes.
std::string render_game(const GameFile& f);

// Bare state-to-"p/q" object covering every state, each value within [0,1].
Valuation parse_valuation_text(const std::string& text, const std::vector<std::string>& states,
                               const std::string& origin);
Valuation parse_valuation_file(const std::string& path, const std::vector<std::string>& states);

// Per-state rows of (label, probability); an empty row omits its state.
using NamedStrategy = std::vector<std::vector<std::pair<std::string, Rational>>>;

struct ResultMeta {
  long iterations = 0;
  std::string stop_reason;
  std::optional<Rational> gap;
  // Final certified bounds; emitted when nonempty.
  Valuation lower_bound;
  Valuation upper_bound;
};

// Result files carry every value twice, exact "p/q" plus a decimal rendering
// with the requested digit count; the exact field is authoritative.
std::string render_result(const std::vector<std::string>& states, const Valuation& values,
                          const NamedStrategy& strategy, const ResultMeta& meta,
                          int decimal_digits);

// Newline-delimited trace, one record per iteration: index, kind, improved
// state ids, full valuation. Emission re-checks the improvement ordering
// (lower chains never decrease, upper chains never increase, lower stays
// below upper) and refuses to write a violating trace.
std::string render_trace(const std::vector<std::string>& states,
                         const std::vector<IterationRecord>& records);
std::string render_sandwich_trace(const std::vector<std::string>& states,
                                  const SandwichReport& rep);

std::string render_bounds(const TerminationBound& b);

}  // namespace sgs
