#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sgs/io.hpp"
#include "sgs/reachability.hpp"
#include "sgs/safety_improvement.hpp"
#include "sgs/tb_reduction.hpp"

namespace {

using namespace sgs;

struct Args {
  std::string file;
  std::string out;        // empty or "-": stdout
  std::string trace;      // empty: no trace file
  std::string valuation;  // reduce only
  std::string epsilon;    // exact "p/q", empty: unset
  long max_iters = 10000;
  long rounds = -1;      // solve-reach VI round count, -1: unset
  long max_rounds = -1;  // anytime cap, -1: unlimited
  int digits = 12;
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << text;
  if (!out) throw std::invalid_argument("cannot write file: " + path);
}

Rational parse_flag_rational(const std::string& text, const char* flag) {
  try {
    return Rational::parse(text);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string(flag) + ": " + e.what());
  }
}

// Instances are solved over the concurrent model; turn-based games embed
// with one passive move for the non-owner, keeping state ids and indices.
ConcurrentGame playable(const GameFile& gf) {
  return gf.turn_based ? embed_turn_based(gf.turn) : gf.concurrent;
}

// Strategy rows for a result file. Turn-based inputs only report player-1
// states (the embedding's passive "-" moves carry no information); move
// labels there are the chosen successor ids.
NamedStrategy named_strategy(const GameFile& gf, const ConcurrentGame& g, const Selector& sel) {
  NamedStrategy rows(g.n());
  for (int s = 0; s < g.n(); ++s) {
    if (gf.turn_based && gf.turn.owners[s] != Owner::P1) continue;
    for (const auto& [m, p] : sel.dist[s]) rows[s].emplace_back(g.moves1[s][m], p);
  }
  return rows;
}

const char* stop_name(StopReason r) {
  switch (r) {
    case StopReason::ExactTermination: return "ExactTermination";
    case StopReason::IterationCap: return "IterationCap";
    case StopReason::EpsilonGap: return "EpsilonGap";
  }
  return "IterationCap";
}

const char* stop_name(SandwichStop r) {
  switch (r) {
    case SandwichStop::UpperStabilized: return "UpperStabilized";
    case SandwichStop::ExactTermination: return "ExactTermination";
    case SandwichStop::EpsilonGap: return "EpsilonGap";
    case SandwichStop::RoundCap: return "RoundCap";
  }
  return "RoundCap";
}

int run_validate(const Args& a) {
  parse_game_file(a.file);
  std::cout << "ok\n";
  return 0;
}

int run_solve_safety(const Args& a) {
  GameFile gf = parse_game_file(a.file);
  if (gf.objective.reach)
    throw std::invalid_argument("solve-safety requires a safety objective");
  const ConcurrentGame g = playable(gf);
  const std::vector<bool>& F = gf.objective.states;

  SolveOptions opt;
  opt.max_iterations = a.max_iters;
  Valuation upper;
  if (!a.epsilon.empty()) {
    opt.epsilon_gap = parse_flag_rational(a.epsilon, "--epsilon");
    upper.assign(g.n(), Rational(0));
    for (int s = 0; s < g.n(); ++s)
      if (F[s]) upper[s] = Rational(1);
    opt.next_upper = [&]() {
      upper = safety_upper_step(g, F, upper);
      return upper;
    };
  }

  const SolveReport rep = solve_safety(g, F, opt);

  ResultMeta meta;
  meta.iterations = static_cast<long>(rep.records.size());
  meta.stop_reason = stop_name(rep.stop);
  if (!a.epsilon.empty()) {
    Rational gap(0);
    for (int s = 0; s < g.n(); ++s) {
      const Rational d = upper[s] - rep.final_valuation[s];
      if (d > gap) gap = d;
    }
    if (rep.stop == StopReason::ExactTermination) gap = Rational(0);
    meta.gap = gap;
    meta.lower_bound = rep.final_valuation;
    meta.upper_bound = upper;
  }
  write_output(a.out, render_result(g.states, rep.final_valuation,
                                    named_strategy(gf, g, rep.final_selector), meta, a.digits));
  if (!a.trace.empty()) write_output(a.trace, render_trace(g.states, rep.records));
  return rep.stop == StopReason::IterationCap ? 3 : 0;
}

int run_solve_reach(const Args& a) {
  GameFile gf = parse_game_file(a.file);
  if (!gf.objective.reach)
    throw std::invalid_argument("solve-reach requires a reachability objective");

  if (gf.turn_based) {
    const TurnBasedGame& g = gf.turn;
    const TbReachResult res = tb_reach_strategy_improvement(g, gf.objective.states);
    NamedStrategy rows(g.n());
    for (int s = 0; s < g.n(); ++s)
      if (g.owners[s] == Owner::P1)
        rows[s].emplace_back(g.states[g.edges[s][res.choice[s]]], Rational(1));
    ResultMeta meta;
    meta.iterations = res.iterations;
    meta.stop_reason = "ExactTermination";
    write_output(a.out, render_result(g.states, res.values, rows, meta, a.digits));
    return 0;
  }

  if (a.rounds < 0 && a.epsilon.empty())
    throw std::invalid_argument("solve-reach on a concurrent game needs --rounds or --epsilon");
  const ConcurrentGame& g = gf.concurrent;
  const std::vector<bool>& target = gf.objective.states;
  std::optional<Rational> eps;
  if (!a.epsilon.empty()) eps = parse_flag_rational(a.epsilon, "--epsilon");

  Valuation u(g.n(), Rational(0));
  for (int s = 0; s < g.n(); ++s)
    if (target[s]) u[s] = Rational(1);
  long iterations = 0;
  std::string stop = "RoundCap";
  for (;;) {
    if (a.rounds >= 0 && iterations == a.rounds) break;
    Valuation next = reach_lower_step(g, target, 1, u);
    ++iterations;
    Rational inc(0);
    for (int s = 0; s < g.n(); ++s) {
      const Rational d = next[s] - u[s];
      if (d > inc) inc = d;
    }
    u = std::move(next);
    if (eps && inc <= *eps) {
      stop = "EpsilonGap";
      break;
    }
  }

  ResultMeta meta;
  meta.iterations = iterations;
  meta.stop_reason = stop;
  write_output(a.out, render_result(g.states, u, {}, meta, a.digits));
  return 0;
}

int run_anytime(const Args& a) {
  GameFile gf = parse_game_file(a.file);
  const ConcurrentGame g = playable(gf);
  const Rational eps = parse_flag_rational(a.epsilon, "--epsilon");

  if (!gf.objective.reach) {
    const SandwichReport rep = anytime_solve(g, gf.objective.states, eps, a.max_rounds);
    ResultMeta meta;
    meta.iterations = static_cast<long>(rep.lower.size());
    meta.stop_reason = stop_name(rep.stop);
    meta.gap = rep.gap;
    meta.lower_bound = rep.lower.back();
    meta.upper_bound = rep.upper.back();
    write_output(a.out, render_result(g.states, rep.values,
                                      named_strategy(gf, g, rep.final_selector), meta, a.digits));
    if (!a.trace.empty()) write_output(a.trace, render_sandwich_trace(g.states, rep));
    return rep.stop == SandwichStop::RoundCap ? 3 : 0;
  }

  // Reach(T) for player 1 equals one minus the swapped opponent's safety
  // value of the complement; the sandwich runs on that dual instance and the
  // bounds map back with their roles exchanged. A --trace file shows the
  // dual safety run.
  const ConcurrentGame dual = swap_players(g);
  std::vector<bool> safe(g.n());
  for (int s = 0; s < g.n(); ++s) safe[s] = !gf.objective.states[s];
  const SandwichReport rep = anytime_solve(dual, safe, eps, a.max_rounds);

  auto complement = [&](const Valuation& v) {
    Valuation out(g.n());
    for (int s = 0; s < g.n(); ++s) out[s] = Rational(1) - v[s];
    return out;
  };
  ResultMeta meta;
  meta.iterations = static_cast<long>(rep.lower.size());
  meta.stop_reason = stop_name(rep.stop);
  meta.gap = rep.gap;
  meta.lower_bound = complement(rep.upper.back());
  meta.upper_bound = complement(rep.lower.back());
  write_output(a.out, render_result(g.states, complement(rep.values), {}, meta, a.digits));
  if (!a.trace.empty()) write_output(a.trace, render_sandwich_trace(g.states, rep));
  return rep.stop == SandwichStop::RoundCap ? 3 : 0;
}

int run_to_binary(const Args& a) {
  GameFile gf = parse_game_file(a.file);
  if (!gf.turn_based) throw std::invalid_argument("to-binary requires a turn-based game");
  GameFile out;
  out.turn_based = true;
  out.turn = binary_transform(gf.turn);
  out.objective.reach = gf.objective.reach;
  // Coin states are transient: keeping them safe and outside the target
  // preserves every original value.
  out.objective.states = gf.objective.states;
  out.objective.states.resize(out.turn.states.size(), !out.objective.reach);
  write_output(a.out, render_game(out));
  return 0;
}

int run_bounds(const Args& a) {
  GameFile gf = parse_game_file(a.file);
  if (!gf.turn_based) throw std::invalid_argument("bounds requires a turn-based game");
  write_output(a.out, render_bounds(termination_bound(gf.turn)));
  return 0;
}

int run_reduce(const Args& a) {
  GameFile gf = parse_game_file(a.file);
  if (gf.turn_based) throw std::invalid_argument("reduce requires a concurrent game");
  if (gf.objective.reach) throw std::invalid_argument("reduce requires a safety objective");
  const Valuation v = parse_valuation_file(a.valuation, gf.concurrent.states);
  const ReducedGame red = tb_reduce(gf.concurrent, v, gf.objective.states);
  GameFile out;
  out.turn_based = true;
  out.turn = red.game;
  out.objective.reach = false;
  out.objective.states = red.safe;
  write_output(a.out, render_game(out));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact solver for two-player stochastic games"};
  app.require_subcommand(1);
  Args a;

  auto add_file = [&](CLI::App* cmd) {
    cmd->add_option("file", a.file, "instance file")->required();
  };
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("-o,--output", a.out, "output file (default: stdout)");
  };
  auto add_digits = [&](CLI::App* cmd) {
    cmd->add_option("--digits", a.digits, "decimal rendering precision (default 12)");
  };

  CLI::App* validate = app.add_subcommand("validate", "parse and validate an instance");
  add_file(validate);

  CLI::App* safety = app.add_subcommand("solve-safety", "exact strategy improvement for safety");
  add_file(safety);
  safety->add_option("--epsilon", a.epsilon,
                     "also iterate an upper bound and stop at this certified gap");
  safety->add_option("--max-iters", a.max_iters, "improvement round cap (default 10000)");
  safety->add_option("--trace", a.trace, "write a newline-delimited iteration trace here");
  add_output(safety);
  add_digits(safety);

  CLI::App* reach = app.add_subcommand(
      "solve-reach", "reachability: strategy improvement (turn-based) or value iteration");
  add_file(reach);
  reach->add_option("--rounds", a.rounds, "value-iteration round count (concurrent games)");
  reach->add_option("--epsilon", a.epsilon,
                    "stop value iteration once a round improves by at most this");
  add_output(reach);
  add_digits(reach);

  CLI::App* anytime = app.add_subcommand("anytime", "interleaved lower/upper sandwich solver");
  add_file(anytime);
  anytime->add_option("--epsilon", a.epsilon, "certified gap to stop at")->required();
  anytime->add_option("--max-rounds", a.max_rounds, "round cap (default: unlimited)");
  anytime->add_option("--trace", a.trace, "write a newline-delimited iteration trace here");
  add_output(anytime);
  add_digits(anytime);

  CLI::App* tobin = app.add_subcommand("to-binary",
                                       "rewrite random states into fair-coin gadgets");
  add_file(tobin);
  add_output(tobin);

  CLI::App* bounds = app.add_subcommand("bounds", "worst-case improvement round counts");
  add_file(bounds);
  add_output(bounds);

  CLI::App* reduce = app.add_subcommand("reduce",
                                        "turn-based restriction against a fixed valuation");
  add_file(reduce);
  reduce->add_option("--valuation", a.valuation, "per-state valuation file")->required();
  add_output(reduce);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return run_validate(a);
    if (safety->parsed()) return run_solve_safety(a);
    if (reach->parsed()) return run_solve_reach(a);
    if (anytime->parsed()) return run_anytime(a);
    if (tobin->parsed()) return run_to_binary(a);
    if (bounds->parsed()) return run_bounds(a);
    if (reduce->parsed()) return run_reduce(a);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
