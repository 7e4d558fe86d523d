#include "sgs/safety_improvement.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "sgs/mdp.hpp"
#include "sgs/qualitative.hpp"
#include "sgs/tb_reduction.hpp"

namespace sgs {

namespace {

bool is_absorbing_at(const ConcurrentGame& g, int s) {
  if (g.moves1[s].size() != 1 || g.moves2[s].size() != 1) return false;
  const Distribution& d = g.delta[s][0][0];
  return d.size() == 1 && d[0].first == s && d[0].second == Rational(1);
}

void require_preprocessed(const ConcurrentGame& g, const std::vector<bool>& F,
                          const std::vector<bool>& w1) {
  if (static_cast<int>(F.size()) != g.n() || static_cast<int>(w1.size()) != g.n())
    throw std::invalid_argument("improvement: F and w1 must cover every state");
  for (int s = 0; s < g.n(); ++s)
    if ((w1[s] || !F[s]) && !is_absorbing_at(g, s))
      throw std::invalid_argument("improvement: winning and unsafe states must be absorbing");
}

// Improvement outcome plus the one-step guarantee of each switched state;
// the solve loop checks the recomputed valuation against these floors.
struct StepOut {
  Selector next;
  StepKind kind = StepKind::Terminal;
  std::vector<int> improved;
  std::vector<Rational> floors;
};

StepOut improve_unrestricted(const ConcurrentGame& g, const std::vector<bool>& F,
                             const std::vector<bool>& w1, const Selector& sel,
                             const Valuation& v) {
  StepOut out;
  out.next = sel;
  std::vector<Distribution> switched(g.n());
  for (int s = 0; s < g.n(); ++s) {
    if (w1[s] || !F[s]) continue;
    MatrixGameSolution sol = game_value(local_matrix(g, s, v));
    if (sol.value > v[s]) {
      out.improved.push_back(s);
      out.floors.push_back(sol.value);
      switched[s] = std::move(sol.row_strategy);
    }
  }
  if (!out.improved.empty()) {
    out.kind = StepKind::PreStep;
    for (int s : out.improved) out.next.dist[s] = std::move(switched[s]);
    return out;
  }
  ReducedGame red = tb_reduce(g, v, F);
  AlmostSureSafe win = almost_sure_safe(red.game, red.safe);
  std::vector<int> U;
  for (int s = 0; s < g.n(); ++s)
    if (win.winning[s] && !w1[s]) U.push_back(s);
  if (!U.empty()) {
    out.kind = StepKind::TbStep;
    out.improved = U;
    out.next = lift_strategy(red, win.witness, sel, U);
  }
  return out;
}

std::vector<int> support_of(const Distribution& d) {
  std::vector<int> out;
  out.reserve(d.size());
  for (const auto& [a, p] : d) out.push_back(a);
  return out;
}

StepOut improve_restricted(const ConcurrentGame& g, const std::vector<bool>& F,
                           const std::vector<bool>& w1,
                           const std::vector<std::vector<Distribution>>& mixes,
                           const Selector& sel, const Valuation& v) {
  StepOut out;
  out.next = sel;
  std::vector<Distribution> switched(g.n());
  for (int s = 0; s < g.n(); ++s) {
    if (w1[s] || !F[s]) continue;
    MatrixGame local = local_matrix(g, s, v);
    Rational best = v[s];
    const Distribution* pick = nullptr;
    for (const Distribution& xi : mixes[s]) {
      Rational gain = guarantee_under(local, xi);
      if (gain > best) {
        best = gain;
        pick = &xi;
      }
    }
    if (pick != nullptr) {
      out.improved.push_back(s);
      out.floors.push_back(best);
      switched[s] = *pick;
    }
  }
  if (!out.improved.empty()) {
    out.kind = StepKind::PreStep;
    for (int s : out.improved) out.next.dist[s] = std::move(switched[s]);
    return out;
  }
  ReducedGame red = tb_reduce(g, v, F);
  AlmostSureSafe win = almost_sure_safe(red.game, red.safe);
  std::vector<int> U;
  for (int s = 0; s < g.n(); ++s)
    if (win.winning[s] && !w1[s]) U.push_back(s);
  if (U.empty()) return out;
  // The turn-based round needs a k-uniform witness with the exact support
  // and counter set of a winning pair at every state of U; applying only a
  // partial round could switch selectors without raising any value, so an
  // incomplete realization ends the run instead.
  std::vector<Distribution> lift(g.n());
  for (int s : U) {
    bool found = false;
    for (int p : red.game.edges[s]) {
      if (!win.winning[p]) continue;
      const ReducedPair& rp = red.pairs[red.pair_of[p]];
      for (const Distribution& xi : mixes[s]) {
        if (support_of(xi) != rp.support) continue;
        if (!is_value_optimal(g, s, v, xi)) continue;
        if (counter_optimal_moves(g, s, v, xi) != rp.counter_moves) continue;
        lift[s] = xi;
        found = true;
        break;
      }
      if (found) break;
    }
    if (!found) return out;
  }
  out.kind = StepKind::TbStep;
  out.improved = U;
  for (int s : U) out.next.dist[s] = std::move(lift[s]);
  return out;
}

void check_progress(const Valuation& v, const Valuation& v_next, const StepOut& step) {
  for (size_t s = 0; s < v.size(); ++s)
    if (v_next[s] < v[s]) throw std::logic_error("improvement decreased the valuation");
  if (step.kind == StepKind::PreStep) {
    for (size_t j = 0; j < step.improved.size(); ++j) {
      int s = step.improved[j];
      if (v_next[s] < step.floors[j] || !(v_next[s] > v[s]))
        throw std::logic_error("single-state improvement failed to raise the value");
    }
  } else {
    bool strict = false;
    for (int s : step.improved) strict = strict || v_next[s] > v[s];
    if (!strict) throw std::logic_error("turn-based improvement failed to raise any value");
  }
}

void verify_terminal(const ConcurrentGame& g, const std::vector<bool>& F,
                     const std::vector<bool>& w1, const Valuation& v) {
  for (int s = 0; s < g.n(); ++s) {
    if (w1[s]) {
      if (v[s] != Rational(1))
        throw std::logic_error("terminal valuation is not 1 on the winning set");
    } else if (!F[s]) {
      if (v[s] != Rational(0)) throw std::logic_error("terminal valuation is not 0 off F");
    } else if (one_shot_value(g, s, v) != v[s]) {
      throw std::logic_error("terminal valuation is not a one-shot fixpoint");
    }
  }
}

// Main loop shared by the unrestricted and the k-uniform runs. gamma and v
// enter as iteration 0 and leave holding the final iterate.
template <typename Improve>
void solve_core(const ConcurrentGame& g, const std::vector<bool>& F, const SolveOptions& opt,
                Improve improve, SolveReport& rep, Selector& gamma, Valuation& v) {
  const bool gap_on = opt.epsilon_gap.has_value() && opt.next_upper != nullptr;
  for (long i = 0;; ++i) {
    if (gap_on) {
      Valuation upper = opt.next_upper();
      if (upper.size() != v.size())
        throw std::invalid_argument("solve: upper bound must cover every state");
      Rational gap(0);
      for (size_t s = 0; s < v.size(); ++s) {
        if (v[s] > upper[s]) throw std::logic_error("solve: lower bound crossed the upper bound");
        if (upper[s] - v[s] > gap) gap = upper[s] - v[s];
      }
      if (gap <= *opt.epsilon_gap) {
        rep.stop = StopReason::EpsilonGap;
        return;
      }
    }
    if (i >= opt.max_iterations) {
      rep.stop = StopReason::IterationCap;
      return;
    }
    StepOut step = improve(gamma, v);
    IterationRecord rec;
    rec.index = static_cast<int>(i);
    rec.selector = gamma;
    rec.valuation = v;
    rec.kind = step.kind;
    rec.improved = step.improved;
    rep.records.push_back(std::move(rec));
    if (step.kind == StepKind::Terminal) {
      verify_terminal(g, F, rep.w1, v);
      rep.terminated = true;
      rep.stop = StopReason::ExactTermination;
      return;
    }
    Valuation v_next = safety_value_under(g, step.next, F);
    check_progress(v, v_next, step);
    gamma = std::move(step.next);
    v = std::move(v_next);
  }
}

// Final selector over the original game: the run's mix at interior states,
// the qualitative witness on w1, uniform at unsafe states.
Selector assemble_final(const ConcurrentGame& g, const AlmostSureSafe& qual, const Selector& run,
                        const std::vector<bool>& F) {
  Selector out = initial_selector(g);
  for (int s = 0; s < g.n(); ++s) {
    if (qual.winning[s])
      out.dist[s] = {{qual.witness[s], Rational(1)}};
    else if (F[s])
      out.dist[s] = run.dist[s];
  }
  return out;
}

}  // namespace

Selector initial_selector(const ConcurrentGame& g) { return uniform_selector(g, 1); }

ImprovementStep improvement_step(const ConcurrentGame& g, const std::vector<bool>& F,
                                 const std::vector<bool>& w1, const Selector& sel,
                                 const Valuation& v) {
  require_valid(g);
  require_preprocessed(g, F, w1);
  if (static_cast<int>(v.size()) != g.n() || safety_value_under(g, sel, F) != v)
    throw std::invalid_argument("improvement_step: valuation is stale for this selector");
  StepOut out = improve_unrestricted(g, F, w1, sel, v);
  return {std::move(out.next), out.kind, std::move(out.improved)};
}

SolveReport solve_safety(const ConcurrentGame& g, const std::vector<bool>& F,
                         const SolveOptions& opt) {
  require_valid(g);
  if (static_cast<int>(F.size()) != g.n())
    throw std::invalid_argument("solve_safety: F must cover every state");
  AlmostSureSafe qual = almost_sure_safe(g, F);
  std::vector<bool> absorb(g.n());
  for (int s = 0; s < g.n(); ++s) absorb[s] = qual.winning[s] || !F[s];
  SolveReport rep;
  rep.w1 = qual.winning;
  rep.absorbed = make_absorbing(g, absorb);
  const ConcurrentGame& ag = rep.absorbed;
  Selector gamma = initial_selector(ag);
  Valuation v = safety_value_under(ag, gamma, F);
  solve_core(
      ag, F, opt,
      [&](const Selector& s, const Valuation& vv) {
        return improve_unrestricted(ag, F, rep.w1, s, vv);
      },
      rep, gamma, v);
  rep.final_valuation = std::move(v);
  rep.final_selector = assemble_final(g, qual, gamma, F);
  return rep;
}

std::vector<Distribution> enumerate_k_uniform(const ConcurrentGame& g, int s, long k) {
  if (s < 0 || s >= g.n()) throw std::invalid_argument("enumerate_k_uniform: no such state");
  if (k < 1) throw std::invalid_argument("enumerate_k_uniform: k must be at least 1");
  const int m = static_cast<int>(g.moves1[s].size());
  const long budget = enumeration_budget();
  long count = 0;
  std::set<Distribution> seen;
  std::vector<Distribution> out;
  std::vector<long> parts(m, 0);
  // Weight compositions of j over the moves, heavier prefixes first, so the
  // first emitted mix is the pure lowest-index move.
  auto emit = [&](long j) {
    if (++count > budget)
      throw ResourceError("k-uniform enumeration exceeded the budget after " +
                          std::to_string(count) + " candidates");
    Distribution d;
    for (int a = 0; a < m; ++a)
      if (parts[a] > 0) d.emplace_back(a, Rational(parts[a], j));
    if (seen.insert(d).second) out.push_back(std::move(d));
  };
  for (long j = 1; j <= k; ++j) {
    auto rec = [&](auto&& self, int a, long left) -> void {
      if (a == m - 1) {
        parts[a] = left;
        emit(j);
        return;
      }
      for (long take = left; take >= 0; --take) {
        parts[a] = take;
        self(self, a + 1, left - take);
      }
    };
    rec(rec, 0, j);
  }
  return out;
}

namespace {

std::string render_mix(const std::vector<std::string>& moves, const Distribution& xi) {
  std::string out = "{";
  for (size_t i = 0; i < xi.size(); ++i) {
    if (i) out += ',';
    out += moves[xi[i].first] + ":" + xi[i].second.to_string();
  }
  out += '}';
  return out;
}

}  // namespace

KUniformGame k_uniform_turn_based(const ConcurrentGame& g, const std::vector<bool>& F, long k) {
  require_valid(g);
  if (static_cast<int>(F.size()) != g.n())
    throw std::invalid_argument("k_uniform_turn_based: F must cover every state");
  KUniformGame out;
  TurnBasedGame& tb = out.game;
  for (int s = 0; s < g.n(); ++s) {
    tb.states.push_back(g.states[s]);
    tb.owners.push_back(Owner::P1);
    out.base_of.push_back(s);
    out.selector_of.emplace_back();
    out.safe.push_back(F[s]);
  }
  tb.edges.assign(g.n(), {});
  tb.dist.assign(g.n(), {});
  const long budget = enumeration_budget();
  auto add = [&](const std::string& id, Owner o, int base, Distribution mix) {
    tb.states.push_back(id);
    tb.owners.push_back(o);
    tb.edges.emplace_back();
    tb.dist.emplace_back();
    out.base_of.push_back(base);
    out.selector_of.push_back(std::move(mix));
    out.safe.push_back(F[base]);
    if (static_cast<long>(tb.states.size()) > budget)
      throw ResourceError("k-uniform expansion exceeded the budget after " +
                          std::to_string(tb.states.size()) + " states");
    return static_cast<int>(tb.states.size()) - 1;
  };
  for (int s = 0; s < g.n(); ++s) {
    for (const Distribution& xi : enumerate_k_uniform(g, s, k)) {
      const std::string sid = g.states[s] + "#" + render_mix(g.moves1[s], xi);
      int p = add(sid, Owner::P2, s, xi);
      tb.edges[s].push_back(p);
      for (int b = 0; b < static_cast<int>(g.moves2[s].size()); ++b) {
        int c = add(sid + "#" + g.moves2[s][b], Owner::Random, s, {});
        tb.dist[c] = mixed_transition(g, s, xi, {{b, Rational(1)}});
        for (const auto& [t, pr] : tb.dist[c]) tb.edges[c].push_back(t);
        tb.edges[p].push_back(c);
      }
    }
  }
  std::set<std::string> ids;
  for (const auto& id : tb.states)
    if (!ids.insert(id).second)
      throw std::invalid_argument("k_uniform_turn_based: id collision on '" + id + "'");
  tb.rebuild_index();
  require_valid(tb);
  return out;
}

SolveReport solve_safety_k_uniform(const ConcurrentGame& g, const std::vector<bool>& F, long k,
                                   const SolveOptions& opt) {
  require_valid(g);
  if (static_cast<int>(F.size()) != g.n())
    throw std::invalid_argument("solve_safety_k_uniform: F must cover every state");
  if (k < 1) throw std::invalid_argument("solve_safety_k_uniform: k must be at least 1");
  AlmostSureSafe qual = almost_sure_safe(g, F);
  std::vector<bool> absorb(g.n());
  for (int s = 0; s < g.n(); ++s) absorb[s] = qual.winning[s] || !F[s];
  SolveReport rep;
  rep.w1 = qual.winning;
  rep.absorbed = make_absorbing(g, absorb);
  const ConcurrentGame& ag = rep.absorbed;
  std::vector<std::vector<Distribution>> mixes(ag.n());
  for (int s = 0; s < ag.n(); ++s)
    if (!absorb[s]) mixes[s] = enumerate_k_uniform(ag, s, k);
  Selector gamma = initial_selector(ag);
  Valuation v = safety_value_under(ag, gamma, F);
  solve_core(
      ag, F, opt,
      [&](const Selector& s, const Valuation& vv) {
        return improve_restricted(ag, F, rep.w1, mixes, s, vv);
      },
      rep, gamma, v);
  rep.final_valuation = std::move(v);
  rep.final_selector = assemble_final(g, qual, gamma, F);
  return rep;
}

}  // namespace sgs
