#include "sgs/reachability.hpp"

#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sgs/matrix_game.hpp"
#include "sgs/mdp.hpp"
#include "sgs/qualitative.hpp"

namespace sgs {

namespace {

void require_sized(std::size_t got, int n, const char* what) {
  if (static_cast<int>(got) != n)
    throw std::invalid_argument(std::string(what) + " does not match the state count");
}

Valuation reach_step(const ConcurrentGame& g, const std::vector<bool>& target, int for_player,
                     const Valuation& u) {
  Valuation next(g.n());
  for (int s = 0; s < g.n(); ++s) {
    if (target[s]) {
      next[s] = Rational(1);
      continue;
    }
    MatrixGame m = local_matrix(g, s, u);
    if (for_player == 2) m = transpose(m);
    next[s] = game_value(m).value;
  }
  return next;
}

Valuation upper_step(const ConcurrentGame& g, const std::vector<bool>& F, const Valuation& v) {
  Valuation next(g.n());
  for (int s = 0; s < g.n(); ++s)
    next[s] = F[s] ? game_value(local_matrix(g, s, v)).value : Rational(0);
  return next;
}

// Two or fewer successors with probabilities 1 or 1/2 need no gadget.
bool needs_coin_gadget(const Distribution& d) {
  if (d.size() > 2) return true;
  for (const auto& e : d)
    if (e.second != Rational(1) && e.second != Rational(1, 2)) return true;
  return false;
}

}  // namespace

std::vector<Valuation> value_iteration_reach(const ConcurrentGame& g,
                                             const std::vector<bool>& target, int for_player,
                                             long rounds) {
  require_valid(g);
  require_sized(target.size(), g.n(), "target");
  if (for_player != 1 && for_player != 2)
    throw std::invalid_argument("for_player must be 1 or 2");
  if (rounds < 0) throw std::invalid_argument("rounds must be nonnegative");

  std::vector<Valuation> out;
  out.reserve(static_cast<std::size_t>(rounds) + 1);
  Valuation u(g.n(), Rational(0));
  for (int s = 0; s < g.n(); ++s)
    if (target[s]) u[s] = Rational(1);
  out.push_back(std::move(u));
  for (long r = 0; r < rounds; ++r) {
    Valuation next = reach_step(g, target, for_player, out.back());
    for (int s = 0; s < g.n(); ++s)
      if (next[s] < out.back()[s]) throw std::logic_error("reachability iteration regressed");
    out.push_back(std::move(next));
  }
  return out;
}

Valuation reach_lower_step(const ConcurrentGame& g, const std::vector<bool>& target,
                           int for_player, const Valuation& prev) {
  require_valid(g);
  require_sized(target.size(), g.n(), "target");
  require_sized(prev.size(), g.n(), "valuation");
  if (for_player != 1 && for_player != 2)
    throw std::invalid_argument("for_player must be 1 or 2");
  return reach_step(g, target, for_player, prev);
}

Valuation safety_upper_step(const ConcurrentGame& g, const std::vector<bool>& F,
                            const Valuation& prev) {
  require_valid(g);
  require_sized(F.size(), g.n(), "F");
  require_sized(prev.size(), g.n(), "valuation");
  return upper_step(g, F, prev);
}

std::vector<Valuation> value_iteration_safe_upper(const ConcurrentGame& g,
                                                  const std::vector<bool>& F, long rounds) {
  require_valid(g);
  require_sized(F.size(), g.n(), "F");
  if (rounds < 0) throw std::invalid_argument("rounds must be nonnegative");

  std::vector<Valuation> out;
  out.reserve(static_cast<std::size_t>(rounds) + 1);
  Valuation v(g.n(), Rational(0));
  for (int s = 0; s < g.n(); ++s)
    if (F[s]) v[s] = Rational(1);
  out.push_back(std::move(v));
  for (long r = 0; r < rounds; ++r) {
    Valuation next = upper_step(g, F, out.back());
    for (int s = 0; s < g.n(); ++s)
      if (next[s] > out.back()[s]) throw std::logic_error("safety iteration regressed");
    out.push_back(std::move(next));
  }
  return out;
}

TbReachResult tb_reach_strategy_improvement(const TurnBasedGame& g,
                                            const std::vector<bool>& target) {
  require_valid(g);
  require_sized(target.size(), g.n(), "target");
  const int n = g.n();

  // Player 2's sure-avoidance set; target ∪ w2 is attracted from everywhere,
  // so the attractor selector is proper from the start.
  std::vector<bool> w2 = zero_reach_states(g, target, 1);
  std::vector<bool> goal(n);
  for (int s = 0; s < n; ++s) goal[s] = target[s] || w2[s];
  AttractorResult attr = attractor_selector(g, goal);
  ConcurrentGame emb = embed_turn_based(g);

  std::vector<int> choice(n, 0);
  for (int s = 0; s < n; ++s)
    if (g.owners[s] == Owner::P1) choice[s] = attr.selector[s];

  auto evaluate = [&](const std::vector<int>& ch) {
    return min_reach_value(fix_selector(emb, pure_selector(1, ch)), target);
  };
  // Properness makes the exact evaluation a certificate: under a proper
  // strategy every counter-play reaches target ∪ w2, so switching onto a
  // strictly better successor strictly raises the switched state.
  auto check_proper = [&](const std::vector<int>& ch) {
    if (!is_proper(emb, pure_selector(1, ch), target, w2))
      throw std::logic_error("reachability improvement produced an improper strategy");
  };

  check_proper(choice);
  TbReachResult out;
  out.values = evaluate(choice);
  out.iterations = 1;
  for (;;) {
    std::vector<int> switched;
    for (int s = 0; s < n; ++s) {
      if (g.owners[s] != Owner::P1) continue;
      const std::vector<int>& es = g.edges[s];
      for (int e = 0; e < static_cast<int>(es.size()); ++e) {
        if (out.values[es[e]] > out.values[s]) {
          choice[s] = e;
          switched.push_back(s);
          break;
        }
      }
    }
    if (switched.empty()) break;
    check_proper(choice);
    Valuation next = evaluate(choice);
    ++out.iterations;
    for (int s = 0; s < n; ++s)
      if (next[s] < out.values[s])
        throw std::logic_error("reachability improvement decreased a value");
    for (int s : switched)
      if (!(next[s] > out.values[s]))
        throw std::logic_error("reachability improvement failed to raise a switched state");
    out.values = std::move(next);
  }

  out.choice.assign(n, -1);
  for (int s = 0; s < n; ++s)
    if (g.owners[s] == Owner::P1) out.choice[s] = choice[s];
  return out;
}

SandwichReport anytime_solve(const ConcurrentGame& g, const std::vector<bool>& F,
                             const Rational& epsilon, long max_rounds) {
  require_valid(g);
  require_sized(F.size(), g.n(), "F");
  if (epsilon.sign() < 0) throw std::invalid_argument("epsilon must be nonnegative");
  const int n = g.n();

  SandwichReport rep;
  AlmostSureSafe qual = almost_sure_safe(g, F);
  rep.w1 = qual.winning;
  std::vector<bool> absorb(n);
  for (int s = 0; s < n; ++s) absorb[s] = rep.w1[s] || !F[s];
  rep.absorbed = make_absorbing(g, absorb);
  const ConcurrentGame& a = rep.absorbed;

  // Selector over the original game: the run's mix at interior states, the
  // qualitative witness on w1, uniform on unsafe states.
  auto finalize = [&](const Selector& run) {
    Selector fin = uniform_selector(g, 1);
    for (int s = 0; s < n; ++s) {
      if (rep.w1[s])
        fin.dist[s] = {{qual.witness[s], Rational(1)}};
      else if (F[s])
        fin.dist[s] = run.dist[s];
    }
    rep.final_selector = fin;
  };

  Selector gamma = initial_selector(a);
  Valuation v = safety_value_under(a, gamma, F);
  Valuation vhat(n, Rational(0));
  for (int s = 0; s < n; ++s)
    if (F[s]) vhat[s] = Rational(1);

  // Every recorded lower bound must sit below every recorded upper bound;
  // checking each new entry against the opposite list covers all pairs.
  auto push_pair = [&](const Valuation& lo, const Valuation& hi) {
    for (const Valuation& u : rep.upper)
      for (int s = 0; s < n; ++s)
        if (lo[s] > u[s]) throw std::logic_error("lower bound crossed an upper bound");
    rep.lower.push_back(lo);
    for (const Valuation& l : rep.lower)
      for (int s = 0; s < n; ++s)
        if (l[s] > hi[s]) throw std::logic_error("lower bound crossed an upper bound");
    rep.upper.push_back(hi);
  };

  for (long round = 0;; ++round) {
    push_pair(v, vhat);
    Rational gap(0);
    for (int s = 0; s < n; ++s) {
      Rational d = vhat[s] - v[s];
      if (d > gap) gap = d;
    }
    if (gap <= epsilon) {
      rep.values = v;
      rep.gap = gap;
      rep.stop = SandwichStop::EpsilonGap;
      finalize(gamma);
      return rep;
    }
    if (max_rounds >= 0 && round >= max_rounds) {
      rep.values = v;
      rep.gap = gap;
      rep.stop = SandwichStop::RoundCap;
      finalize(gamma);
      return rep;
    }

    Valuation vhat_next = upper_step(a, F, vhat);
    for (int s = 0; s < n; ++s)
      if (vhat_next[s] > vhat[s]) throw std::logic_error("upper bound iteration regressed");
    if (vhat_next == vhat) {
      // A backup fixpoint reached from above is the exact safety value.
      for (int s = 0; s < n; ++s)
        if (v[s] > vhat_next[s]) throw std::logic_error("lower bound crossed an upper bound");
      rep.values = std::move(vhat_next);
      rep.gap = Rational(0);
      rep.stop = SandwichStop::UpperStabilized;
      finalize(gamma);
      return rep;
    }

    ImprovementStep step = improvement_step(a, F, rep.w1, gamma, v);
    if (step.kind == StepKind::Terminal) {
      for (int s = 0; s < n; ++s) {
        const Rational want = rep.w1[s] ? Rational(1) : (!F[s] ? Rational(0) : one_shot_value(a, s, v));
        if (v[s] != want) throw std::logic_error("terminal valuation is not a one-shot fixpoint");
      }
      rep.records.push_back({static_cast<int>(round), gamma, v, StepKind::Terminal, {}});
      rep.values = v;
      rep.gap = Rational(0);
      rep.stop = SandwichStop::ExactTermination;
      finalize(gamma);
      return rep;
    }
    rep.records.push_back({static_cast<int>(round), gamma, v, step.kind, step.improved});
    gamma = std::move(step.next);
    Valuation v_next = safety_value_under(a, gamma, F);
    bool strict = false;
    for (int s = 0; s < n; ++s) {
      if (v_next[s] < v[s]) throw std::logic_error("improvement decreased the valuation");
      if (v_next[s] > v[s]) strict = true;
    }
    if (!strict) throw std::logic_error("improvement failed to raise any value");
    v = std::move(v_next);
    vhat = std::move(vhat_next);
  }
}

TurnBasedGame binary_transform(const TurnBasedGame& g) {
  require_valid(g);
  TurnBasedGame out = g;
  const int n = g.n();
  std::set<std::string> ids(g.states.begin(), g.states.end());

  auto add_aux = [&](const std::string& id) {
    if (!ids.insert(id).second)
      throw std::invalid_argument("binary transform id collides with an existing state: " + id);
    out.states.push_back(id);
    out.owners.push_back(Owner::Random);
    out.edges.emplace_back();
    out.dist.emplace_back();
    return static_cast<int>(out.states.size()) - 1;
  };

  for (int s = 0; s < n; ++s) {
    if (g.owners[s] != Owner::Random || !needs_coin_gadget(g.dist[s])) continue;
    const Distribution& d = g.dist[s];

    // Put the probabilities on a common grid of q cells; destination i owns
    // the codewords [cut[i-1], cut[i]) and everything from q up retries.
    mpz_class q(1);
    for (const auto& e : d) mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), e.second.den().get_mpz_t());
    std::vector<mpz_class> cut;
    cut.reserve(d.size());
    mpz_class acc(0);
    for (const auto& e : d) {
      acc += e.second.num() * (q / e.second.den());
      cut.push_back(acc);
    }
    long m = 0;
    mpz_class pow2(1);
    while (pow2 < q) {
      pow2 <<= 1;
      ++m;
    }

    // A gadget state needing a rewrite mixes at least two destinations, so q
    // is at least 2 and the root genuinely flips a coin.
    const int root = add_aux(g.states[s] + "~");
    out.dist[s] = {{root, Rational(1)}};
    out.edges[s] = {root};

    auto resolve = [&](const mpz_class& w) {
      if (w >= q) return root;
      for (std::size_t i = 0; i < cut.size(); ++i)
        if (w < cut[i]) return d[i].first;
      return d.back().first;
    };

    // Fills `node` for the codeword interval [lo, hi); a half resolving to a
    // single state becomes a direct edge, anything mixed gets a child node.
    auto fill = [&](auto&& self, const mpz_class& lo, const mpz_class& hi, int node,
                    const std::string& path) -> void {
      const mpz_class mid = (lo + hi) / 2;
      int left = resolve(lo);
      if (left != resolve(mid - 1)) {
        left = add_aux(g.states[s] + "~" + path + "0");
        self(self, lo, mid, left, path + "0");
      }
      int right = resolve(mid);
      if (right != resolve(hi - 1)) {
        right = add_aux(g.states[s] + "~" + path + "1");
        self(self, mid, hi, right, path + "1");
      }
      Distribution coin{{left, Rational(1, 2)}, {right, Rational(1, 2)}};
      if (coin[0].first > coin[1].first) std::swap(coin[0], coin[1]);
      out.edges[node] = {coin[0].first, coin[1].first};
      out.dist[node] = std::move(coin);
    };
    fill(fill, mpz_class(0), pow2, root, "");
  }

  out.rebuild_index();
  require_valid(out);
  return out;
}

TerminationBound termination_bound(const TurnBasedGame& g) {
  require_valid(g);
  TerminationBound out;
  for (int s = 0; s < g.n() && !out.transformed; ++s)
    out.transformed = g.owners[s] == Owner::Random && needs_coin_gadget(g.dist[s]);
  TurnBasedGame rewritten;
  if (out.transformed) rewritten = binary_transform(g);
  const TurnBasedGame& m = out.transformed ? rewritten : g;

  long n_random = 0;
  for (int s = 0; s < m.n(); ++s)
    if (m.owners[s] == Owner::Random) ++n_random;
  mpz_class steps;
  mpz_ui_pow_ui(steps.get_mpz_t(), 4, n_random > 0 ? static_cast<unsigned long>(n_random - 1) : 0);
  steps *= m.n();
  out.step_bound = Rational(mpq_class(steps));

  mpz_class strategies(1);
  for (int s = 0; s < m.n(); ++s)
    if (m.owners[s] == Owner::P1) strategies *= static_cast<long>(m.edges[s].size());
  out.strategy_bound = Rational(mpq_class(strategies));
  return out;
}

}  // namespace sgs
