#include "sgs/mdp.hpp"

#include <algorithm>
#include <stdexcept>

#include "sgs/lp.hpp"

namespace sgs {

namespace {

int free_player_of(const ConcurrentGame& mdp) {
  if (is_mdp_for(mdp, 2)) return 2;  // chains count as player-2 MDPs
  if (is_mdp_for(mdp, 1)) return 1;
  throw std::invalid_argument("game leaves both players with choices; not an MDP");
}

// Successor supports per state and action of the free player.
std::vector<std::vector<std::vector<int>>> action_supports(const ConcurrentGame& mdp,
                                                           int free_player) {
  std::vector<std::vector<std::vector<int>>> sup(mdp.n());
  for (int s = 0; s < mdp.n(); ++s) {
    int count = static_cast<int>((free_player == 1 ? mdp.moves1 : mdp.moves2)[s].size());
    sup[s].resize(count);
    for (int k = 0; k < count; ++k) {
      const Distribution& d = free_player == 1 ? mdp.delta[s][k][0] : mdp.delta[s][0][k];
      for (const auto& [t, p] : d) sup[s][k].push_back(t);
    }
  }
  return sup;
}

// Iterative Tarjan over the retained-action graph.
std::vector<int> scc_ids(int n, const std::vector<std::vector<int>>& adj) {
  std::vector<int> ids(n, -1), low(n, 0), num(n, -1);
  std::vector<size_t> next(n, 0);
  std::vector<int> stack, call;
  std::vector<bool> on_stack(n, false);
  int counter = 0, comp = 0;
  for (int root = 0; root < n; ++root) {
    if (num[root] >= 0) continue;
    call.push_back(root);
    while (!call.empty()) {
      int v = call.back();
      if (num[v] < 0) {
        num[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      bool descended = false;
      while (next[v] < adj[v].size()) {
        int w = adj[v][next[v]++];
        if (num[w] < 0) {
          call.push_back(w);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], num[w]);
      }
      if (descended) continue;
      if (low[v] == num[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          ids[w] = comp;
        } while (w != v);
        ++comp;
      }
      call.pop_back();
      if (!call.empty()) low[call.back()] = std::min(low[call.back()], low[v]);
    }
  }
  return ids;
}

// Core refinement shared by MEC decomposition and properness: repeatedly
// drop actions whose support leaves the containing SCC until stable, then
// report the surviving components.
std::vector<EndComponent> end_components(int n,
                                         std::vector<std::vector<std::vector<int>>> supports,
                                         std::vector<std::vector<int>> retained) {
  for (;;) {
    std::vector<std::vector<int>> adj(n);
    for (int s = 0; s < n; ++s)
      for (int k : retained[s])
        for (int t : supports[s][k]) adj[s].push_back(t);
    std::vector<int> ids = scc_ids(n, adj);
    bool dropped = false;
    for (int s = 0; s < n; ++s) {
      auto keep = [&](int k) {
        for (int t : supports[s][k])
          if (ids[t] != ids[s]) return false;
        return true;
      };
      auto& acts = retained[s];
      size_t before = acts.size();
      acts.erase(std::remove_if(acts.begin(), acts.end(), [&](int k) { return !keep(k); }),
                 acts.end());
      if (acts.size() != before) dropped = true;
    }
    if (!dropped) {
      // Stable now: every retained action stays inside its SCC, so each SCC
      // with only retained-nonempty members is a maximal end component.
      // States without retained actions have no out-edges and thus sit in
      // singleton SCCs of their own; they never join a surviving component.
      std::vector<std::vector<int>> members(n);
      for (int s = 0; s < n; ++s)
        if (!retained[s].empty()) members[ids[s]].push_back(s);
      std::vector<EndComponent> out;
      for (int id = 0; id < n; ++id) {
        if (members[id].empty()) continue;
        EndComponent ec;
        ec.states = members[id];
        for (int s : ec.states) ec.move_sets.push_back(retained[s]);
        out.push_back(std::move(ec));
      }
      std::sort(out.begin(), out.end(),
                [](const EndComponent& a, const EndComponent& b) {
                  return a.states.front() < b.states.front();
                });
      return out;
    }
  }
}

}  // namespace

std::vector<EndComponent> mec_decomposition(const ConcurrentGame& mdp) {
  require_valid(mdp);
  int fp = free_player_of(mdp);
  auto supports = action_supports(mdp, fp);
  std::vector<std::vector<int>> retained(mdp.n());
  for (int s = 0; s < mdp.n(); ++s)
    for (size_t k = 0; k < supports[s].size(); ++k) retained[s].push_back(static_cast<int>(k));
  return end_components(mdp.n(), std::move(supports), std::move(retained));
}

namespace {

Valuation reach_lp(const ConcurrentGame& mdp, const std::vector<bool>& target, bool maximize,
                   const std::vector<bool>& zero) {
  int fp = free_player_of(mdp);
  LinearProgram lp;
  for (int s = 0; s < mdp.n(); ++s) {
    Rational lo = target[s] ? Rational(1) : Rational(0);
    Rational hi = (!maximize && zero[s] && !target[s]) ? Rational(0) : Rational(1);
    lp.add_variable("x_" + mdp.states[s], lo, hi);
  }
  for (int s = 0; s < mdp.n(); ++s) {
    if (target[s]) continue;
    int count = static_cast<int>((fp == 1 ? mdp.moves1 : mdp.moves2)[s].size());
    for (int k = 0; k < count; ++k) {
      const Distribution& d = fp == 1 ? mdp.delta[s][k][0] : mdp.delta[s][0][k];
      // maximize:   x(s) >= sum p x(t)   (least point = value)
      // minimize:   x(s) <= sum p x(t)   (greatest point = value, zeros pinned)
      std::vector<std::pair<int, Rational>> coeffs{{s, Rational(1)}};
      for (const auto& [t, p] : d) {
        if (t == s) {
          coeffs[0].second -= p;
        } else {
          coeffs.emplace_back(t, -p);
        }
      }
      lp.add_constraint(std::move(coeffs),
                        maximize ? LinearProgram::Relation::GreaterEq
                                 : LinearProgram::Relation::LessEq,
                        Rational(0));
    }
  }
  lp.sense = maximize ? LinearProgram::Sense::Minimize : LinearProgram::Sense::Maximize;
  for (int s = 0; s < mdp.n(); ++s) lp.objective.emplace_back(s, Rational(1));
  LPResult res = solve_lp(lp);
  if (res.status != LPResult::Status::Optimal)
    throw std::logic_error("reachability program must be solvable");
  return res.assignment;
}

}  // namespace

Valuation max_reach_value(const ConcurrentGame& mdp, const std::vector<bool>& target) {
  require_valid(mdp);
  return reach_lp(mdp, target, true, {});
}

Valuation min_reach_value(const ConcurrentGame& mdp, const std::vector<bool>& target) {
  require_valid(mdp);
  int fp = free_player_of(mdp);
  auto supports = action_supports(mdp, fp);
  // Greatest set the minimizer can keep clear of the target: some action's
  // whole support stays inside.
  std::vector<bool> avoid(mdp.n());
  for (int s = 0; s < mdp.n(); ++s) avoid[s] = !target[s];
  for (bool changed = true; changed;) {
    changed = false;
    for (int s = 0; s < mdp.n(); ++s) {
      if (!avoid[s]) continue;
      bool has_safe_action = false;
      for (const auto& sup : supports[s]) {
        bool stays = true;
        for (int t : sup)
          if (!avoid[t]) stays = false;
        if (stays) has_safe_action = true;
      }
      if (!has_safe_action) {
        avoid[s] = false;
        changed = true;
      }
    }
  }
  return reach_lp(mdp, target, false, avoid);
}

Valuation safety_value_under(const ConcurrentGame& g, const Selector& xi1,
                             const std::vector<bool>& F) {
  if (xi1.player != 1) throw std::invalid_argument("safety_value_under fixes player 1");
  ConcurrentGame mdp = fix_selector(g, xi1);
  std::vector<bool> target(g.n());
  for (int s = 0; s < g.n(); ++s) target[s] = !F[s];
  Valuation reach = max_reach_value(mdp, target);
  Valuation out(g.n());
  for (int s = 0; s < g.n(); ++s) out[s] = Rational(1) - reach[s];
  return out;
}

bool is_proper(const ConcurrentGame& g, const Selector& xi1, const std::vector<bool>& T,
               const std::vector<bool>& W2) {
  ConcurrentGame mdp = fix_selector(g, xi1);
  int fp = free_player_of(mdp);
  auto supports = action_supports(mdp, fp);
  // Restrict to states outside T ∪ W2 and to actions that stay outside; any
  // end component of the restriction witnesses improperness.
  std::vector<std::vector<int>> retained(mdp.n());
  for (int s = 0; s < mdp.n(); ++s) {
    if (T[s] || W2[s]) continue;
    for (size_t k = 0; k < supports[s].size(); ++k) {
      bool inside = true;
      for (int t : supports[s][k])
        if (T[t] || W2[t]) inside = false;
      if (inside) retained[s].push_back(static_cast<int>(k));
    }
  }
  return end_components(mdp.n(), std::move(supports), std::move(retained)).empty();
}

}  // namespace sgs
