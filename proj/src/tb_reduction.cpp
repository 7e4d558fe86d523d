#include "sgs/tb_reduction.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace sgs {

namespace {

std::string brace_join(const std::vector<std::string>& names, const std::vector<int>& idx) {
  std::string out = "{";
  for (size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ',';
    out += names[idx[i]];
  }
  out += '}';
  return out;
}

}  // namespace

ReducedGame tb_reduce(const ConcurrentGame& g, const Valuation& v, const std::vector<bool>& F) {
  require_valid(g);
  if (static_cast<int>(v.size()) != g.n() || static_cast<int>(F.size()) != g.n())
    throw std::invalid_argument("tb_reduce: valuation and safe set must cover every state");

  ReducedGame red;
  TurnBasedGame& tb = red.game;
  // Base block first, in original order, so a base state's reduced index is
  // its original index.
  for (int s = 0; s < g.n(); ++s) {
    tb.states.push_back(g.states[s]);
    tb.owners.push_back(Owner::P1);
    red.kinds.push_back(ReducedKind::Base);
    red.base_of.push_back(s);
    red.pair_of.push_back(-1);
    red.safe.push_back(F[s]);
  }
  tb.edges.assign(g.n(), {});
  tb.dist.assign(g.n(), {});

  auto add_state = [&](const std::string& id, Owner o, ReducedKind k, int base, int pair_idx) {
    tb.states.push_back(id);
    tb.owners.push_back(o);
    tb.edges.emplace_back();
    tb.dist.emplace_back();
    red.kinds.push_back(k);
    red.base_of.push_back(base);
    red.pair_of.push_back(pair_idx);
    red.safe.push_back(F[base]);
    return static_cast<int>(tb.states.size()) - 1;
  };

  for (int s = 0; s < g.n(); ++s) {
    auto pairs = optimal_support_pairs(g, s, v);
    if (pairs.empty())
      throw std::logic_error("tb_reduce: no realizable support pair at " + g.states[s]);
    std::map<std::string, int> choice_at;
    for (auto& sp : pairs) {
      const std::string stem = g.states[s] + "#" + brace_join(g.moves1[s], sp.support);
      int p = add_state(stem + "#" + brace_join(g.moves2[s], sp.counter_moves), Owner::P2,
                        ReducedKind::Pair, s, static_cast<int>(red.pairs.size()));
      tb.edges[s].push_back(p);
      for (int b : sp.counter_moves) {
        const std::string cid = stem + "#" + g.moves2[s][b];
        auto it = choice_at.find(cid);
        int c;
        if (it != choice_at.end()) {
          c = it->second;
        } else {
          c = add_state(cid, Owner::Random, ReducedKind::Choice, s, -1);
          choice_at.emplace(cid, c);
          std::set<int> dests;
          for (int a : sp.support)
            for (const auto& [t, pr] : g.delta[s][a][b]) dests.insert(t);
          const Rational w(1, static_cast<long>(dests.size()));
          for (int t : dests) {
            tb.dist[c].emplace_back(t, w);
            tb.edges[c].push_back(t);
          }
        }
        tb.edges[p].push_back(c);
      }
      red.pairs.push_back(
          {s, std::move(sp.support), std::move(sp.counter_moves), std::move(sp.witness)});
    }
  }

  // Composite ids collide only when base ids already use the '#'/brace
  // notation; refuse such inputs rather than emit an ambiguous game.
  std::set<std::string> seen;
  for (const auto& id : tb.states)
    if (!seen.insert(id).second)
      throw std::invalid_argument("tb_reduce: reduced id collision on '" + id + "'");
  tb.rebuild_index();
  require_valid(tb);
  return red;
}

Selector lift_strategy(const ReducedGame& red, const std::vector<int>& choice,
                       const Selector& base, const std::vector<int>& U) {
  if (base.player != 1) throw std::invalid_argument("lift_strategy: base must select for player 1");
  const TurnBasedGame& tb = red.game;
  if (choice.size() != tb.states.size())
    throw std::invalid_argument("lift_strategy: choice must cover every reduced state");
  Selector out = base;
  for (int s : U) {
    if (s < 0 || s >= static_cast<int>(base.dist.size()) || red.kinds[s] != ReducedKind::Base)
      throw std::invalid_argument("lift_strategy: U must contain base states");
    int e = choice[s];
    if (e < 0 || e >= static_cast<int>(tb.edges[s].size()))
      throw std::invalid_argument("lift_strategy: no pair chosen at " + tb.states[s]);
    int p = tb.edges[s][e];
    if (red.kinds[p] != ReducedKind::Pair)
      throw std::invalid_argument("lift_strategy: chosen successor of " + tb.states[s] +
                                  " is not a pair state");
    out.dist[s] = red.pairs[red.pair_of[p]].witness;
  }
  return out;
}

}  // namespace sgs
