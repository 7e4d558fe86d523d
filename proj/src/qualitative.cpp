#include "sgs/qualitative.hpp"

#include <stdexcept>

namespace sgs {

AlmostSureSafe almost_sure_safe(const ConcurrentGame& g, const std::vector<bool>& F) {
  require_valid(g);
  // Worklist refinement with one liveness flag per (state, move): a move dies
  // once any reply can leave the current candidate set; a state leaves once
  // all its moves are dead.
  std::vector<bool> in(F);
  std::vector<std::vector<bool>> dead(g.n());
  std::vector<int> alive(g.n(), 0);
  // removal queue seeded with the complement of F
  std::vector<int> queue;
  for (int s = 0; s < g.n(); ++s) {
    dead[s].assign(g.moves1[s].size(), false);
    if (!in[s]) {
      queue.push_back(s);
      continue;
    }
    for (size_t a = 0; a < g.moves1[s].size(); ++a) {
      bool ok = true;
      for (size_t b = 0; b < g.moves2[s].size() && ok; ++b)
        for (const auto& [t, p] : g.delta[s][a][b])
          if (!F[t]) {
            ok = false;
            break;
          }
      dead[s][a] = !ok;
      if (ok) ++alive[s];
    }
    if (alive[s] == 0) {
      in[s] = false;
      queue.push_back(s);
    }
  }
  // reverse index: t -> (s, a) pairs whose move can reach t
  std::vector<std::vector<std::pair<int, int>>> rev(g.n());
  for (int s = 0; s < g.n(); ++s)
    for (size_t a = 0; a < g.moves1[s].size(); ++a)
      for (size_t b = 0; b < g.moves2[s].size(); ++b)
        for (const auto& [t, p] : g.delta[s][a][b])
          rev[t].emplace_back(s, static_cast<int>(a));
  while (!queue.empty()) {
    int t = queue.back();
    queue.pop_back();
    for (const auto& [s, a] : rev[t]) {
      if (!in[s] || dead[s][a]) continue;
      dead[s][a] = true;
      if (--alive[s] == 0) {
        in[s] = false;
        queue.push_back(s);
      }
    }
  }
  AlmostSureSafe out;
  out.winning = in;
  out.witness.assign(g.n(), -1);
  for (int s = 0; s < g.n(); ++s) {
    if (!in[s]) continue;
    for (size_t a = 0; a < g.moves1[s].size() && out.witness[s] < 0; ++a)
      if (!dead[s][a]) out.witness[s] = static_cast<int>(a);
  }
  return out;
}

AlmostSureSafe almost_sure_safe(const TurnBasedGame& g, const std::vector<bool>& F) {
  require_valid(g);
  std::vector<bool> in(F);
  // Player-1 states track how many successors are still inside and die at
  // zero; the other owners die on the first removal notice. Seeding the
  // queue with the complement of F delivers exactly one notice per removed
  // successor, so counters start at the full edge count.
  std::vector<int> alive(g.n(), 0);
  std::vector<int> queue;
  for (int s = 0; s < g.n(); ++s) {
    alive[s] = static_cast<int>(g.edges[s].size());
    if (!in[s]) queue.push_back(s);
  }
  std::vector<std::vector<int>> rev(g.n());
  for (int s = 0; s < g.n(); ++s)
    for (int t : g.edges[s]) rev[t].push_back(s);
  while (!queue.empty()) {
    int t = queue.back();
    queue.pop_back();
    for (int s : rev[t]) {
      if (!in[s]) continue;
      if (g.owners[s] == Owner::P1) {
        // multi-edges to t are impossible; one decrement per removal
        if (--alive[s] == 0) {
          in[s] = false;
          queue.push_back(s);
        }
      } else {
        in[s] = false;
        queue.push_back(s);
      }
    }
  }
  AlmostSureSafe out;
  out.winning = in;
  out.witness.assign(g.n(), -1);
  for (int s = 0; s < g.n(); ++s) {
    if (!in[s] || g.owners[s] != Owner::P1) continue;
    for (size_t e = 0; e < g.edges[s].size() && out.witness[s] < 0; ++e)
      if (in[g.edges[s][e]]) out.witness[s] = static_cast<int>(e);
  }
  return out;
}

namespace {

// Positive-reach fixpoint: grow from the target; `player` states join with
// one edge in, opposing states need all edges in, random states join with
// one edge in.
std::vector<bool> positive_reach(const TurnBasedGame& g, const std::vector<bool>& target,
                                 int player) {
  std::vector<bool> in(target);
  for (bool changed = true; changed;) {
    changed = false;
    for (int s = 0; s < g.n(); ++s) {
      if (in[s]) continue;
      Owner own = g.owners[s];
      bool mine = (own == Owner::P1 && player == 1) || (own == Owner::P2 && player == 2) ||
                  own == Owner::Random;
      bool joins;
      if (mine) {
        joins = false;
        for (int t : g.edges[s])
          if (in[t]) joins = true;
      } else {
        joins = true;
        for (int t : g.edges[s])
          if (!in[t]) joins = false;
      }
      if (joins) {
        in[s] = true;
        changed = true;
      }
    }
  }
  return in;
}

}  // namespace

std::vector<bool> zero_reach_states(const TurnBasedGame& g, const std::vector<bool>& target,
                                    int player) {
  require_valid(g);
  std::vector<bool> pos = positive_reach(g, target, player);
  std::vector<bool> out(g.n());
  for (int s = 0; s < g.n(); ++s) out[s] = !pos[s];
  return out;
}

std::vector<bool> zero_reach_states(const ConcurrentGame& g, const std::vector<bool>& target,
                                    int player) {
  require_valid(g);
  std::vector<bool> in(target);
  for (bool changed = true; changed;) {
    changed = false;
    for (int s = 0; s < g.n(); ++s) {
      if (in[s]) continue;
      // s joins when `player` has a move whose every reply may hit the set.
      int mine = static_cast<int>((player == 1 ? g.moves1 : g.moves2)[s].size());
      int theirs = static_cast<int>((player == 1 ? g.moves2 : g.moves1)[s].size());
      bool joins = false;
      for (int a = 0; a < mine && !joins; ++a) {
        bool all_replies_touch = true;
        for (int b = 0; b < theirs && all_replies_touch; ++b) {
          const Distribution& d = player == 1 ? g.delta[s][a][b] : g.delta[s][b][a];
          bool touches = false;
          for (const auto& [t, p] : d)
            if (in[t]) touches = true;
          if (!touches) all_replies_touch = false;
        }
        joins = all_replies_touch;
      }
      if (joins) {
        in[s] = true;
        changed = true;
      }
    }
  }
  std::vector<bool> out(g.n());
  for (int s = 0; s < g.n(); ++s) out[s] = !in[s];
  return out;
}

AttractorResult attractor_selector(const TurnBasedGame& g, const std::vector<bool>& target) {
  require_valid(g);
  AttractorResult out;
  out.selector.assign(g.n(), -1);
  std::vector<bool> in(target);
  std::vector<int> stage;
  for (int s = 0; s < g.n(); ++s) {
    if (in[s]) stage.push_back(s);
    if (g.owners[s] == Owner::P1)
      out.selector[s] = 0;  // inside the target any edge serves
  }
  out.stages.push_back(stage);
  while (true) {
    std::vector<int> next = out.stages.back();
    bool grew = false;
    for (int s = 0; s < g.n(); ++s) {
      if (in[s]) continue;
      bool joins = false;
      if (g.owners[s] == Owner::P2) {
        joins = true;
        for (int t : g.edges[s])
          if (!in[t]) joins = false;
      } else {
        for (size_t e = 0; e < g.edges[s].size() && !joins; ++e) {
          if (in[g.edges[s][e]]) {
            joins = true;
            if (g.owners[s] == Owner::P1) out.selector[s] = static_cast<int>(e);
          }
        }
      }
      if (joins) {
        next.push_back(s);
        grew = true;
      }
    }
    if (!grew) break;
    std::sort(next.begin(), next.end());
    for (int s : next) in[s] = true;
    out.stages.push_back(std::move(next));
  }
  for (int s = 0; s < g.n(); ++s)
    if (!in[s])
      throw std::invalid_argument("attractor stages stop short of the full state space");
  return out;
}

}  // namespace sgs
