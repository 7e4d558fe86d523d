#include "sgs/game.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sgs {

Rational dist_sum(const Distribution& d) {
  Rational s;
  for (const auto& [i, p] : d) s += p;
  return s;
}

Distribution uniform_distribution(const std::vector<int>& support) {
  Distribution d;
  Rational w(1, static_cast<long>(support.size()));
  for (int i : support) d.emplace_back(i, w);
  return d;
}

Rational dist_at(const Distribution& d, int index) {
  for (const auto& [i, p] : d)
    if (i == index) return p;
  return Rational(0);
}

int ConcurrentGame::state_index(const std::string& id) const {
  int i = find_state(id);
  if (i < 0) throw std::invalid_argument("unknown state '" + id + "'");
  return i;
}

int ConcurrentGame::find_state(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

int ConcurrentGame::move_index(int player, int s, const std::string& id) const {
  const auto& list = player == 1 ? moves1[s] : moves2[s];
  for (size_t i = 0; i < list.size(); ++i)
    if (list[i] == id) return static_cast<int>(i);
  throw std::invalid_argument("unknown player-" + std::to_string(player) + " move '" + id +
                              "' at state '" + states[s] + "'");
}

void ConcurrentGame::rebuild_index() {
  index_.clear();
  for (int i = 0; i < n(); ++i) index_[states[i]] = i;
}

int TurnBasedGame::state_index(const std::string& id) const {
  int i = find_state(id);
  if (i < 0) throw std::invalid_argument("unknown state '" + id + "'");
  return i;
}

int TurnBasedGame::find_state(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

void TurnBasedGame::rebuild_index() {
  index_.clear();
  for (int i = 0; i < n(); ++i) index_[states[i]] = i;
}

Selector uniform_selector(const ConcurrentGame& g, int player) {
  Selector sel;
  sel.player = player;
  sel.dist.resize(g.n());
  for (int s = 0; s < g.n(); ++s) {
    int m = static_cast<int>((player == 1 ? g.moves1 : g.moves2)[s].size());
    std::vector<int> all(m);
    for (int a = 0; a < m; ++a) all[a] = a;
    sel.dist[s] = uniform_distribution(all);
  }
  return sel;
}

Selector pure_selector(int player, const std::vector<int>& choice) {
  Selector sel;
  sel.player = player;
  sel.dist.reserve(choice.size());
  for (int c : choice) sel.dist.push_back({{c, Rational(1)}});
  return sel;
}

namespace {

void check_distribution(const Distribution& d, int n_states, const std::string& where,
                        std::vector<Violation>& out) {
  if (d.empty()) {
    out.push_back({"empty-distribution", where, "distribution has no entries"});
    return;
  }
  int prev = -1;
  for (const auto& [t, p] : d) {
    if (t < 0 || t >= n_states)
      out.push_back({"unknown-state", where, "successor index out of range"});
    if (t <= prev)
      out.push_back({"unsorted-distribution", where, "entries not sorted by unique target"});
    prev = t;
    if (p.sign() <= 0)
      out.push_back({"zero-probability", where, "probability entries must be strictly positive"});
  }
  if (dist_sum(d) != Rational(1))
    out.push_back({"distribution-sum", where, "probabilities sum to " + dist_sum(d).to_string() +
                                                  ", expected 1"});
}

void check_unique_ids(const std::vector<std::string>& ids, const std::string& what,
                      std::vector<Violation>& out) {
  std::set<std::string> seen;
  for (const auto& id : ids)
    if (!seen.insert(id).second)
      out.push_back({"duplicate-id", what, "duplicate id '" + id + "'"});
}

}  // namespace

std::vector<Violation> validate_game(const ConcurrentGame& g) {
  std::vector<Violation> out;
  if (g.states.empty()) {
    out.push_back({"empty-game", "states", "game has no states"});
    return out;
  }
  check_unique_ids(g.states, "states", out);
  bool shape_ok = g.moves1.size() == g.states.size() && g.moves2.size() == g.states.size() &&
                  g.delta.size() == g.states.size();
  if (!shape_ok) {
    out.push_back({"schema", "game", "per-state tables do not match the state count"});
    return out;
  }
  for (int s = 0; s < g.n(); ++s) {
    const std::string& id = g.states[s];
    if (g.moves1[s].empty())
      out.push_back({"empty-moves", id, "player 1 has no moves"});
    if (g.moves2[s].empty())
      out.push_back({"empty-moves", id, "player 2 has no moves"});
    check_unique_ids(g.moves1[s], id + ".moves1", out);
    check_unique_ids(g.moves2[s], id + ".moves2", out);
    if (g.delta[s].size() != g.moves1[s].size()) {
      out.push_back({"missing-transition", id, "transition table incomplete"});
      continue;
    }
    for (size_t a = 0; a < g.moves1[s].size(); ++a) {
      if (g.delta[s][a].size() != g.moves2[s].size()) {
        out.push_back({"missing-transition", id + "." + g.moves1[s][a],
                       "transition table incomplete"});
        continue;
      }
      for (size_t b = 0; b < g.moves2[s].size(); ++b)
        check_distribution(g.delta[s][a][b], g.n(),
                           id + "." + g.moves1[s][a] + "." + g.moves2[s][b], out);
    }
  }
  return out;
}

std::vector<Violation> validate_game(const TurnBasedGame& g) {
  std::vector<Violation> out;
  if (g.states.empty()) {
    out.push_back({"empty-game", "states", "game has no states"});
    return out;
  }
  check_unique_ids(g.states, "states", out);
  if (g.owners.size() != g.states.size() || g.edges.size() != g.states.size() ||
      g.dist.size() != g.states.size()) {
    out.push_back({"schema", "game", "per-state tables do not match the state count"});
    return out;
  }
  for (int s = 0; s < g.n(); ++s) {
    const std::string& id = g.states[s];
    if (g.edges[s].empty()) {
      out.push_back({"no-outgoing-edge", id, "state has no successors"});
      continue;
    }
    std::set<int> uniq(g.edges[s].begin(), g.edges[s].end());
    if (uniq.size() != g.edges[s].size())
      out.push_back({"duplicate-id", id + ".edges", "duplicate successor"});
    for (int t : g.edges[s])
      if (t < 0 || t >= g.n()) out.push_back({"unknown-state", id + ".edges", "edge out of range"});
    if (g.owners[s] == Owner::Random) {
      check_distribution(g.dist[s], g.n(), id + ".dist", out);
      std::set<int> support;
      for (const auto& [t, p] : g.dist[s]) support.insert(t);
      if (support != uniq)
        out.push_back({"support-mismatch", id,
                       "random-state distribution support must equal the edge list"});
    } else if (!g.dist[s].empty()) {
      out.push_back({"support-mismatch", id, "owned state carries a distribution"});
    }
  }
  return out;
}

namespace {
void throw_violations(const std::vector<Violation>& vs) {
  if (vs.empty()) return;
  std::ostringstream os;
  os << "invalid game:";
  for (const auto& v : vs) os << "\n  [" << v.code << "] " << v.where << ": " << v.message;
  throw std::invalid_argument(os.str());
}
}  // namespace

void require_valid(const ConcurrentGame& g) { throw_violations(validate_game(g)); }
void require_valid(const TurnBasedGame& g) { throw_violations(validate_game(g)); }

std::vector<int> dest(const ConcurrentGame& g, int s, int a, int b) {
  std::vector<int> out;
  for (const auto& [t, p] : g.delta[s][a][b]) out.push_back(t);
  return out;
}

std::vector<int> dest_selectors(const ConcurrentGame& g, int s, const Distribution& xi1,
                                const Distribution& xi2) {
  std::set<int> acc;
  for (const auto& [a, pa] : xi1)
    for (const auto& [b, pb] : xi2)
      for (const auto& [t, p] : g.delta[s][a][b]) acc.insert(t);
  return {acc.begin(), acc.end()};
}

Distribution mixed_transition(const ConcurrentGame& g, int s, const Distribution& xi1,
                              const Distribution& xi2) {
  std::map<int, Rational> acc;
  for (const auto& [a, pa] : xi1)
    for (const auto& [b, pb] : xi2)
      for (const auto& [t, p] : g.delta[s][a][b]) acc[t] += pa * pb * p;
  Distribution out;
  for (const auto& [t, p] : acc)
    if (p.sign() > 0) out.emplace_back(t, p);
  return out;
}

ConcurrentGame fix_selector(const ConcurrentGame& g, const Selector& sel) {
  if (sel.dist.size() != static_cast<size_t>(g.n()))
    throw std::invalid_argument("selector state count does not match the game");
  ConcurrentGame m;
  m.states = g.states;
  m.moves1.resize(g.n());
  m.moves2.resize(g.n());
  m.delta.resize(g.n());
  for (int s = 0; s < g.n(); ++s) {
    const Distribution& xi = sel.dist[s];
    if (xi.empty()) throw std::invalid_argument("selector undefined at state '" + g.states[s] + "'");
    if (sel.player == 1) {
      m.moves1[s] = {"*"};
      m.moves2[s] = g.moves2[s];
      m.delta[s].resize(1);
      m.delta[s][0].resize(g.moves2[s].size());
      for (size_t b = 0; b < g.moves2[s].size(); ++b) {
        std::map<int, Rational> acc;
        for (const auto& [a, pa] : xi)
          for (const auto& [t, p] : g.delta[s][a][b]) acc[t] += pa * p;
        Distribution d;
        for (const auto& [t, p] : acc)
          if (p.sign() > 0) d.emplace_back(t, p);
        m.delta[s][0][b] = std::move(d);
      }
    } else {
      m.moves1[s] = g.moves1[s];
      m.moves2[s] = {"*"};
      m.delta[s].resize(g.moves1[s].size());
      for (size_t a = 0; a < g.moves1[s].size(); ++a) {
        std::map<int, Rational> acc;
        for (const auto& [b, pb] : xi)
          for (const auto& [t, p] : g.delta[s][a][b]) acc[t] += pb * p;
        Distribution d;
        for (const auto& [t, p] : acc)
          if (p.sign() > 0) d.emplace_back(t, p);
        m.delta[s][a] = {std::move(d)};
      }
    }
  }
  m.rebuild_index();
  return m;
}

ConcurrentGame make_absorbing(const ConcurrentGame& g, const std::vector<bool>& X) {
  ConcurrentGame out = g;
  for (int s = 0; s < g.n(); ++s) {
    if (!X[s]) continue;
    out.moves1[s] = {"*"};
    out.moves2[s] = {"*"};
    out.delta[s] = {{{{s, Rational(1)}}}};
  }
  out.rebuild_index();
  return out;
}

std::vector<std::pair<Rational, std::vector<int>>> value_classes(const Valuation& v) {
  std::map<Rational, std::vector<int>> classes;
  for (size_t s = 0; s < v.size(); ++s) classes[v[s]].push_back(static_cast<int>(s));
  return {classes.begin(), classes.end()};
}

ConcurrentGame embed_turn_based(const TurnBasedGame& g) {
  ConcurrentGame c;
  c.states = g.states;
  c.moves1.resize(g.n());
  c.moves2.resize(g.n());
  c.delta.resize(g.n());
  for (int s = 0; s < g.n(); ++s) {
    switch (g.owners[s]) {
      case Owner::P1: {
        for (int t : g.edges[s]) c.moves1[s].push_back(g.states[t]);
        c.moves2[s] = {"-"};
        c.delta[s].resize(g.edges[s].size());
        for (size_t e = 0; e < g.edges[s].size(); ++e)
          c.delta[s][e] = {{{g.edges[s][e], Rational(1)}}};
        break;
      }
      case Owner::P2: {
        c.moves1[s] = {"-"};
        for (int t : g.edges[s]) c.moves2[s].push_back(g.states[t]);
        c.delta[s].resize(1);
        for (size_t e = 0; e < g.edges[s].size(); ++e)
          c.delta[s][0].push_back({{g.edges[s][e], Rational(1)}});
        break;
      }
      case Owner::Random: {
        c.moves1[s] = {"-"};
        c.moves2[s] = {"-"};
        Distribution d = g.dist[s];
        std::sort(d.begin(), d.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        c.delta[s] = {{std::move(d)}};
        break;
      }
    }
  }
  c.rebuild_index();
  return c;
}

ConcurrentGame swap_players(const ConcurrentGame& g) {
  ConcurrentGame out;
  out.states = g.states;
  out.moves1 = g.moves2;
  out.moves2 = g.moves1;
  out.delta.resize(g.n());
  for (int s = 0; s < g.n(); ++s) {
    out.delta[s].resize(g.moves2[s].size());
    for (size_t b = 0; b < g.moves2[s].size(); ++b) {
      out.delta[s][b].resize(g.moves1[s].size());
      for (size_t a = 0; a < g.moves1[s].size(); ++a) out.delta[s][b][a] = g.delta[s][a][b];
    }
  }
  out.rebuild_index();
  return out;
}

bool is_mdp_for(const ConcurrentGame& g, int free_player) {
  const auto& fixed = free_player == 1 ? g.moves2 : g.moves1;
  for (int s = 0; s < g.n(); ++s)
    if (fixed[s].size() != 1) return false;
  return true;
}

}  // namespace sgs
