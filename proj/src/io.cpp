#include "sgs/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sgs {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("bad-json", origin, e.what());
  }
}

const json& need(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ParseError("missing-field", where, std::string("missing field '") + key + "'");
  return *it;
}

const json& as_object(const json& v, const std::string& where) {
  if (!v.is_object()) throw ParseError("bad-structure", where, "expected an object");
  return v;
}

const json& as_array(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError("bad-structure", where, "expected an array");
  return v;
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError("bad-structure", where, "expected a string");
  return v.get<std::string>();
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      throw ParseError("unknown-field", where, "unknown field '" + item.key() + "'");
}

std::vector<std::string> string_list(const json& v, const std::string& where) {
  std::vector<std::string> out;
  for (const auto& e : as_array(v, where)) out.push_back(as_string(e, where));
  return out;
}

Rational rational_at(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (!v.is_string())
    throw ParseError("bad-rational", where, "write exact rationals as strings like \"1/2\"");
  try {
    return Rational::parse(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError("bad-rational", where, e.what());
  }
}

struct StateIndex {
  std::map<std::string, int> at;

  explicit StateIndex(const std::vector<std::string>& states) {
    for (int s = 0; s < static_cast<int>(states.size()); ++s)
      if (!at.emplace(states[s], s).second)
        throw ParseError("duplicate-state", "states", "duplicate state '" + states[s] + "'");
  }
  int resolve(const std::string& name, const std::string& where) const {
    auto it = at.find(name);
    if (it == at.end()) throw ParseError("unknown-state", where, "unknown state '" + name + "'");
    return it->second;
  }
};

Distribution distribution_at(const json& v, const StateIndex& idx, const std::string& where) {
  const json& obj = as_object(v, where);
  if (obj.empty()) throw ParseError("bad-distribution", where, "empty distribution");
  Distribution entries;
  Rational sum(0);
  for (const auto& item : obj.items()) {
    const std::string at = where + "." + item.key();
    int t = idx.resolve(item.key(), at);
    Rational p = rational_at(item.value(), at);
    if (p.sign() <= 0) throw ParseError("bad-probability", at, "probabilities must be positive");
    entries.emplace_back(t, p);
    sum += p;
  }
  if (sum != Rational(1))
    throw ParseError("bad-distribution-sum", where,
                     "probabilities sum to " + sum.to_string() + ", not 1");
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return entries;
}

Objective objective_at(const json& v, const StateIndex& idx, int n) {
  const json& obj = as_object(v, "objective");
  const bool safety = obj.contains("safety");
  const bool reach = obj.contains("reachability");
  if (obj.size() != 1 || (!safety && !reach))
    throw ParseError("bad-objective", "objective",
                     "objective must be exactly one of {\"safety\": [...]} or "
                     "{\"reachability\": [...]}");
  Objective out;
  out.reach = reach;
  out.states.assign(n, false);
  for (const std::string& id : string_list(obj.begin().value(), "objective"))
    out.states[idx.resolve(id, "objective")] = true;
  return out;
}

void parse_concurrent(const json& j, GameFile& out) {
  ConcurrentGame& g = out.concurrent;
  g.states = string_list(need(j, "states", ""), "states");
  const StateIndex idx(g.states);
  const int n = static_cast<int>(g.states.size());
  g.moves1.resize(n);
  g.moves2.resize(n);
  g.delta.resize(n);

  const json& moves = as_object(need(j, "moves", ""), "moves");
  for (const auto& item : moves.items()) idx.resolve(item.key(), "moves");
  for (int s = 0; s < n; ++s) {
    const std::string& id = g.states[s];
    if (!moves.contains(id))
      throw ParseError("missing-field", "moves", "no moves for state '" + id + "'");
    const std::string where = "moves." + id;
    const json& m = as_object(moves[id], where);
    reject_unknown_keys(m, {"p1", "p2"}, where);
    g.moves1[s] = string_list(need(m, "p1", where), where + ".p1");
    g.moves2[s] = string_list(need(m, "p2", where), where + ".p2");
  }

  const json& tr = as_object(need(j, "transitions", ""), "transitions");
  for (const auto& item : tr.items()) idx.resolve(item.key(), "transitions");
  for (int s = 0; s < n; ++s) {
    const std::string& id = g.states[s];
    if (!tr.contains(id))
      throw ParseError("missing-transition", "transitions", "no transitions for state '" + id + "'");
    const std::string ws = "transitions." + id;
    const json& ts = as_object(tr[id], ws);
    std::set<std::string> m1(g.moves1[s].begin(), g.moves1[s].end());
    for (const auto& item : ts.items())
      if (!m1.count(item.key()))
        throw ParseError("unknown-move", ws, "unknown player-1 move '" + item.key() + "'");
    g.delta[s].resize(g.moves1[s].size());
    for (std::size_t a = 0; a < g.moves1[s].size(); ++a) {
      const std::string& ma = g.moves1[s][a];
      if (!ts.contains(ma))
        throw ParseError("missing-transition", ws, "no entry for move '" + ma + "'");
      const std::string wa = ws + "." + ma;
      const json& ta = as_object(ts[ma], wa);
      std::set<std::string> m2(g.moves2[s].begin(), g.moves2[s].end());
      for (const auto& item : ta.items())
        if (!m2.count(item.key()))
          throw ParseError("unknown-move", wa, "unknown player-2 move '" + item.key() + "'");
      g.delta[s][a].resize(g.moves2[s].size());
      for (std::size_t b = 0; b < g.moves2[s].size(); ++b) {
        const std::string& mb = g.moves2[s][b];
        if (!ta.contains(mb))
          throw ParseError("missing-transition", wa,
                           "no entry for move pair (" + ma + ", " + mb + ")");
        g.delta[s][a][b] = distribution_at(ta[mb], idx, wa + "." + mb);
      }
    }
  }
  g.rebuild_index();
  out.objective = objective_at(need(j, "objective", ""), idx, n);
}

void parse_turn_based(const json& j, GameFile& out) {
  TurnBasedGame& g = out.turn;
  g.states = string_list(need(j, "states", ""), "states");
  const StateIndex idx(g.states);
  const int n = static_cast<int>(g.states.size());
  g.owners.resize(n);
  g.edges.resize(n);
  g.dist.resize(n);

  const json& owners = as_object(need(j, "owners", ""), "owners");
  for (const auto& item : owners.items()) idx.resolve(item.key(), "owners");
  for (int s = 0; s < n; ++s) {
    const std::string& id = g.states[s];
    if (!owners.contains(id))
      throw ParseError("missing-field", "owners", "no owner for state '" + id + "'");
    const std::string o = as_string(owners[id], "owners." + id);
    if (o == "p1")
      g.owners[s] = Owner::P1;
    else if (o == "p2")
      g.owners[s] = Owner::P2;
    else if (o == "random")
      g.owners[s] = Owner::Random;
    else
      throw ParseError("bad-owner", "owners." + id, "owner must be \"p1\", \"p2\" or \"random\"");
  }

  const json empty_obj = json::object();
  const json& edges = j.contains("edges") ? as_object(j["edges"], "edges") : empty_obj;
  for (const auto& item : edges.items()) idx.resolve(item.key(), "edges");
  const json& tr = j.contains("transitions") ? as_object(j["transitions"], "transitions")
                                             : empty_obj;
  for (const auto& item : tr.items()) idx.resolve(item.key(), "transitions");

  for (int s = 0; s < n; ++s) {
    const std::string& id = g.states[s];
    if (g.owners[s] == Owner::Random) {
      if (!tr.contains(id))
        throw ParseError("missing-transition", "transitions",
                         "no transitions for random state '" + id + "'");
      g.dist[s] = distribution_at(tr[id], idx, "transitions." + id);
      for (const auto& e : g.dist[s]) g.edges[s].push_back(e.first);
      // A redundant edge list is allowed but must spell out exactly the
      // distribution support.
      if (edges.contains(id)) {
        std::set<int> listed;
        for (const std::string& t : string_list(edges[id], "edges." + id))
          listed.insert(idx.resolve(t, "edges." + id));
        std::set<int> support(g.edges[s].begin(), g.edges[s].end());
        if (listed != support)
          throw ParseError("support-mismatch", "edges." + id,
                           "edge list must equal the distribution support");
      }
    } else {
      if (tr.contains(id))
        throw ParseError("unexpected-transitions", "transitions." + id,
                         "state '" + id + "' is not random");
      if (!edges.contains(id))
        throw ParseError("missing-field", "edges", "no edges for state '" + id + "'");
      for (const std::string& t : string_list(edges[id], "edges." + id))
        g.edges[s].push_back(idx.resolve(t, "edges." + id));
    }
  }
  g.rebuild_index();
  out.objective = objective_at(need(j, "objective", ""), idx, n);
}

const char* kind_name(StepKind k) {
  switch (k) {
    case StepKind::PreStep: return "PreStep";
    case StepKind::TbStep: return "TbStep";
    case StepKind::Terminal: return "Terminal";
  }
  return "Terminal";
}

ordered_json valuation_json(const std::vector<std::string>& states, const Valuation& v) {
  ordered_json out = ordered_json::object();
  for (std::size_t s = 0; s < states.size(); ++s) out[states[s]] = v[s].to_string();
  return out;
}

ordered_json record_json(const std::vector<std::string>& states, int index, const char* kind,
                         const std::vector<int>& improved, const Valuation& v) {
  ordered_json j;
  j["index"] = index;
  j["kind"] = kind;
  ordered_json imp = ordered_json::array();
  for (int s : improved) imp.push_back(states[s]);
  j["improved"] = imp;
  j["valuation"] = valuation_json(states, v);
  return j;
}

void check_record_order(const std::vector<std::string>& states,
                        const std::vector<IterationRecord>& records) {
  for (const IterationRecord& r : records) {
    if (r.valuation.size() != states.size())
      throw std::invalid_argument("trace record does not cover every state");
    if (r.kind == StepKind::Terminal && &r != &records.back())
      throw std::logic_error("trace has a non-final terminal record");
  }
  for (std::size_t i = 1; i < records.size(); ++i)
    for (std::size_t s = 0; s < states.size(); ++s)
      if (records[i].valuation[s] < records[i - 1].valuation[s])
        throw std::logic_error("trace violates the improvement ordering");
}

}  // namespace

GameFile parse_game_text(const std::string& text, const std::string& origin) {
  const json j = parse_json(text, origin);
  as_object(j, origin.empty() ? "file" : origin);

  const json& fv = need(j, "formatVersion", "");
  if (!fv.is_number_integer() || fv.get<long>() != 1)
    throw ParseError("bad-format-version", "formatVersion", "supported version is 1");
  const std::string kind = as_string(need(j, "kind", ""), "kind");

  GameFile out;
  if (kind == "concurrent") {
    reject_unknown_keys(j, {"formatVersion", "kind", "states", "moves", "transitions", "objective"},
                        "");
    out.turn_based = false;
    parse_concurrent(j, out);
  } else if (kind == "turn-based") {
    reject_unknown_keys(j, {"formatVersion", "kind", "states", "owners", "edges", "transitions",
                            "objective"},
                        "");
    out.turn_based = true;
    parse_turn_based(j, out);
  } else {
    throw ParseError("bad-kind", "kind", "kind must be \"concurrent\" or \"turn-based\"");
  }

  const std::vector<Violation> vs =
      out.turn_based ? validate_game(out.turn) : validate_game(out.concurrent);
  if (!vs.empty()) throw ParseError(vs[0].code, vs[0].where, vs[0].message);
  return out;
}

GameFile parse_game_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("io", path, "cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_game_text(ss.str(), path);
}

std::string render_game(const GameFile& f) {
  ordered_json j;
  j["formatVersion"] = 1;
  j["kind"] = f.turn_based ? "turn-based" : "concurrent";
  const std::vector<std::string>& states = f.turn_based ? f.turn.states : f.concurrent.states;
  j["states"] = states;

  if (f.turn_based) {
    const TurnBasedGame& g = f.turn;
    ordered_json owners = ordered_json::object();
    for (int s = 0; s < g.n(); ++s) {
      switch (g.owners[s]) {
        case Owner::P1: owners[g.states[s]] = "p1"; break;
        case Owner::P2: owners[g.states[s]] = "p2"; break;
        case Owner::Random: owners[g.states[s]] = "random"; break;
      }
    }
    j["owners"] = owners;
    ordered_json edges = ordered_json::object();
    for (int s = 0; s < g.n(); ++s) {
      if (g.owners[s] == Owner::Random) continue;
      ordered_json row = ordered_json::array();
      for (int t : g.edges[s]) row.push_back(g.states[t]);
      edges[g.states[s]] = row;
    }
    j["edges"] = edges;
    ordered_json tr = ordered_json::object();
    for (int s = 0; s < g.n(); ++s) {
      if (g.owners[s] != Owner::Random) continue;
      ordered_json row = ordered_json::object();
      for (const auto& e : g.dist[s]) row[g.states[e.first]] = e.second.to_string();
      tr[g.states[s]] = row;
    }
    j["transitions"] = tr;
  } else {
    const ConcurrentGame& g = f.concurrent;
    ordered_json moves = ordered_json::object();
    for (int s = 0; s < g.n(); ++s) {
      ordered_json m;
      m["p1"] = g.moves1[s];
      m["p2"] = g.moves2[s];
      moves[g.states[s]] = m;
    }
    j["moves"] = moves;
    ordered_json tr = ordered_json::object();
    for (int s = 0; s < g.n(); ++s) {
      ordered_json ts = ordered_json::object();
      for (std::size_t a = 0; a < g.moves1[s].size(); ++a) {
        ordered_json ta = ordered_json::object();
        for (std::size_t b = 0; b < g.moves2[s].size(); ++b) {
          ordered_json row = ordered_json::object();
          for (const auto& e : g.delta[s][a][b]) row[g.states[e.first]] = e.second.to_string();
          ta[g.moves2[s][b]] = row;
        }
        ts[g.moves1[s][a]] = ta;
      }
      tr[g.states[s]] = ts;
    }
    j["transitions"] = tr;
  }

  ordered_json listed = ordered_json::array();
  for (std::size_t s = 0; s < states.size(); ++s)
    if (f.objective.states[s]) listed.push_back(states[s]);
  ordered_json obj = ordered_json::object();
  obj[f.objective.reach ? "reachability" : "safety"] = listed;
  j["objective"] = obj;
  return j.dump(2) + "\n";
}

Valuation parse_valuation_text(const std::string& text, const std::vector<std::string>& states,
                               const std::string& origin) {
  const json j = parse_json(text, origin);
  as_object(j, "valuation");
  const StateIndex idx(states);
  Valuation v(states.size());
  std::vector<bool> seen(states.size(), false);
  for (const auto& item : j.items()) {
    const int s = idx.resolve(item.key(), "valuation");
    const std::string at = "valuation." + item.key();
    v[s] = rational_at(item.value(), at);
    if (v[s].sign() < 0 || v[s] > Rational(1))
      throw ParseError("bad-valuation", at, "values must lie in [0, 1]");
    seen[s] = true;
  }
  for (std::size_t s = 0; s < states.size(); ++s)
    if (!seen[s])
      throw ParseError("missing-field", "valuation", "no value for state '" + states[s] + "'");
  return v;
}

Valuation parse_valuation_file(const std::string& path, const std::vector<std::string>& states) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("io", path, "cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_valuation_text(ss.str(), states, path);
}

std::string render_result(const std::vector<std::string>& states, const Valuation& values,
                          const NamedStrategy& strategy, const ResultMeta& meta,
                          int decimal_digits) {
  if (values.size() != states.size())
    throw std::invalid_argument("render_result: values must cover every state");
  if (!strategy.empty() && strategy.size() != states.size())
    throw std::invalid_argument("render_result: strategy rows must cover every state");
  if (decimal_digits < 1) throw std::invalid_argument("render_result: digits must be positive");

  ordered_json j;
  j["formatVersion"] = 1;
  ordered_json vals = ordered_json::object();
  for (std::size_t s = 0; s < states.size(); ++s) {
    ordered_json v;
    v["exact"] = values[s].to_string();
    v["decimal"] = values[s].to_decimal(decimal_digits);
    vals[states[s]] = v;
  }
  j["values"] = vals;

  bool any_row = false;
  for (const auto& row : strategy) any_row = any_row || !row.empty();
  if (any_row) {
    ordered_json st = ordered_json::object();
    for (std::size_t s = 0; s < states.size(); ++s) {
      if (strategy[s].empty()) continue;
      ordered_json row = ordered_json::object();
      for (const auto& e : strategy[s]) row[e.first] = e.second.to_string();
      st[states[s]] = row;
    }
    j["strategy"] = st;
  }

  ordered_json md;
  md["iterations"] = meta.iterations;
  md["stopReason"] = meta.stop_reason;
  if (meta.gap) md["gap"] = meta.gap->to_string();
  if (!meta.lower_bound.empty() || !meta.upper_bound.empty()) {
    if (meta.lower_bound.size() != states.size() || meta.upper_bound.size() != states.size())
      throw std::invalid_argument("render_result: bounds must cover every state");
    ordered_json bounds;
    bounds["lower"] = valuation_json(states, meta.lower_bound);
    bounds["upper"] = valuation_json(states, meta.upper_bound);
    md["bounds"] = bounds;
  }
  j["metadata"] = md;
  return j.dump(2) + "\n";
}

std::string render_trace(const std::vector<std::string>& states,
                         const std::vector<IterationRecord>& records) {
  check_record_order(states, records);
  std::ostringstream os;
  for (const IterationRecord& r : records)
    os << record_json(states, r.index, kind_name(r.kind), r.improved, r.valuation).dump() << '\n';
  return os.str();
}

std::string render_sandwich_trace(const std::vector<std::string>& states,
                                  const SandwichReport& rep) {
  check_record_order(states, rep.records);
  if (rep.lower.size() != rep.upper.size())
    throw std::invalid_argument("sandwich trace needs one upper bound per lower bound");
  for (const Valuation& v : rep.lower)
    if (v.size() != states.size())
      throw std::invalid_argument("trace record does not cover every state");
  for (const Valuation& v : rep.upper)
    if (v.size() != states.size())
      throw std::invalid_argument("trace record does not cover every state");
  for (std::size_t i = 1; i < rep.lower.size(); ++i)
    for (std::size_t s = 0; s < states.size(); ++s)
      if (rep.lower[i][s] < rep.lower[i - 1][s] || rep.upper[i][s] > rep.upper[i - 1][s])
        throw std::logic_error("trace violates the improvement ordering");
  for (const Valuation& lo : rep.lower)
    for (const Valuation& hi : rep.upper)
      for (std::size_t s = 0; s < states.size(); ++s)
        if (lo[s] > hi[s]) throw std::logic_error("trace violates the bound ordering");

  std::ostringstream os;
  std::size_t next_record = 0;
  for (std::size_t r = 0; r < rep.upper.size(); ++r) {
    if (next_record < rep.records.size() &&
        rep.records[next_record].index == static_cast<int>(r)) {
      const IterationRecord& rec = rep.records[next_record++];
      os << record_json(states, rec.index, kind_name(rec.kind), rec.improved, rec.valuation).dump()
         << '\n';
    }
    os << record_json(states, static_cast<int>(r), "UpperVI", {}, rep.upper[r]).dump() << '\n';
  }
  return os.str();
}

std::string render_bounds(const TerminationBound& b) {
  ordered_json j;
  j["formatVersion"] = 1;
  j["stepBound"] = b.step_bound.to_string();
  j["strategyBound"] = b.strategy_bound.to_string();
  j["transformed"] = b.transformed;
  return j.dump(2) + "\n";
}

}  // namespace sgs
