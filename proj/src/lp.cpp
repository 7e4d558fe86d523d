#include "sgs/lp.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgs {

int LinearProgram::add_variable(std::string name, std::optional<Rational> lo,
                                std::optional<Rational> hi) {
  var_names.push_back(std::move(name));
  lower.push_back(std::move(lo));
  upper.push_back(std::move(hi));
  return static_cast<int>(var_names.size()) - 1;
}

int LinearProgram::add_constraint(std::vector<std::pair<int, Rational>> coeffs, Relation rel,
                                  Rational rhs) {
  constraints.push_back({std::move(coeffs), rel, std::move(rhs)});
  return static_cast<int>(constraints.size()) - 1;
}

namespace {

// Standard-form tableau: rows are equalities over nonnegative columns, the
// basis holds one column per row, and the stored rows are B^-1 A with
// right-hand sides B^-1 b >= 0.
struct Tableau {
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  std::vector<int> basis;
  int structural = 0;  // columns [0, structural) are real; the rest artificial

  int width() const { return rows.empty() ? 0 : static_cast<int>(rows[0].size()); }

  void pivot(int r, int c) {
    Rational p = rows[r][c];
    int w = width();
    for (int j = 0; j < w; ++j) rows[r][j] /= p;
    rhs[r] /= p;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) == r) continue;
      Rational f = rows[i][c];
      if (f.sign() == 0) continue;
      for (int j = 0; j < w; ++j) rows[i][j] -= f * rows[r][j];
      rhs[i] -= f * rhs[r];
    }
    basis[r] = c;
  }
};

enum class RunOutcome { Optimal, Unbounded };

// Minimizes cost over the tableau. Entering columns are restricted to the
// structural block; Bland's rule (lowest entering index, lowest basic index
// on ratio ties) guarantees termination without cycling.
RunOutcome run_simplex(Tableau& t, const std::vector<Rational>& cost) {
  const int m = static_cast<int>(t.rows.size());
  for (long guard = 0;; ++guard) {
    if (guard > 1000000) throw std::logic_error("simplex failed to terminate");
    int entering = -1;
    for (int j = 0; j < t.structural && entering < 0; ++j) {
      Rational rc = cost[j];
      for (int r = 0; r < m; ++r) {
        if (t.rows[r][j].sign() != 0 && cost[t.basis[r]].sign() != 0)
          rc -= cost[t.basis[r]] * t.rows[r][j];
      }
      if (rc.sign() < 0) entering = j;
    }
    if (entering < 0) return RunOutcome::Optimal;
    int leave = -1;
    Rational best;
    for (int r = 0; r < m; ++r) {
      if (t.rows[r][entering].sign() <= 0) continue;
      Rational ratio = t.rhs[r] / t.rows[r][entering];
      if (leave < 0 || ratio < best || (ratio == best && t.basis[r] < t.basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0) return RunOutcome::Unbounded;
    t.pivot(leave, entering);
  }
}

Rational tableau_objective(const Tableau& t, const std::vector<Rational>& cost) {
  Rational v;
  for (size_t r = 0; r < t.rows.size(); ++r) v += cost[t.basis[r]] * t.rhs[r];
  return v;
}

struct VarMap {
  int pos = -1;    // column of the nonnegative (or shifted) part
  int neg = -1;    // column of the negative part for sign-split variables
  Rational shift;  // x = shift + y_pos - y_neg
};

void verify_point(const LinearProgram& lp, const std::vector<Rational>& x) {
  for (size_t j = 0; j < x.size(); ++j) {
    if (lp.lower[j] && x[j] < *lp.lower[j])
      throw std::logic_error("lp solution violates a lower bound");
    if (lp.upper[j] && x[j] > *lp.upper[j])
      throw std::logic_error("lp solution violates an upper bound");
  }
  for (const auto& c : lp.constraints) {
    Rational lhs;
    for (const auto& [v, coef] : c.coeffs) lhs += coef * x[v];
    bool ok = c.rel == LinearProgram::Relation::LessEq      ? lhs <= c.rhs
              : c.rel == LinearProgram::Relation::GreaterEq ? lhs >= c.rhs
                                                            : lhs == c.rhs;
    if (!ok) throw std::logic_error("lp solution violates a constraint");
  }
}

}  // namespace

LPResult solve_lp(const LinearProgram& lp) {
  const int nvars = static_cast<int>(lp.var_names.size());

  // Variable translation: x = shift + y (lower bound present) or x = y+ - y-.
  std::vector<VarMap> vmap(nvars);
  int cols = 0;
  for (int j = 0; j < nvars; ++j) {
    if (lp.lower[j]) {
      vmap[j].pos = cols++;
      vmap[j].shift = *lp.lower[j];
    } else {
      vmap[j].pos = cols++;
      vmap[j].neg = cols++;
    }
  }

  struct Row {
    std::vector<Rational> coef;  // dense over translated columns
    LinearProgram::Relation rel;
    Rational rhs;
  };
  std::vector<Row> rows;
  auto add_row = [&](const std::vector<std::pair<int, Rational>>& sparse,
                     LinearProgram::Relation rel, const Rational& rhs) {
    Row row{std::vector<Rational>(static_cast<size_t>(cols)), rel, rhs};
    for (const auto& [v, c] : sparse) {
      if (v < 0 || v >= nvars) throw std::invalid_argument("constraint names unknown variable");
      row.coef[vmap[v].pos] += c;
      if (vmap[v].neg >= 0) row.coef[vmap[v].neg] -= c;
      row.rhs -= c * vmap[v].shift;
    }
    rows.push_back(std::move(row));
  };
  for (const auto& c : lp.constraints) add_row(c.coeffs, c.rel, c.rhs);
  for (int j = 0; j < nvars; ++j)
    if (lp.upper[j])
      add_row({{j, Rational(1)}}, LinearProgram::Relation::LessEq, *lp.upper[j]);

  // Equalize: flip rows to rhs >= 0, then slack (<=) or surplus (>=) them.
  for (auto& r : rows) {
    if (r.rhs.sign() < 0) {
      for (auto& c : r.coef) c = -c;
      r.rhs = -r.rhs;
      if (r.rel == LinearProgram::Relation::LessEq)
        r.rel = LinearProgram::Relation::GreaterEq;
      else if (r.rel == LinearProgram::Relation::GreaterEq)
        r.rel = LinearProgram::Relation::LessEq;
    }
  }
  const int m = static_cast<int>(rows.size());
  int slack_cols = 0;
  for (const auto& r : rows)
    if (r.rel != LinearProgram::Relation::Equal) ++slack_cols;
  int structural = cols + slack_cols;

  std::vector<int> needs_artificial;
  Tableau t;
  t.structural = structural;
  t.rows.assign(static_cast<size_t>(m), {});
  t.rhs.resize(static_cast<size_t>(m));
  t.basis.assign(static_cast<size_t>(m), -1);
  {
    int next_slack = cols;
    for (int r = 0; r < m; ++r) {
      t.rows[r].assign(static_cast<size_t>(structural), Rational(0));
      std::copy(rows[r].coef.begin(), rows[r].coef.end(), t.rows[r].begin());
      t.rhs[r] = rows[r].rhs;
      if (rows[r].rel == LinearProgram::Relation::LessEq) {
        t.rows[r][next_slack] = Rational(1);
        t.basis[r] = next_slack++;
      } else if (rows[r].rel == LinearProgram::Relation::GreaterEq) {
        t.rows[r][next_slack] = Rational(-1);
        ++next_slack;
        needs_artificial.push_back(r);
      } else {
        needs_artificial.push_back(r);
      }
    }
  }
  int total = structural + static_cast<int>(needs_artificial.size());
  for (auto& row : t.rows) row.resize(static_cast<size_t>(total), Rational(0));
  {
    int next_art = structural;
    for (int r : needs_artificial) {
      t.rows[r][next_art] = Rational(1);
      t.basis[r] = next_art++;
    }
  }

  // Phase 1: drive the artificial columns to zero.
  if (!needs_artificial.empty()) {
    std::vector<Rational> phase1(static_cast<size_t>(total), Rational(0));
    for (int j = structural; j < total; ++j) phase1[static_cast<size_t>(j)] = Rational(1);
    if (run_simplex(t, phase1) == RunOutcome::Unbounded)
      throw std::logic_error("phase-1 objective cannot be unbounded");
    if (tableau_objective(t, phase1).sign() != 0) return {LPResult::Status::Infeasible, {}, {}};
    for (int r = static_cast<int>(t.rows.size()) - 1; r >= 0; --r) {
      if (t.basis[r] < structural) continue;
      int col = -1;
      for (int j = 0; j < structural && col < 0; ++j)
        if (t.rows[r][j].sign() != 0) col = j;
      if (col >= 0) {
        t.pivot(r, col);
      } else {
        t.rows.erase(t.rows.begin() + r);
        t.rhs.erase(t.rhs.begin() + r);
        t.basis.erase(t.basis.begin() + r);
      }
    }
  }

  // Phase 2 on the requested objective (maximization minimizes the negation).
  std::vector<Rational> cost(static_cast<size_t>(total), Rational(0));
  for (const auto& [v, c] : lp.objective) {
    if (v < 0 || v >= nvars) throw std::invalid_argument("objective names unknown variable");
    Rational f = lp.sense == LinearProgram::Sense::Maximize ? -c : c;
    cost[vmap[v].pos] += f;
    if (vmap[v].neg >= 0) cost[vmap[v].neg] -= f;
  }
  if (run_simplex(t, cost) == RunOutcome::Unbounded) return {LPResult::Status::Unbounded, {}, {}};

  std::vector<Rational> ycol(static_cast<size_t>(total), Rational(0));
  for (size_t r = 0; r < t.rows.size(); ++r) ycol[t.basis[r]] = t.rhs[r];
  LPResult res;
  res.status = LPResult::Status::Optimal;
  res.assignment.resize(static_cast<size_t>(nvars));
  for (int j = 0; j < nvars; ++j) {
    res.assignment[j] = vmap[j].shift + ycol[vmap[j].pos];
    if (vmap[j].neg >= 0) res.assignment[j] -= ycol[vmap[j].neg];
  }
  for (const auto& [v, c] : lp.objective) res.objective_value += c * res.assignment[v];
  verify_point(lp, res.assignment);
  return res;
}

SlackResult solve_max_slack(const LinearProgram& lp, const std::vector<int>& strict) {
  LinearProgram widened = lp;
  int tvar = widened.add_variable("_slack", std::nullopt, Rational(1));
  for (int idx : strict) {
    if (idx < 0 || idx >= static_cast<int>(widened.constraints.size()))
      throw std::invalid_argument("strict constraint index out of range");
    auto& c = widened.constraints[idx];
    if (c.rel != LinearProgram::Relation::GreaterEq)
      throw std::invalid_argument("only lhs >= rhs constraints can be strictified");
    c.coeffs.emplace_back(tvar, Rational(-1));
  }
  widened.sense = LinearProgram::Sense::Maximize;
  widened.objective = {{tvar, Rational(1)}};

  LPResult inner = solve_lp(widened);
  SlackResult out;
  if (inner.status != LPResult::Status::Optimal) {
    out.status = LPResult::Status::Infeasible;
    return out;
  }
  out.max_slack = inner.assignment.back();
  // t < 0 means the relaxed system only closes with negative slack, i.e. the
  // base system itself is infeasible.
  out.status = out.max_slack.sign() < 0 ? LPResult::Status::Infeasible : LPResult::Status::Optimal;
  inner.assignment.pop_back();
  out.assignment = std::move(inner.assignment);
  return out;
}

}  // namespace sgs
