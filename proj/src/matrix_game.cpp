#include "sgs/matrix_game.hpp"

#include <cstdlib>
#include <stdexcept>

namespace sgs {

void require_valid(const MatrixGame& m) {
  if (m.row_moves.empty() || m.col_moves.empty())
    throw std::invalid_argument("matrix game needs at least one move per player");
  if (m.payoff.size() != m.row_moves.size())
    throw std::invalid_argument("payoff row count does not match the move list");
  for (const auto& row : m.payoff) {
    if (row.size() != m.col_moves.size())
      throw std::invalid_argument("payoff column count does not match the move list");
    for (const auto& e : row)
      if (e < Rational(0) || e > Rational(1))
        throw std::invalid_argument("payoff entries must lie in [0,1]");
  }
}

MatrixGame transpose(const MatrixGame& m) {
  MatrixGame t;
  t.row_moves = m.col_moves;
  t.col_moves = m.row_moves;
  t.payoff.assign(m.col_moves.size(), std::vector<Rational>(m.row_moves.size()));
  for (int a = 0; a < m.rows(); ++a)
    for (int b = 0; b < m.cols(); ++b) t.payoff[b][a] = m.payoff[a][b];
  return t;
}

MatrixGame local_matrix(const ConcurrentGame& g, int s, const Valuation& v) {
  if (v.size() != static_cast<size_t>(g.n()))
    throw std::invalid_argument("valuation size does not match the game");
  MatrixGame m;
  m.row_moves = g.moves1[s];
  m.col_moves = g.moves2[s];
  m.payoff.assign(m.row_moves.size(), std::vector<Rational>(m.col_moves.size()));
  for (size_t a = 0; a < m.row_moves.size(); ++a)
    for (size_t b = 0; b < m.col_moves.size(); ++b) {
      Rational e;
      for (const auto& [t, p] : g.delta[s][a][b]) e += p * v[t];
      m.payoff[a][b] = e;
    }
  return m;
}

namespace {

Distribution strategy_from(const std::vector<Rational>& assignment, int count) {
  Distribution d;
  for (int i = 0; i < count; ++i)
    if (assignment[i].sign() > 0) d.emplace_back(i, assignment[i]);
  return d;
}

}  // namespace

MatrixGameSolution game_value(const MatrixGame& m) {
  require_valid(m);

  // Row player: maximize the worst-case column reply.
  LinearProgram row_lp;
  for (const auto& name : m.row_moves) row_lp.add_variable("xi_" + name, Rational(0));
  int vvar = row_lp.add_variable("value");
  for (int b = 0; b < m.cols(); ++b) {
    std::vector<std::pair<int, Rational>> coeffs;
    for (int a = 0; a < m.rows(); ++a) coeffs.emplace_back(a, m.payoff[a][b]);
    coeffs.emplace_back(vvar, Rational(-1));
    row_lp.add_constraint(std::move(coeffs), LinearProgram::Relation::GreaterEq, Rational(0));
  }
  {
    std::vector<std::pair<int, Rational>> coeffs;
    for (int a = 0; a < m.rows(); ++a) coeffs.emplace_back(a, Rational(1));
    row_lp.add_constraint(std::move(coeffs), LinearProgram::Relation::Equal, Rational(1));
  }
  row_lp.sense = LinearProgram::Sense::Maximize;
  row_lp.objective = {{vvar, Rational(1)}};
  LPResult row = solve_lp(row_lp);
  if (row.status != LPResult::Status::Optimal)
    throw std::logic_error("matrix game row program must be solvable");

  // Column player: minimize the worst-case row reply.
  LinearProgram col_lp;
  for (const auto& name : m.col_moves) col_lp.add_variable("eta_" + name, Rational(0));
  int wvar = col_lp.add_variable("value");
  for (int a = 0; a < m.rows(); ++a) {
    std::vector<std::pair<int, Rational>> coeffs;
    for (int b = 0; b < m.cols(); ++b) coeffs.emplace_back(b, m.payoff[a][b]);
    coeffs.emplace_back(wvar, Rational(-1));
    col_lp.add_constraint(std::move(coeffs), LinearProgram::Relation::LessEq, Rational(0));
  }
  {
    std::vector<std::pair<int, Rational>> coeffs;
    for (int b = 0; b < m.cols(); ++b) coeffs.emplace_back(b, Rational(1));
    col_lp.add_constraint(std::move(coeffs), LinearProgram::Relation::Equal, Rational(1));
  }
  col_lp.sense = LinearProgram::Sense::Minimize;
  col_lp.objective = {{wvar, Rational(1)}};
  LPResult col = solve_lp(col_lp);
  if (col.status != LPResult::Status::Optimal)
    throw std::logic_error("matrix game column program must be solvable");

  if (row.objective_value != col.objective_value)
    throw std::logic_error("matrix game duality gap: " + row.objective_value.to_string() +
                           " vs " + col.objective_value.to_string());

  MatrixGameSolution sol;
  sol.value = row.objective_value;
  sol.row_strategy = strategy_from(row.assignment, m.rows());
  sol.col_strategy = strategy_from(col.assignment, m.cols());
  return sol;
}

Rational one_step_value(const MatrixGame& m, const Distribution& xi1, const Distribution& xi2) {
  Rational v;
  for (const auto& [a, pa] : xi1)
    for (const auto& [b, pb] : xi2) v += pa * pb * m.payoff[a][b];
  return v;
}

Rational guarantee_under(const MatrixGame& m, const Distribution& xi1) {
  if (xi1.empty()) throw std::invalid_argument("empty strategy");
  Rational best;
  for (int b = 0; b < m.cols(); ++b) {
    Rational v;
    for (const auto& [a, pa] : xi1) v += pa * m.payoff[a][b];
    if (b == 0 || v < best) best = v;
  }
  return best;
}

Rational one_shot_value(const ConcurrentGame& g, int s, const Valuation& v) {
  return game_value(local_matrix(g, s, v)).value;
}

bool is_value_optimal(const ConcurrentGame& g, int s, const Valuation& v,
                      const Distribution& xi1) {
  MatrixGame m = local_matrix(g, s, v);
  return guarantee_under(m, xi1) == game_value(m).value;
}

std::vector<int> counter_optimal_moves(const ConcurrentGame& g, int s, const Valuation& v,
                                       const Distribution& xi1) {
  MatrixGame m = local_matrix(g, s, v);
  Rational val = game_value(m).value;
  if (guarantee_under(m, xi1) != val)
    throw std::invalid_argument("selector is not value-optimal at '" + g.states[s] + "'");
  std::vector<int> tight;
  for (int b = 0; b < m.cols(); ++b) {
    Rational reply;
    for (const auto& [a, pa] : xi1) reply += pa * m.payoff[a][b];
    if (reply == val) tight.push_back(b);
  }
  return tight;
}

long enumeration_budget() {
  static long budget = [] {
    const char* env = std::getenv("SGSOLVE_ENUM_BUDGET");
    if (!env) return 1048576L;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || v <= 0) return 1048576L;
    return v;
  }();
  return budget;
}

std::vector<SupportPair> optimal_support_pairs(const ConcurrentGame& g, int s,
                                               const Valuation& v) {
  MatrixGame m = local_matrix(g, s, v);
  Rational val = game_value(m).value;
  const int m1 = m.rows();
  const int m2 = m.cols();
  long combos = ((1L << m1) - 1) * ((1L << m2) - 1);
  if (m1 > 20 || m2 > 20 || combos > enumeration_budget())
    throw ResourceError("support-pair enumeration at '" + g.states[s] + "' needs " +
                        std::to_string(combos) + " candidates, budget is " +
                        std::to_string(enumeration_budget()));

  std::vector<SupportPair> out;
  for (long amask = 1; amask < (1L << m1); ++amask) {
    std::vector<int> A;
    for (int a = 0; a < m1; ++a)
      if (amask & (1L << a)) A.push_back(a);
    for (long bmask = 1; bmask < (1L << m2); ++bmask) {
      std::vector<int> B;
      for (int b = 0; b < m2; ++b)
        if (bmask & (1L << b)) B.push_back(b);

      // Feasibility of: support exactly A, replies in B tight at the value,
      // replies outside B strictly above it.
      LinearProgram lp;
      for (int a : A) lp.add_variable("xi_" + m.row_moves[a]);
      std::vector<int> strict;
      for (size_t i = 0; i < A.size(); ++i)
        strict.push_back(lp.add_constraint({{static_cast<int>(i), Rational(1)}},
                                           LinearProgram::Relation::GreaterEq, Rational(0)));
      {
        std::vector<std::pair<int, Rational>> coeffs;
        for (size_t i = 0; i < A.size(); ++i) coeffs.emplace_back(static_cast<int>(i), Rational(1));
        lp.add_constraint(std::move(coeffs), LinearProgram::Relation::Equal, Rational(1));
      }
      for (int b = 0; b < m2; ++b) {
        std::vector<std::pair<int, Rational>> coeffs;
        for (size_t i = 0; i < A.size(); ++i) coeffs.emplace_back(static_cast<int>(i), m.payoff[A[i]][b]);
        if (bmask & (1L << b)) {
          lp.add_constraint(std::move(coeffs), LinearProgram::Relation::Equal, val);
        } else {
          strict.push_back(
              lp.add_constraint(std::move(coeffs), LinearProgram::Relation::GreaterEq, val));
        }
      }
      SlackResult sr = solve_max_slack(lp, strict);
      if (sr.status != LPResult::Status::Optimal || sr.max_slack.sign() <= 0) continue;

      SupportPair pair;
      pair.support = A;
      pair.counter_moves = B;
      for (size_t i = 0; i < A.size(); ++i) pair.witness.emplace_back(A[i], sr.assignment[i]);
      if (!is_value_optimal(g, s, v, pair.witness) ||
          counter_optimal_moves(g, s, v, pair.witness) != B)
        throw std::logic_error("support-pair witness failed its own certificate");
      out.push_back(std::move(pair));
    }
  }
  return out;
}

}  // namespace sgs
