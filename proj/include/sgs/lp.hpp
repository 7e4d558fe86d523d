#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgs/rational.hpp"

namespace sgs {

// Exact-rational linear program. Variables may carry optional lower/upper
// bounds; unbounded-below variables are handled by sign splitting inside the
// solver. Constraint and variable order is significant: the solver pivots by
// Bland's rule over this ordering, so identical programs yield identical
// optimal assignments.
struct LinearProgram {
  enum class Sense { Minimize, Maximize };
  enum class Relation { LessEq, GreaterEq, Equal };

  struct Constraint {
    std::vector<std::pair<int, Rational>> coeffs;  // sparse (variable, coefficient)
    Relation rel = Relation::LessEq;
    Rational rhs;
  };

  Sense sense = Sense::Minimize;
  std::vector<std::pair<int, Rational>> objective;
  std::vector<std::string> var_names;
  std::vector<std::optional<Rational>> lower;
  std::vector<std::optional<Rational>> upper;
  std::vector<Constraint> constraints;

  int add_variable(std::string name, std::optional<Rational> lo = std::nullopt,
                   std::optional<Rational> hi = std::nullopt);
  int add_constraint(std::vector<std::pair<int, Rational>> coeffs, Relation rel, Rational rhs);
};

struct LPResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  std::vector<Rational> assignment;  // one value per variable when Optimal
  Rational objective_value;
};

// Two-phase primal simplex with Bland's rule over exact rationals. Every
// Optimal result is re-verified constraint by constraint before it is
// returned; a verification failure is a solver bug and throws.
LPResult solve_lp(const LinearProgram& lp);

struct SlackResult {
  LPResult::Status status = LPResult::Status::Infeasible;
  Rational max_slack;                // largest t; meaningful unless Infeasible
  std::vector<Rational> assignment;  // original variables at the max-slack point
};

// Feasibility margin of a system with strict inequalities: each constraint
// listed in `strict` (must be GreaterEq) is replaced by lhs >= rhs + t and t
// is maximized subject to t <= 1. The strict system is satisfiable iff the
// result is Optimal with max_slack > 0. A base system that is infeasible
// even with t = 0 reports Infeasible.
SlackResult solve_max_slack(const LinearProgram& lp, const std::vector<int>& strict);

}  // namespace sgs
