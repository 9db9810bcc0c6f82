#pragma once

#include <cstdint>
#include <vector>

namespace fdip {

/// max c^T x  s.t.  A x <= b,  x >= 0, with b >= 0.
/// Rows are sparse (column, coefficient) lists; the solver densifies.
struct LpRow {
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;
};

struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective; // length num_vars
  std::vector<LpRow> rows;
};

enum class LpStatus { optimal, unbounded, iteration_limit };

struct LpSolution {
  LpStatus status = LpStatus::optimal;
  double objective = 0.0;
  std::vector<double> x; // length num_vars
  long iterations = 0;
  bool used_bland = false;
};

/// Dense-tableau primal simplex. b >= 0 means the all-slack basis is feasible,
/// so no phase-1 is needed. Entering variable by Dantzig rule, switching to
/// Bland's rule permanently once the objective stalls (anti-cycling); solves
/// to optimality, which is what makes the branch-and-bound bound valid.
/// Throws validation_error if some rhs is negative.
LpSolution solve_lp_max(const LpProblem& problem);

} // namespace fdip
