#include "fdip/lp.hpp"

#include <cmath>
#include <cstdlib>

#include "fdip/errors.hpp"
#include "fdip/kernels.hpp"

namespace fdip {

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr long kIterationCap = 500000;

} // namespace

LpSolution solve_lp_max(const LpProblem& problem) {
  const int n = problem.num_vars;
  const int m = static_cast<int>(problem.rows.size());
  const int width = n + m + 1; // structural | slack | rhs
  const int rhs_col = n + m;

  for (const LpRow& row : problem.rows)
    if (row.rhs < 0.0)
      throw validation_error("lp: negative rhs; fixings must be folded out first");

  // Row-major tableau plus the reduced-cost row.
  std::vector<double> tab(static_cast<std::size_t>(m) * width, 0.0);
  std::vector<double> cost(static_cast<std::size_t>(width), 0.0);
  auto row_ptr = [&](int i) { return tab.data() + static_cast<std::size_t>(i) * width; };

  for (int i = 0; i < m; ++i) {
    double* row = row_ptr(i);
    for (const auto& [col, coeff] : problem.rows[static_cast<std::size_t>(i)].terms)
      row[col] += coeff;
    row[n + i] = 1.0;
    row[rhs_col] = problem.rows[static_cast<std::size_t>(i)].rhs;
  }
  for (int j = 0; j < n; ++j) cost[static_cast<std::size_t>(j)] = problem.objective[static_cast<std::size_t>(j)];

  std::vector<int> basis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  LpSolution sol;
  double best_objective = 0.0;
  long stall = 0;
  const long stall_limit = 64 + 2L * (m + n);

  while (true) {
    if (++sol.iterations > kIterationCap)
      return LpSolution{LpStatus::iteration_limit, -cost[static_cast<std::size_t>(rhs_col)],
                        {}, sol.iterations, sol.used_bland};

    // Entering column.
    int enter = -1;
    if (!sol.used_bland) {
      double best = kReducedCostTol;
      for (int j = 0; j < n + m; ++j)
        if (cost[static_cast<std::size_t>(j)] > best) {
          best = cost[static_cast<std::size_t>(j)];
          enter = j;
        }
    } else {
      for (int j = 0; j < n + m; ++j)
        if (cost[static_cast<std::size_t>(j)] > kReducedCostTol) {
          enter = j;
          break;
        }
    }
    if (enter < 0) break; // optimal

    // Ratio test; ties resolved toward the smallest basis label (Bland-safe).
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      const double a = row_ptr(i)[enter];
      if (a <= kPivotTol) continue;
      const double b = std::max(row_ptr(i)[rhs_col], 0.0);
      const double ratio = b / a;
      if (leave < 0 || ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 &&
           basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)]))
      {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0)
      return LpSolution{LpStatus::unbounded, 0.0, {}, sol.iterations, sol.used_bland};

    // Pivot.
    double* pivot_row = row_ptr(leave);
    kern::scale(1.0 / pivot_row[enter], pivot_row, static_cast<std::size_t>(width));
    pivot_row[enter] = 1.0; // exact
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      double* row = row_ptr(i);
      const double f = row[enter];
      if (f == 0.0) continue;
      kern::axpy(-f, pivot_row, row, static_cast<std::size_t>(width));
      row[enter] = 0.0;
    }
    const double fc = cost[static_cast<std::size_t>(enter)];
    if (fc != 0.0) {
      kern::axpy(-fc, pivot_row, cost.data(), static_cast<std::size_t>(width));
      cost[static_cast<std::size_t>(enter)] = 0.0;
    }
    basis[static_cast<std::size_t>(leave)] = enter;

    // Stall detection drives the permanent switch to Bland's rule.
    const double objective = -cost[static_cast<std::size_t>(rhs_col)];
    if (objective > best_objective + 1e-12) {
      best_objective = objective;
      stall = 0;
    } else if (!sol.used_bland && ++stall > stall_limit) {
      sol.used_bland = true;
    }
  }

  sol.status = LpStatus::optimal;
  sol.objective = -cost[static_cast<std::size_t>(rhs_col)];
  sol.x.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[static_cast<std::size_t>(i)] < n)
      sol.x[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] =
          std::max(row_ptr(i)[rhs_col], 0.0);
  return sol;
}

} // namespace fdip
