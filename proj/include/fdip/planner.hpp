#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fdip/capacity.hpp"
#include "fdip/forwarding.hpp"
#include "fdip/ladder.hpp"
#include "fdip/network.hpp"

namespace fdip {

enum class PlanMode { bnb, greedy, oracle };

struct PlannerConfig {
  PlanMode mode = PlanMode::bnb;
  int hop_limit = 4;          // H
  int paths_per_demand = 16;  // truncation of the path universe
  double xi1 = 1.0, xi2 = 1.0, xi3 = 1.0; // branching-priority weights
  std::int64_t max_nodes = 0;      // 0 = run to exhaustion
  std::int64_t time_budget_ms = 0; // 0 = none; wall-clock budgets trade
                                   // determinism of the node count for safety
  bool worst_first = false;        // expand smallest bound first (diagnostic)
  int oracle_cap = 22;             // max |candidates| the oracle accepts
};

/// One admissible way to carry a demand: path p with cycle group m, its
/// worst-case schedule and the exact cells it would reserve.
struct Candidate {
  int demand = -1;
  Path path;
  int group = 0;
  PathSchedule schedule;
  Footprint footprint;
  CellLoad cascade; // footprint pushed through slower groups, for LP rows
  std::vector<CellKey> hop_cells; // (link, m, tx cycle) per hop, base repetition
};

/// Candidate fixing state inside a search node.
enum : std::int8_t { kFree = 0, kFixedOne = 1, kFixedZero = 2 };
using FixMask = std::vector<std::int8_t>;

struct SearchStats {
  std::int64_t nodes_explored = 0;
  std::int64_t nodes_pruned = 0;
  std::int64_t lp_solves = 0;
  std::int64_t incumbent_updates = 0;
  bool exhausted = true;
  double gap = 0.0; // best open bound minus incumbent at stop (0 if exhausted)
};

struct Assignment {
  std::vector<int> chosen; // per demand: candidate index, or -1 if rejected
  int objective = 0;
  SearchStats stats;
};

/// Cross product of hop-bounded paths and groups, filtered by the QoS checks
/// and by per-flow serialization (omega <= budget on every path link).
/// Deterministic order: demand input order, then path enumeration order, then
/// group ascending.
std::vector<Candidate> build_candidates(const GroupLadder& ladder, const Network& net,
                                        const std::vector<Demand>& demands,
                                        const PlannerConfig& config);

struct Relaxation {
  bool feasible = false;
  double bound = 0.0;          // -inf encoded by feasible == false
  std::vector<double> value;   // per candidate, fixed values included
  bool integral = false;
};

/// Continuous relaxation under the node's fixings: maximize total acceptance
/// with per-demand at-most-one rows and per-cell capacity rows (the cascade is
/// linear in the candidate variables). The demand rows make explicit a <= 1
/// bounds redundant.
Relaxation solve_relaxation(const std::vector<Candidate>& candidates,
                            const FixMask& mask, const GroupLadder& ladder,
                            const Network& net,
                            const std::vector<Demand>& demands);

/// Branching priority: xi1 * v_d + xi2 * sum over path links of
/// headroom(link, m, own transmit cycle)^xi3, against the given ledger.
double priority(const Candidate& candidate, const CapacityLedger& ledger,
                double xi1, double xi2, double xi3, double demand_value);

/// Observer invoked once per explored node, with its fixings and LP bound.
using NodeHook =
    std::function<void(const FixMask& mask, double bound)>;

/// Best-first branch-and-bound over the candidate fixings, bounded by the LP
/// relaxation and seeded with the greedy incumbent. Run to exhaustion it is
/// exact; under node/time budgets it returns the incumbent plus a gap.
Assignment branch_and_bound(const std::vector<Candidate>& candidates,
                            const GroupLadder& ladder, const Network& net,
                            const std::vector<Demand>& demands,
                            const PlannerConfig& config,
                            const NodeHook& hook = nullptr);

/// Sorts candidates by priority on the empty ledger and admits greedily.
Assignment greedy_baseline(const std::vector<Candidate>& candidates,
                           const GroupLadder& ladder, const Network& net,
                           const std::vector<Demand>& demands,
                           const PlannerConfig& config);

/// Exhaustive ground truth for small instances (throws limit_error beyond
/// config.oracle_cap candidates).
Assignment brute_force_oracle(const std::vector<Candidate>& candidates,
                              const GroupLadder& ladder, const Network& net,
                              const std::vector<Demand>& demands,
                              const PlannerConfig& config);

/// Oracle optimum restricted to a node's fixings; -1 when the fixings are
/// infeasible. Used to audit bound validity.
int restricted_oracle_objective(const std::vector<Candidate>& candidates,
                                const FixMask& mask, const GroupLadder& ladder,
                                const Network& net,
                                const std::vector<Demand>& demands);

/// Re-commits an assignment from scratch and checks capacity and QoS;
/// throws std::logic_error on any violation. Planner outputs are validated,
/// never assumed.
void validate_assignment(const Assignment& assignment,
                         const std::vector<Candidate>& candidates,
                         const GroupLadder& ladder, const Network& net,
                         const std::vector<Demand>& demands);

} // namespace fdip
