#include "fdip/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>

#include "fdip/errors.hpp"
#include "fdip/lp.hpp"
#include "fdip/paths.hpp"

namespace fdip {

namespace {

constexpr double kIntegralTol = 1e-7;
constexpr double kBoundEps = 1e-9;

std::vector<std::vector<int>> candidates_by_demand(const std::vector<Candidate>& candidates,
                                                   std::size_t demand_count) {
  std::vector<std::vector<int>> by_demand(demand_count);
  for (std::size_t i = 0; i < candidates.size(); ++i)
    by_demand[static_cast<std::size_t>(candidates[i].demand)].push_back(static_cast<int>(i));
  return by_demand;
}

int fixed_one_count(const FixMask& mask) {
  int n = 0;
  for (std::int8_t f : mask) n += (f == kFixedOne);
  return n;
}

/// Integral objective that a fractional bound can still reach.
int bound_floor(double bound) {
  return static_cast<int>(std::floor(bound + kBoundEps));
}

Assignment assignment_from_chosen(std::vector<int> chosen) {
  Assignment a;
  a.objective = static_cast<int>(
      std::count_if(chosen.begin(), chosen.end(), [](int c) { return c >= 0; }));
  a.chosen = std::move(chosen);
  return a;
}

} // namespace

std::vector<Candidate> build_candidates(const GroupLadder& ladder, const Network& net,
                                        const std::vector<Demand>& demands,
                                        const PlannerConfig& config) {
  std::vector<Candidate> out;
  for (std::size_t di = 0; di < demands.size(); ++di) {
    const Demand& d = demands[di];
    const auto paths =
        enumerate_paths(net, d.src, d.dst, config.hop_limit, config.paths_per_demand);
    for (const Path& path : paths) {
      for (int m = 1; m <= ladder.group_count(); ++m) {
        PathSchedule schedule =
            trace_schedule(ladder, net, d, static_cast<int>(di), path, m);
        if (!check_qos(schedule, d).feasible) continue;

        std::vector<CellKey> hop_cells;
        bool serializable = true;
        for (int hop = 0; hop < path.hops(); ++hop) {
          const LinkIndex e =
              net.link_index(path.nodes[static_cast<std::size_t>(hop)],
                             path.nodes[static_cast<std::size_t>(hop) + 1]);
          if (d.payload_bits > cell_budget_bits(ladder, net, e, m)) {
            serializable = false;
            break;
          }
          hop_cells.push_back(
              CellKey{e, m, schedule.tx_cycles[static_cast<std::size_t>(hop)]});
        }
        if (!serializable) continue;

        Candidate cand;
        cand.demand = static_cast<int>(di);
        cand.path = path;
        cand.group = m;
        cand.footprint = demand_footprint(ladder, net, schedule, d);
        cand.schedule = std::move(schedule);
        cand.hop_cells = std::move(hop_cells);
        CapacityLedger scratch(ladder, net);
        cand.cascade = scratch.cascade_of(cand.footprint);
        out.push_back(std::move(cand));
      }
    }
  }
  return out;
}

Relaxation solve_relaxation(const std::vector<Candidate>& candidates,
                            const FixMask& mask, const GroupLadder& ladder,
                            const Network& net,
                            const std::vector<Demand>& demands) {
  Relaxation rel;
  rel.value.assign(candidates.size(), 0.0);

  std::vector<int> var_of(candidates.size(), -1);
  int num_vars = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (mask[i] == kFree) var_of[i] = num_vars++;
    if (mask[i] == kFixedOne) rel.value[i] = 1.0;
  }

  LpProblem lp;
  lp.num_vars = num_vars;
  lp.objective.assign(static_cast<std::size_t>(num_vars), 1.0);

  // Per-demand at-most-one rows; these also give the implicit a <= 1 bounds.
  const auto by_demand = candidates_by_demand(candidates, demands.size());
  for (const auto& group : by_demand) {
    int ones = 0;
    std::vector<std::pair<int, double>> terms;
    for (int ci : group) {
      if (mask[static_cast<std::size_t>(ci)] == kFixedOne) ++ones;
      if (mask[static_cast<std::size_t>(ci)] == kFree)
        terms.emplace_back(var_of[static_cast<std::size_t>(ci)], 1.0);
    }
    if (ones > 1) return rel; // demand fixed to two candidates
    if (!terms.empty()) lp.rows.push_back(LpRow{std::move(terms), 1.0 - ones});
  }

  // Capacity rows over touched cells, normalized by the cell budget.
  std::map<CellKey, std::int64_t> fixed_load;
  std::map<CellKey, std::vector<std::pair<int, std::int64_t>>> cell_terms;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (mask[i] == kFixedZero) continue;
    for (const auto& [cell, bits] : candidates[i].cascade) {
      if (mask[i] == kFixedOne)
        fixed_load[cell] += bits;
      else
        cell_terms[cell].emplace_back(var_of[i], bits);
    }
  }
  for (const auto& [cell, load] : fixed_load)
    if (load > cell_budget_bits(ladder, net, cell.link, cell.group))
      return rel; // fixings alone exceed a budget
  for (const auto& [cell, terms] : cell_terms) {
    const double budget =
        static_cast<double>(cell_budget_bits(ladder, net, cell.link, cell.group));
    auto it = fixed_load.find(cell);
    const double remaining =
        budget - static_cast<double>(it == fixed_load.end() ? 0 : it->second);
    LpRow row;
    row.rhs = remaining / budget;
    row.terms.reserve(terms.size());
    for (const auto& [var, bits] : terms)
      row.terms.emplace_back(var, static_cast<double>(bits) / budget);
    lp.rows.push_back(std::move(row));
  }

  const LpSolution sol = solve_lp_max(lp);
  if (sol.status == LpStatus::unbounded)
    throw std::logic_error("relaxation: unbounded LP; demand rows missing");
  if (sol.status == LpStatus::iteration_limit)
    throw limit_error("relaxation: simplex iteration cap exceeded");

  rel.feasible = true;
  rel.bound = sol.objective + fixed_one_count(mask);
  rel.integral = true;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (mask[i] != kFree) continue;
    const double v = sol.x[static_cast<std::size_t>(var_of[i])];
    rel.value[i] = v;
    if (v > kIntegralTol && v < 1.0 - kIntegralTol) rel.integral = false;
  }
  return rel;
}

double priority(const Candidate& candidate, const CapacityLedger& ledger,
                double xi1, double xi2, double xi3, double demand_value) {
  double room = 0.0;
  for (const CellKey& cell : candidate.hop_cells)
    room += std::pow(ledger.headroom(cell.link, cell.group, cell.cycle), xi3);
  return xi1 * demand_value + xi2 * room;
}

namespace {

/// Candidate to branch on: maximum priority among free candidates of
/// unassigned demands; ties fall to the lowest candidate index.
int select_branch_candidate(const std::vector<Candidate>& candidates,
                            const FixMask& mask, const CapacityLedger& ledger,
                            const std::vector<Demand>& demands,
                            const PlannerConfig& config) {
  std::vector<char> demand_taken(demands.size(), 0);
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (mask[i] == kFixedOne)
      demand_taken[static_cast<std::size_t>(candidates[i].demand)] = 1;

  int best = -1;
  double best_priority = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (mask[i] != kFree) continue;
    if (demand_taken[static_cast<std::size_t>(candidates[i].demand)]) continue;
    const double p =
        priority(candidates[i], ledger, config.xi1, config.xi2, config.xi3,
                 demands[static_cast<std::size_t>(candidates[i].demand)].value);
    if (best < 0 || p > best_priority) {
      best = static_cast<int>(i);
      best_priority = p;
    }
  }
  return best;
}

std::vector<int> chosen_from_relaxation(const std::vector<Candidate>& candidates,
                                        const Relaxation& rel,
                                        std::size_t demand_count) {
  std::vector<int> chosen(demand_count, -1);
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (rel.value[i] > 0.5)
      chosen[static_cast<std::size_t>(candidates[i].demand)] = static_cast<int>(i);
  return chosen;
}

struct OpenNode {
  double bound = 0.0;
  std::int64_t seq = 0;
  FixMask mask;
};

} // namespace

Assignment branch_and_bound(const std::vector<Candidate>& candidates,
                            const GroupLadder& ladder, const Network& net,
                            const std::vector<Demand>& demands,
                            const PlannerConfig& config, const NodeHook& hook) {
  const auto start_time = std::chrono::steady_clock::now();
  const auto deadline_hit = [&]() {
    if (config.time_budget_ms <= 0) return false;
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start_time)
                             .count();
    return elapsed >= config.time_budget_ms;
  };

  SearchStats stats;

  // Greedy seeds the incumbent; pruning starts sharp.
  Assignment best = greedy_baseline(candidates, ladder, net, demands, config);
  int incumbent = best.objective;

  const auto better = [&](const OpenNode& a, const OpenNode& b) {
    // max-heap by bound (or min-heap in worst-first mode); FIFO on ties
    if (a.bound != b.bound)
      return config.worst_first ? a.bound > b.bound : a.bound < b.bound;
    return a.seq > b.seq;
  };
  std::priority_queue<OpenNode, std::vector<OpenNode>, decltype(better)> open(better);
  std::int64_t next_seq = 0;

  if (!candidates.empty()) {
    FixMask root(candidates.size(), kFree);
    Relaxation rel = solve_relaxation(candidates, root, ladder, net, demands);
    ++stats.lp_solves;
    if (rel.feasible) {
      if (rel.integral) {
        const auto chosen = chosen_from_relaxation(candidates, rel, demands.size());
        Assignment integral = assignment_from_chosen(chosen);
        if (integral.objective > incumbent) {
          incumbent = integral.objective;
          best = std::move(integral);
          ++stats.incumbent_updates;
        }
      } else if (bound_floor(rel.bound) > incumbent) {
        open.push(OpenNode{rel.bound, next_seq++, std::move(root)});
      }
    }
  }

  while (!open.empty()) {
    if ((config.max_nodes > 0 && stats.nodes_explored >= config.max_nodes) ||
        deadline_hit()) {
      stats.exhausted = false;
      break;
    }
    OpenNode node = open.top();
    open.pop();
    if (bound_floor(node.bound) <= incumbent) {
      ++stats.nodes_pruned; // incumbent improved since the node was queued
      continue;
    }
    ++stats.nodes_explored;
    if (hook) hook(node.mask, node.bound);

    // Ledger of the node's accepted set drives the branching priority.
    CapacityLedger ledger(ladder, net);
    for (std::size_t i = 0; i < candidates.size(); ++i)
      if (node.mask[i] == kFixedOne) ledger.commit(candidates[i].footprint);

    const int branch =
        select_branch_candidate(candidates, node.mask, ledger, demands, config);
    if (branch < 0) {
      // Every remaining free candidate belongs to an assigned demand; the
      // node is integrally determined by its ones.
      std::vector<int> chosen(demands.size(), -1);
      for (std::size_t i = 0; i < candidates.size(); ++i)
        if (node.mask[i] == kFixedOne)
          chosen[static_cast<std::size_t>(candidates[i].demand)] = static_cast<int>(i);
      Assignment leaf = assignment_from_chosen(std::move(chosen));
      if (leaf.objective > incumbent) {
        incumbent = leaf.objective;
        best = std::move(leaf);
        ++stats.incumbent_updates;
      }
      continue;
    }

    for (std::int8_t fix : {kFixedZero, kFixedOne}) {
      FixMask child = node.mask;
      child[static_cast<std::size_t>(branch)] = fix;
      Relaxation rel = solve_relaxation(candidates, child, ladder, net, demands);
      ++stats.lp_solves;
      if (!rel.feasible) {
        ++stats.nodes_pruned;
        continue;
      }
      if (rel.integral) {
        const auto chosen = chosen_from_relaxation(candidates, rel, demands.size());
        Assignment integral = assignment_from_chosen(chosen);
        if (integral.objective > incumbent) {
          incumbent = integral.objective;
          best = std::move(integral);
          ++stats.incumbent_updates;
        }
        continue;
      }
      if (bound_floor(rel.bound) > incumbent)
        open.push(OpenNode{rel.bound, next_seq++, std::move(child)});
      else
        ++stats.nodes_pruned;
    }
  }

  if (!stats.exhausted && !open.empty()) {
    double best_open = open.top().bound; // already the max in best-first mode
    if (config.worst_first)
      while (!open.empty()) {
        best_open = std::max(best_open, open.top().bound);
        open.pop();
      }
    stats.gap = std::max(0.0, static_cast<double>(bound_floor(best_open)) -
                                  static_cast<double>(incumbent));
  }

  best.stats = stats;
  validate_assignment(best, candidates, ladder, net, demands);
  return best;
}

Assignment greedy_baseline(const std::vector<Candidate>& candidates,
                           const GroupLadder& ladder, const Network& net,
                           const std::vector<Demand>& demands,
                           const PlannerConfig& config) {
  CapacityLedger empty_ledger(ladder, net);
  std::vector<std::pair<double, int>> order;
  order.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    order.emplace_back(
        priority(candidates[i], empty_ledger, config.xi1, config.xi2, config.xi3,
                 demands[static_cast<std::size_t>(candidates[i].demand)].value),
        static_cast<int>(i));
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second; // deterministic tie-break by candidate order
  });

  CapacityLedger ledger(ladder, net);
  std::vector<int> chosen(demands.size(), -1);
  for (const auto& [prio, ci] : order) {
    const Candidate& cand = candidates[static_cast<std::size_t>(ci)];
    if (chosen[static_cast<std::size_t>(cand.demand)] >= 0) continue;
    if (!ledger.fits(cand.footprint)) continue;
    ledger.commit(cand.footprint);
    chosen[static_cast<std::size_t>(cand.demand)] = ci;
  }
  Assignment a = assignment_from_chosen(std::move(chosen));
  validate_assignment(a, candidates, ladder, net, demands);
  return a;
}

namespace {

struct OracleState {
  const std::vector<Candidate>* candidates;
  const std::vector<std::vector<int>>* by_demand;
  const FixMask* mask; // may be null (unrestricted)
  CapacityLedger* ledger;
  std::vector<int> chosen;
  std::vector<int> best_chosen;
  int best = -1;
};

void oracle_search(OracleState& st, std::size_t demand_index, int accepted) {
  const auto& by_demand = *st.by_demand;
  if (demand_index == by_demand.size()) {
    if (accepted > st.best) {
      st.best = accepted;
      st.best_chosen = st.chosen;
    }
    return;
  }
  // Upper bound: everything remaining accepted.
  const int remaining = static_cast<int>(by_demand.size() - demand_index);
  if (accepted + remaining <= st.best) return;

  const auto try_candidate = [&](int ci) {
    const Candidate& cand = (*st.candidates)[static_cast<std::size_t>(ci)];
    if (!st.ledger->fits(cand.footprint)) return;
    st.ledger->commit(cand.footprint);
    st.chosen[demand_index] = ci;
    oracle_search(st, demand_index + 1, accepted + 1);
    st.ledger->rollback(cand.footprint);
    st.chosen[demand_index] = -1;
  };

  if (st.mask) {
    // A fixed-one candidate is the demand's only admissible choice.
    for (int ci : by_demand[demand_index])
      if ((*st.mask)[static_cast<std::size_t>(ci)] == kFixedOne) {
        try_candidate(ci);
        return;
      }
  }
  for (int ci : by_demand[demand_index]) {
    if (st.mask && (*st.mask)[static_cast<std::size_t>(ci)] == kFixedZero) continue;
    try_candidate(ci);
  }
  oracle_search(st, demand_index + 1, accepted); // reject this demand
}

int oracle_run(const std::vector<Candidate>& candidates, const FixMask* mask,
               const GroupLadder& ladder, const Network& net,
               const std::vector<Demand>& demands, std::vector<int>* chosen_out) {
  const auto by_demand = candidates_by_demand(candidates, demands.size());
  CapacityLedger ledger(ladder, net);
  OracleState st;
  st.candidates = &candidates;
  st.by_demand = &by_demand;
  st.mask = mask;
  st.ledger = &ledger;
  st.chosen.assign(demands.size(), -1);
  st.best = -1;
  oracle_search(st, 0, 0);
  if (chosen_out) *chosen_out = st.best_chosen;
  return st.best;
}

} // namespace

Assignment brute_force_oracle(const std::vector<Candidate>& candidates,
                              const GroupLadder& ladder, const Network& net,
                              const std::vector<Demand>& demands,
                              const PlannerConfig& config) {
  if (static_cast<int>(candidates.size()) > config.oracle_cap)
    throw limit_error("oracle: " + std::to_string(candidates.size()) +
                      " candidates exceed the cap of " +
                      std::to_string(config.oracle_cap));
  std::vector<int> chosen;
  oracle_run(candidates, nullptr, ladder, net, demands, &chosen);
  if (chosen.empty()) chosen.assign(demands.size(), -1);
  Assignment a = assignment_from_chosen(std::move(chosen));
  validate_assignment(a, candidates, ladder, net, demands);
  return a;
}

int restricted_oracle_objective(const std::vector<Candidate>& candidates,
                                const FixMask& mask, const GroupLadder& ladder,
                                const Network& net,
                                const std::vector<Demand>& demands) {
  // A demand fixed to two candidates can never be completed.
  std::vector<int> ones(demands.size(), 0);
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (mask[i] == kFixedOne)
      ++ones[static_cast<std::size_t>(candidates[i].demand)];
  for (int n : ones)
    if (n > 1) return -1;
  return oracle_run(candidates, &mask, ladder, net, demands, nullptr);
}

void validate_assignment(const Assignment& assignment,
                         const std::vector<Candidate>& candidates,
                         const GroupLadder& ladder, const Network& net,
                         const std::vector<Demand>& demands) {
  CapacityLedger ledger(ladder, net);
  int accepted = 0;
  for (std::size_t d = 0; d < assignment.chosen.size(); ++d) {
    const int ci = assignment.chosen[d];
    if (ci < 0) continue;
    ++accepted;
    const Candidate& cand = candidates.at(static_cast<std::size_t>(ci));
    if (cand.demand != static_cast<int>(d))
      throw std::logic_error("assignment: candidate/demand mismatch");
    if (!check_qos(cand.schedule, demands[d]).feasible)
      throw std::logic_error("assignment: accepted schedule fails QoS");
    ledger.commit(cand.footprint);
  }
  if (accepted != assignment.objective)
    throw std::logic_error("assignment: objective does not match accepted count");
  if (!ledger.check_capacity().empty())
    throw std::logic_error("assignment: committed footprints violate capacity");
}

} // namespace fdip
