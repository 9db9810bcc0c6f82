#include "fdip/capacity.hpp"

#include <algorithm>
#include <string>

#include "fdip/errors.hpp"

namespace fdip {

namespace {

void merge_cells(CellLoad& cells) {
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  CellLoad merged;
  for (const auto& [cell, bits] : cells) {
    if (!merged.empty() && merged.back().first == cell)
      merged.back().second += bits;
    else
      merged.emplace_back(cell, bits);
  }
  cells = std::move(merged);
}

} // namespace

Footprint demand_footprint(const GroupLadder& ladder, const Network& net,
                           const PathSchedule& schedule, const Demand& demand) {
  Footprint fp;
  fp.demand = schedule.demand;
  const std::int64_t unitary_cycles = ladder.cycles_per_hypercycle(0);
  const std::int64_t repetitions = ladder.hypercycle() / demand.period;
  const std::int64_t stride = demand.period / ladder.delta0();
  for (std::int64_t rep = 0; rep < repetitions; ++rep) {
    const std::int64_t arrival =
        mod_floor(demand.arrival_cycle + rep * stride, unitary_cycles);
    const PathSchedule rep_schedule =
        rep == 0 ? schedule
                 : trace_schedule_at(ladder, net, schedule.path, schedule.group, arrival);
    for (int hop = 0; hop < schedule.path.hops(); ++hop) {
      const LinkIndex e =
          net.link_index(rep_schedule.path.nodes[static_cast<std::size_t>(hop)],
                         rep_schedule.path.nodes[static_cast<std::size_t>(hop) + 1]);
      fp.entries.emplace_back(
          CellKey{e, rep_schedule.group,
                  rep_schedule.tx_cycles[static_cast<std::size_t>(hop)]},
          demand.payload_bits);
    }
  }
  merge_cells(fp.entries);
  return fp;
}

std::int64_t cell_budget_bits(const GroupLadder& ladder, const Network& net,
                              LinkIndex link, int m) {
  const auto bw = static_cast<__int128>(net.link(link).bandwidth_bps);
  const auto window_ns =
      static_cast<__int128>(ladder.cycle_length(m)) * ladder.tick_ns();
  return static_cast<std::int64_t>(bw * window_ns / 1000000000);
}

CellLoad CapacityLedger::cascade_of(const Footprint& fp) const {
  CellLoad cells;
  const int groups = ladder_->group_count();
  for (const auto& [cell, bits] : fp.entries) {
    cells.emplace_back(cell, bits);
    for (int m = cell.group + 1; m <= groups; ++m)
      cells.emplace_back(CellKey{cell.link, m, ladder_->align(cell.group, m, cell.cycle)},
                         bits);
  }
  merge_cells(cells);
  return cells;
}

void CapacityLedger::commit(const Footprint& fp) {
  if (!committed_.insert(fp.demand).second)
    throw validation_error("ledger: demand " + std::to_string(fp.demand) +
                           " is already committed");
  for (const auto& [cell, bits] : fp.entries) raw_[cell] += bits;
  for (const auto& [cell, bits] : cascade_of(fp)) cascaded_[cell] += bits;
}

void CapacityLedger::rollback(const Footprint& fp) {
  if (committed_.erase(fp.demand) == 0)
    throw validation_error("ledger: rollback of demand " + std::to_string(fp.demand) +
                           " which was never committed");
  for (const auto& [cell, bits] : fp.entries) {
    auto it = raw_.find(cell);
    it->second -= bits;
    if (it->second == 0) raw_.erase(it);
  }
  for (const auto& [cell, bits] : cascade_of(fp)) {
    auto it = cascaded_.find(cell);
    it->second -= bits;
    if (it->second == 0) cascaded_.erase(it);
  }
}

std::int64_t CapacityLedger::raw(const CellKey& cell) const {
  auto it = raw_.find(cell);
  return it == raw_.end() ? 0 : it->second;
}

std::int64_t CapacityLedger::cascaded(const CellKey& cell) const {
  auto it = cascaded_.find(cell);
  return it == cascaded_.end() ? 0 : it->second;
}

bool CapacityLedger::fits(const Footprint& fp) const {
  for (const auto& [cell, bits] : cascade_of(fp))
    if (cascaded(cell) + bits > cell_budget_bits(*ladder_, *net_, cell.link, cell.group))
      return false;
  return true;
}

double CapacityLedger::headroom(LinkIndex link, int m, std::int64_t cycle) const {
  const double window_bits =
      static_cast<double>(static_cast<__int128>(net_->link(link).bandwidth_bps) *
                          ladder_->cycle_length(m) * ladder_->tick_ns()) /
      1e9;
  const double load = static_cast<double>(cascaded(CellKey{link, m, cycle}));
  return std::max(0.0, 1.0 - load / window_bits);
}

std::vector<CapacityViolation> CapacityLedger::check_capacity() const {
  std::vector<CapacityViolation> violations;
  for (const auto& [cell, bits] : cascaded_) {
    const std::int64_t budget = cell_budget_bits(*ladder_, *net_, cell.link, cell.group);
    if (bits > budget) violations.push_back(CapacityViolation{cell, bits, budget});
  }
  return violations;
}

} // namespace fdip
