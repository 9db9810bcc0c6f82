#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "fdip/forwarding.hpp"
#include "fdip/ladder.hpp"
#include "fdip/network.hpp"

namespace fdip {

/// One reservable unit of link time: group-m cycle `cycle` on link `link`.
struct CellKey {
  LinkIndex link = -1;
  int group = 0;
  std::int64_t cycle = 0;
  auto operator<=>(const CellKey&) const = default;
};

using CellLoad = std::vector<std::pair<CellKey, std::int64_t>>; // bits per cell

/// The exact (link, group, cycle) -> bits reservation a candidate consumes
/// per hypercycle, covering every period repetition.
struct Footprint {
  int demand = -1;
  CellLoad entries; // raw entries, merged and sorted
};

struct CapacityViolation {
  CellKey cell;
  std::int64_t load_bits = 0;
  std::int64_t budget_bits = 0;
  std::int64_t excess_bits() const { return load_bits - budget_bits; }
};

/// Builds the demand's reservation along the scheduled path: one entry of
/// omega bits at (link, m, transmit cycle) per hop and per period repetition
/// within the hypercycle.
Footprint demand_footprint(const GroupLadder& ladder, const Network& net,
                           const PathSchedule& schedule, const Demand& demand);

/// Bits transmittable in one group-m cycle on `link`: floor of
/// bandwidth * delta_m. The single-demand case of the capacity constraint
/// (omega <= budget) is the serialization filter.
std::int64_t cell_budget_bits(const GroupLadder& ladder, const Network& net,
                              LinkIndex link, int m);

/// Tracks committed bits per cell, both raw (direct traffic) and cascaded
/// (with faster groups charged against every slower group's budget, per the
/// strict-priority transmission selection). Owned by one search context at a
/// time; branch-and-bound workers clone rather than share.
class CapacityLedger {
public:
  CapacityLedger(const GroupLadder& ladder, const Network& net)
      : ladder_(&ladder), net_(&net) {}

  /// Cells of the cascaded image of a footprint: every raw entry pushed
  /// forward through groups m^d..M, merged.
  CellLoad cascade_of(const Footprint& fp) const;

  void commit(const Footprint& fp);   // throws on double-commit of a demand
  void rollback(const Footprint& fp); // exact inverse; throws if not committed

  bool committed(int demand) const { return committed_.count(demand) != 0; }

  std::int64_t raw(const CellKey& cell) const;
  std::int64_t cascaded(const CellKey& cell) const;

  /// Would committing `fp` keep every touched cell within budget?
  bool fits(const Footprint& fp) const;

  /// max(0, 1 - cascaded / (BW * delta_m)) for one cell.
  double headroom(LinkIndex link, int m, std::int64_t cycle) const;

  /// All cells whose cascaded load exceeds the budget, ordered by cell key.
  std::vector<CapacityViolation> check_capacity() const;

  const std::map<CellKey, std::int64_t>& raw_cells() const { return raw_; }
  const std::map<CellKey, std::int64_t>& cascaded_cells() const { return cascaded_; }

private:
  const GroupLadder* ladder_;
  const Network* net_;
  std::map<CellKey, std::int64_t> raw_;
  std::map<CellKey, std::int64_t> cascaded_;
  std::set<int> committed_;
};

} // namespace fdip
