#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fdip/ladder.hpp"
#include "fdip/network.hpp"

namespace fdip {

/// Transmit-cycle plan and worst-case delay envelope for one
/// (demand, path, group) choice, for the demand's base repetition.
struct PathSchedule {
  int demand = -1;               // index into the demand set
  Path path;
  int group = 0;                 // m^d in [1, M]
  std::vector<std::int64_t> tx_cycles; // c_0 .. c_{|p|-1}, per transmitting node
  std::vector<Ticks> acc_delays;       // Delta_0 .. Delta_{|p|}
  Ticks e2e_bound = 0;                 // Delta_{|p|}
  Ticks jitter_bound = 0;              // exactly 2 * delta_{m}
};

struct QosVerdict {
  bool feasible = false;
  bool latency_ok = false;
  bool jitter_ok = false;
  Ticks latency_slack = 0;                // Gamma - e2e_bound
  std::optional<Ticks> jitter_slack;      // Pi - 2*delta_m, when Pi is bounded
};

/// Cycle mapping over a link: packets sent in group-m cycle `a` at the
/// upstream node are re-sent in cycle cycle_map(..)+1 downstream.
std::int64_t cycle_map(const GroupLadder& ladder, const Network& net, LinkIndex link,
                       int m, std::int64_t a);

/// Worst-case duration from the end of cycle `a` upstream to the end of the
/// overlapping downstream cycle; always in (tau, tau + delta_m].
Ticks hop_delay(const GroupLadder& ladder, const Network& net, LinkIndex link,
                int m, std::int64_t a);

/// Runs the transmit-cycle recursion along `path` for a packet entering the
/// unitary grid at `arrival_cycle`, returning per-hop cycles and accumulated
/// worst-case delays.
PathSchedule trace_schedule_at(const GroupLadder& ladder, const Network& net,
                               const Path& path, int m, std::int64_t arrival_cycle);

/// trace_schedule_at for the demand's own arrival cycle, tagged with its index.
PathSchedule trace_schedule(const GroupLadder& ladder, const Network& net,
                            const Demand& demand, int demand_index, const Path& path,
                            int m);

QosVerdict check_qos(const PathSchedule& schedule, const Demand& demand);

} // namespace fdip
