#include "fdip/forwarding.hpp"

#include <string>

#include "fdip/errors.hpp"

namespace fdip {

namespace {

// Shared floor term of the cycle mapping and the hop delay:
// floor(((a+1)*delta_m + tau - tau_hc) / delta_m), exact on the tick grid.
std::int64_t mapping_floor(const GroupLadder& ladder, const Network& net,
                           LinkIndex link, int m, std::int64_t a) {
  const Ticks delta = ladder.cycle_length(m);
  const Ticks tau = net.link(link).delay;
  const Ticks tau_hc = net.hypercycle_offset(link);
  return floor_div((a + 1) * delta + tau - tau_hc, delta);
}

void check_cycle_index(const GroupLadder& ladder, int m, std::int64_t a) {
  if (a < 0 || a >= ladder.cycles_per_hypercycle(m))
    throw validation_error("cycle index " + std::to_string(a) +
                           " out of range for group " + std::to_string(m));
}

} // namespace

std::int64_t cycle_map(const GroupLadder& ladder, const Network& net, LinkIndex link,
                       int m, std::int64_t a) {
  check_cycle_index(ladder, m, a);
  return mod_floor(mapping_floor(ladder, net, link, m, a),
                   ladder.cycles_per_hypercycle(m));
}

Ticks hop_delay(const GroupLadder& ladder, const Network& net, LinkIndex link,
                int m, std::int64_t a) {
  check_cycle_index(ladder, m, a);
  const Ticks delta = ladder.cycle_length(m);
  return mapping_floor(ladder, net, link, m, a) * delta +
         net.hypercycle_offset(link) - a * delta;
}

PathSchedule trace_schedule_at(const GroupLadder& ladder, const Network& net,
                               const Path& path, int m, std::int64_t arrival_cycle) {
  if (m < 1 || m > ladder.group_count())
    throw validation_error("trace_schedule: group index " + std::to_string(m) +
                           " out of [1, " + std::to_string(ladder.group_count()) + "]");
  if (path.hops() < 1)
    throw validation_error("trace_schedule: path needs at least one hop");
  check_cycle_index(ladder, 0, arrival_cycle);

  const std::int64_t cycles = ladder.cycles_per_hypercycle(m);
  const Ticks delta = ladder.cycle_length(m);
  const int hops = path.hops();

  PathSchedule s;
  s.path = path;
  s.group = m;
  s.jitter_bound = 2 * delta;
  s.tx_cycles.reserve(static_cast<std::size_t>(hops));
  s.acc_delays.reserve(static_cast<std::size_t>(hops) + 1);

  // First transmit window at the source: the group-m cycle following the one
  // that overlaps the unitary arrival cycle, wrapped into the hypercycle.
  s.tx_cycles.push_back(mod_floor(ladder.align(0, m, arrival_cycle) + 1, cycles));
  s.acc_delays.push_back(delta); // Delta_0 = delta_m

  for (int i = 1; i <= hops; ++i) {
    const LinkIndex e = net.link_index(path.nodes[static_cast<std::size_t>(i - 1)],
                                       path.nodes[static_cast<std::size_t>(i)]);
    const std::int64_t prev = s.tx_cycles.back();
    s.acc_delays.push_back(s.acc_delays.back() + delta +
                           hop_delay(ladder, net, e, m, prev));
    if (i < hops)
      s.tx_cycles.push_back(mod_floor(cycle_map(ladder, net, e, m, prev) + 1, cycles));
  }
  s.e2e_bound = s.acc_delays.back();
  return s;
}

PathSchedule trace_schedule(const GroupLadder& ladder, const Network& net,
                            const Demand& demand, int demand_index, const Path& path,
                            int m) {
  PathSchedule s = trace_schedule_at(ladder, net, path, m, demand.arrival_cycle);
  s.demand = demand_index;
  return s;
}

QosVerdict check_qos(const PathSchedule& schedule, const Demand& demand) {
  QosVerdict v;
  v.latency_ok = schedule.e2e_bound <= demand.max_latency;
  v.latency_slack = demand.max_latency - schedule.e2e_bound;
  if (demand.max_jitter) {
    v.jitter_ok = schedule.jitter_bound <= *demand.max_jitter;
    v.jitter_slack = *demand.max_jitter - schedule.jitter_bound;
  } else {
    v.jitter_ok = true;
  }
  v.feasible = v.latency_ok && v.jitter_ok;
  return v;
}

} // namespace fdip
