#include "fdip/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>

#include "fdip/errors.hpp"
#include "fdip/hash.hpp"
#include "fdip/rng.hpp"

namespace fdip {

namespace {

// Event kinds, in tie-break order at equal timestamps.
enum : int { kGate = 0, kArrival = 1, kTxComplete = 2 };

struct Event {
  Ticks t = 0;
  int kind = kGate;
  int flow = -1; // tie-break after kind; -1 for non-packet events
  std::uint64_t seq = 0;
  std::int64_t a = 0; // gate/txcomplete: port; arrival: packet id
  std::int64_t b = 0; // txcomplete: epoch

  bool operator>(const Event& o) const {
    if (t != o.t) return t > o.t;
    if (kind != o.kind) return kind > o.kind;
    if (flow != o.flow) return flow > o.flow;
    return seq > o.seq;
  }
};

struct SimPacket {
  int flow = -1; // planned-flow index; -1 for best-effort
  LinkIndex be_link = -1;
  std::int64_t bits = 0;
  std::int64_t seq = 0;
  int hop = 0;                  // next transmitting position along the path
  std::int64_t abs_cycle = 0;   // designated transmit cycle at the current node
  Ticks release = 0;            // window start at the current node
  Ticks first_release = 0;      // creation epoch for the delay measurement
  Ticks remaining = 0;          // transmit ticks left (suspended packets)
  bool dropped = false;
  std::vector<HopStamp> hops;
};

struct Port {
  LinkIndex link = -1;
  std::vector<std::vector<std::deque<int>>> ts; // [group-1][queue] -> packet ids
  std::deque<int> be;
  std::vector<int> suspended; // back = highest priority among suspended
  bool busy = false;
  int active = -1;
  Ticks complete_at = 0;
  std::uint64_t epoch = 0;
};

class Engine {
public:
  Engine(const GroupLadder& ladder, const Network& net,
         const std::vector<Demand>& demands, const std::vector<PlannedFlow>& plan,
         const TrafficConfig& traffic, int horizon, std::uint64_t seed)
      : ladder_(ladder), net_(net), demands_(demands), plan_(plan),
        traffic_(traffic), horizon_(horizon), seed_(seed) {}

  RunResult execute();

private:
  int prio_of(const SimPacket& p) const {
    return p.flow >= 0 ? plan_[static_cast<std::size_t>(p.flow)].schedule.group
                       : ladder_.group_count() + 1;
  }

  Ticks tx_ticks(LinkIndex link, std::int64_t bits) const {
    // ceil(bits / bandwidth), exact on the tick grid
    const auto num = static_cast<__int128>(bits) * 1000000000;
    const auto den = static_cast<__int128>(net_.link(link).bandwidth_bps) * ladder_.tick_ns();
    return static_cast<Ticks>((num + den - 1) / den);
  }

  void push_event(Ticks t, int kind, int flow, std::int64_t a, std::int64_t b) {
    events_.push(Event{t, kind, flow, event_seq_++, a, b});
  }

  void inject_flows();
  void inject_best_effort();
  void handle_arrival(Ticks t, int packet_id);
  void enqueue_ts(Ticks t, int packet_id);
  void handle_tx_complete(Ticks t, std::int64_t port_id, std::uint64_t epoch);
  void try_transmit(Ticks t, std::int64_t port_id);
  void finish_stats(RunResult& result);

  const GroupLadder& ladder_;
  const Network& net_;
  const std::vector<Demand>& demands_;
  const std::vector<PlannedFlow>& plan_;
  const TrafficConfig& traffic_;
  const int horizon_;
  const std::uint64_t seed_;

  std::vector<SimPacket> packets_;
  std::vector<Port> ports_; // one per directed link
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
  std::uint64_t event_seq_ = 0;
  Fnv1a64 trace_;
  std::int64_t events_processed_ = 0;
  std::int64_t preemptions_ = 0;
  std::int64_t out_of_window_ = 0;
  Ticks measure_from_ = 0;
  std::vector<BeLinkStats> be_stats_;
  std::vector<std::vector<PacketSample>> samples_; // per flow
  std::vector<FlowStats> stats_;
};

void Engine::inject_flows() {
  const Ticks hypercycle = ladder_.hypercycle();
  const std::int64_t unitary = ladder_.delta0();
  for (std::size_t fi = 0; fi < plan_.size(); ++fi) {
    const PlannedFlow& flow = plan_[fi];
    const Demand& d = demands_[static_cast<std::size_t>(flow.demand)];
    const Ticks delta = ladder_.cycle_length(flow.schedule.group);
    const NodeIndex src = flow.schedule.path.nodes.front();
    const Ticks theta = net_.node(src).clock_offset;
    const std::int64_t stride = d.period / unitary;
    const std::int64_t total = horizon_ * (hypercycle / d.period);
    for (std::int64_t j = 0; j < total; ++j) {
      const std::int64_t arrival_unitary = d.arrival_cycle + j * stride;
      // First group-m cycle after the one overlapping the arrival cycle,
      // in absolute (unwrapped) indices.
      const std::int64_t c0 = ceil_div((arrival_unitary + 1) * unitary, delta);
      SimPacket p;
      p.flow = static_cast<int>(fi);
      p.bits = d.payload_bits;
      p.seq = j;
      p.hop = 0;
      p.abs_cycle = c0;
      p.release = theta + c0 * delta;
      p.first_release = p.release;
      const int id = static_cast<int>(packets_.size());
      packets_.push_back(std::move(p));
      push_event(packets_[static_cast<std::size_t>(id)].release, kArrival,
                 static_cast<int>(fi), id, 0);
    }
  }
}

void Engine::inject_best_effort() {
  const Ticks horizon_end = horizon_ * ladder_.hypercycle();
  const auto stream = inject_background(net_, traffic_, horizon_end, seed_, ladder_.tick_ns());
  for (const BePacket& bp : stream) {
    SimPacket p;
    p.flow = -1;
    p.be_link = bp.link;
    p.bits = bp.bits;
    p.release = bp.time;
    p.first_release = bp.time;
    const int id = static_cast<int>(packets_.size());
    packets_.push_back(std::move(p));
    push_event(bp.time, kArrival, -1, id, 0);
    be_stats_[static_cast<std::size_t>(bp.link)].offered_bits += bp.bits;
  }
}

void Engine::enqueue_ts(Ticks t, int packet_id) {
  SimPacket& p = packets_[static_cast<std::size_t>(packet_id)];
  const PlannedFlow& flow = plan_[static_cast<std::size_t>(p.flow)];
  const auto& nodes = flow.schedule.path.nodes;
  const NodeIndex here = nodes[static_cast<std::size_t>(p.hop)];
  const NodeIndex next = nodes[static_cast<std::size_t>(p.hop) + 1];
  const LinkIndex link = net_.link_index(here, next);
  const int m = flow.schedule.group;
  const Ticks delta = ladder_.cycle_length(m);

  if (tx_ticks(link, p.bits) > delta) {
    // Serialization-infeasible for this group: the packet can never clear
    // the gate. Planner-built plans filter this; manual plans surface here.
    p.dropped = true;
    return;
  }

  Port& port = ports_[static_cast<std::size_t>(link)];
  const int queue = static_cast<int>(mod_floor(p.abs_cycle, ladder_.queues_per_group()));
  port.ts[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(queue)].push_back(packet_id);
  if (p.release <= t)
    try_transmit(t, link);
  else
    push_event(p.release, kGate, -1, link, 0);
}

void Engine::handle_arrival(Ticks t, int packet_id) {
  SimPacket& p = packets_[static_cast<std::size_t>(packet_id)];
  if (p.flow < 0) {
    // Best-effort joins its link's lowest-priority queue immediately.
    Port& port = ports_[static_cast<std::size_t>(p.be_link)];
    port.be.push_back(packet_id);
    try_transmit(t, p.be_link);
    return;
  }
  const PlannedFlow& flow = plan_[static_cast<std::size_t>(p.flow)];
  const auto& nodes = flow.schedule.path.nodes;
  if (p.hop == static_cast<int>(nodes.size()) - 1) {
    // Sink: the last bit has arrived.
    FlowStats& st = stats_[static_cast<std::size_t>(p.flow)];
    const Ticks delay = t - p.first_release;
    if (p.first_release >= measure_from_) {
      if (st.delivered == 0) {
        st.min_delay = st.max_delay = delay;
      } else {
        st.min_delay = std::min(st.min_delay, delay);
        st.max_delay = std::max(st.max_delay, delay);
      }
      ++st.delivered;
      st.mean_delay += static_cast<double>(delay);
      if (delay > flow.schedule.e2e_bound) ++st.bound_violations;
      if (traffic_.record_samples) {
        PacketSample sample;
        sample.demand = flow.demand;
        sample.seq = p.seq;
        sample.release = p.first_release;
        sample.delivery = t;
        sample.delay = delay;
        sample.hops = p.hops;
        samples_[static_cast<std::size_t>(p.flow)].push_back(std::move(sample));
      }
    }
    return;
  }
  enqueue_ts(t, packet_id);
}

void Engine::handle_tx_complete(Ticks t, std::int64_t port_id, std::uint64_t epoch) {
  Port& port = ports_[static_cast<std::size_t>(port_id)];
  if (!port.busy || port.epoch != epoch) return; // superseded by a preemption
  const int packet_id = port.active;
  port.busy = false;
  port.active = -1;
  ++port.epoch;

  SimPacket& p = packets_[static_cast<std::size_t>(packet_id)];
  const Link& link = net_.link(port.link);
  if (p.flow < 0) {
    BeLinkStats& st = be_stats_[static_cast<std::size_t>(port.link)];
    ++st.delivered_packets;
    st.max_delay = std::max(st.max_delay, t - p.first_release);
  } else {
    ++p.hop;
    // Designated downstream cycle: absolute form of the cycle mapping, one
    // cycle after the one overlapping the worst-case arrival instant.
    const int m = plan_[static_cast<std::size_t>(p.flow)].schedule.group;
    const Ticks delta = ladder_.cycle_length(m);
    const Ticks theta_up = net_.node(link.src).clock_offset;
    const Ticks theta_dn = net_.node(link.dst).clock_offset;
    const std::int64_t mapped =
        floor_div(theta_up + (p.abs_cycle + 1) * delta + link.delay - theta_dn, delta);
    p.abs_cycle = mapped + 1;
    p.release = theta_dn + p.abs_cycle * delta;
    push_event(t + link.delay, kArrival, p.flow, packet_id, 0);
  }
  try_transmit(t, port_id);
}

void Engine::try_transmit(Ticks t, std::int64_t port_id) {
  Port& port = ports_[static_cast<std::size_t>(port_id)];
  const NodeIndex node = net_.link(port.link).src;
  const Ticks theta = net_.node(node).clock_offset;
  const int ndn = ladder_.queues_per_group();

  // Best ready work, by strict priority (group 1 first, best-effort last).
  struct Pick {
    int prio = 1 << 30;
    int packet = -1;
    enum { none, queue_head, suspended, be_head } kind = none;
    int group = 0, queue = 0;
  } pick;

  for (int m = 1; m <= ladder_.group_count(); ++m) {
    const Ticks delta = ladder_.cycle_length(m);
    const std::int64_t current = floor_div(t - theta, delta);
    const int open_queue = static_cast<int>(mod_floor(current, ndn));
    auto& q = port.ts[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(open_queue)];
    while (!q.empty()) {
      SimPacket& head = packets_[static_cast<std::size_t>(q.front())];
      // Re-target a head whose designated window has already closed
      // (possible only when the plan was infeasible to begin with).
      if (theta + (head.abs_cycle + 1) * delta <= t) {
        const std::int64_t missed =
            floor_div(t - theta - (head.abs_cycle + 1) * delta, ndn * delta) + 1;
        head.abs_cycle += missed * ndn;
        head.release = theta + head.abs_cycle * delta;
      }
      if (head.release > t) {
        push_event(head.release, kGate, -1, port.link, 0);
        break;
      }
      // Must fit before the gate closes.
      const Ticks len = tx_ticks(port.link, head.bits);
      if (t + len > theta + (head.abs_cycle + 1) * delta) {
        head.abs_cycle += ndn;
        head.release = theta + head.abs_cycle * delta;
        push_event(head.release, kGate, -1, port.link, 0);
        break;
      }
      if (m < pick.prio) {
        pick.prio = m;
        pick.packet = q.front();
        pick.kind = Pick::queue_head;
        pick.group = m;
        pick.queue = open_queue;
      }
      break;
    }
  }
  if (!port.suspended.empty()) {
    const int sid = port.suspended.back();
    const int sprio = prio_of(packets_[static_cast<std::size_t>(sid)]);
    if (sprio <= pick.prio) { // resume beats an equal-priority fresh start
      pick.prio = sprio;
      pick.packet = sid;
      pick.kind = Pick::suspended;
    }
  }
  if (!port.be.empty()) {
    const int be_prio = ladder_.group_count() + 1;
    if (be_prio < pick.prio) {
      pick.prio = be_prio;
      pick.packet = port.be.front();
      pick.kind = Pick::be_head;
    }
  }
  if (pick.kind == Pick::none) return;

  if (port.busy) {
    const int active_prio = prio_of(packets_[static_cast<std::size_t>(port.active)]);
    if (pick.prio >= active_prio) return; // no preemption among equals
    const Ticks remaining = port.complete_at - t;
    if (remaining <= 0) return; // completing this very tick; let it finish
    SimPacket& victim = packets_[static_cast<std::size_t>(port.active)];
    victim.remaining = remaining;
    port.suspended.push_back(port.active);
    port.busy = false;
    port.active = -1;
    ++port.epoch;
    ++preemptions_;
  }

  SimPacket& p = packets_[static_cast<std::size_t>(pick.packet)];
  Ticks len = 0;
  switch (pick.kind) {
    case Pick::queue_head:
      port.ts[static_cast<std::size_t>(pick.group - 1)][static_cast<std::size_t>(pick.queue)]
          .pop_front();
      len = tx_ticks(port.link, p.bits);
      p.hops.push_back(HopStamp{node, t});
      if (t < p.release || t + len > p.release + ladder_.cycle_length(pick.group))
        ++out_of_window_;
      break;
    case Pick::suspended:
      port.suspended.pop_back();
      len = p.remaining;
      p.remaining = 0;
      break;
    case Pick::be_head:
      port.be.pop_front();
      len = tx_ticks(port.link, p.bits);
      break;
    default:
      return;
  }
  port.busy = true;
  port.active = pick.packet;
  port.complete_at = t + len;
  push_event(port.complete_at, kTxComplete, p.flow, port.link,
             static_cast<std::int64_t>(port.epoch));
}

void Engine::finish_stats(RunResult& result) {
  for (std::size_t fi = 0; fi < plan_.size(); ++fi) {
    FlowStats& st = stats_[fi];
    if (st.delivered > 0) {
      st.mean_delay /= static_cast<double>(st.delivered);
      st.jitter = st.max_delay - st.min_delay;
    }
    result.flows.push_back(st);
    for (auto& s : samples_[fi]) result.samples.push_back(std::move(s));
  }
  for (const BeLinkStats& st : be_stats_)
    if (st.offered_bits > 0) result.be_links.push_back(st);
  result.trace_hash = trace_.digest();
  result.events_processed = events_processed_;
  result.preemptions = preemptions_;
  result.out_of_window_starts = out_of_window_;
}

RunResult Engine::execute() {
  if (horizon_ < 2)
    throw validation_error("simulator: horizon must cover at least 2 hypercycles");
  for (const PlannedFlow& flow : plan_) {
    if (flow.demand < 0 || flow.demand >= static_cast<int>(demands_.size()))
      throw validation_error("simulator: plan references an unknown demand");
    for (std::size_t i = 0; i + 1 < flow.schedule.path.nodes.size(); ++i)
      net_.link_index(flow.schedule.path.nodes[i], flow.schedule.path.nodes[i + 1]);
  }

  ports_.resize(static_cast<std::size_t>(net_.link_count()));
  for (LinkIndex e = 0; e < net_.link_count(); ++e) {
    Port& port = ports_[static_cast<std::size_t>(e)];
    port.link = e;
    port.ts.assign(static_cast<std::size_t>(ladder_.group_count()),
                   std::vector<std::deque<int>>(
                       static_cast<std::size_t>(ladder_.queues_per_group())));
  }
  be_stats_.assign(static_cast<std::size_t>(net_.link_count()), BeLinkStats{});
  for (LinkIndex e = 0; e < net_.link_count(); ++e)
    be_stats_[static_cast<std::size_t>(e)].link = e;
  stats_.assign(plan_.size(), FlowStats{});
  for (std::size_t fi = 0; fi < plan_.size(); ++fi)
    stats_[fi].demand = plan_[fi].demand;
  samples_.assign(plan_.size(), {});
  measure_from_ = ladder_.hypercycle(); // first hypercycle is warm-up

  inject_flows();
  inject_best_effort();

  while (!events_.empty()) {
    const Event ev = events_.top();
    events_.pop();
    ++events_processed_;
    trace_.add(static_cast<std::int64_t>(ev.t));
    trace_.add(static_cast<std::int64_t>(ev.kind));
    trace_.add(static_cast<std::int64_t>(ev.flow));
    trace_.add(ev.a);
    switch (ev.kind) {
      case kGate:
        try_transmit(ev.t, ev.a);
        break;
      case kArrival:
        handle_arrival(ev.t, static_cast<int>(ev.a));
        break;
      case kTxComplete:
        handle_tx_complete(ev.t, ev.a, static_cast<std::uint64_t>(ev.b));
        break;
      default:
        break;
    }
  }

  // Anything measured but undelivered is a drop.
  for (const SimPacket& p : packets_) {
    if (p.flow < 0) continue;
    const auto& nodes = plan_[static_cast<std::size_t>(p.flow)].schedule.path.nodes;
    const bool delivered = !p.dropped && p.hop == static_cast<int>(nodes.size()) - 1;
    if (!delivered && p.first_release >= measure_from_)
      ++stats_[static_cast<std::size_t>(p.flow)].dropped;
  }

  RunResult result;
  finish_stats(result);
  return result;
}

} // namespace

std::vector<BePacket> inject_background(const Network& net, const TrafficConfig& traffic,
                                        Ticks horizon_end, std::uint64_t seed,
                                        std::int64_t tick_ns) {
  std::vector<BePacket> stream;
  for (LinkIndex e = 0; e < net.link_count(); ++e) {
    double util = traffic.be_utilization;
    auto it = traffic.be_per_link.find(e);
    if (it != traffic.be_per_link.end()) util = it->second;
    if (util == 0.0) continue;
    if (util < 0.0 || util >= 1.0)
      throw validation_error("background: utilization must lie in [0, 1)");

    SplitMix64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(e + 1)));
    const double bits_per_tick = static_cast<double>(net.link(e).bandwidth_bps) *
                                 static_cast<double>(tick_ns) / 1e9;
    const double burst_bits =
        static_cast<double>(traffic.be_packet_bits) * traffic.be_burst_packets;
    const double mean_spacing = burst_bits / (util * bits_per_tick); // ticks
    double t = rng.unit() * mean_spacing;
    while (t < static_cast<double>(horizon_end)) {
      const auto burst_time = static_cast<Ticks>(t);
      for (int k = 0; k < traffic.be_burst_packets; ++k)
        stream.push_back(BePacket{e, burst_time, traffic.be_packet_bits});
      t += mean_spacing * (0.75 + 0.5 * rng.unit());
    }
  }
  return stream;
}

RunResult run(const GroupLadder& ladder, const Network& net,
              const std::vector<Demand>& demands, const std::vector<PlannedFlow>& plan,
              const TrafficConfig& traffic, int horizon, std::uint64_t seed) {
  Engine engine(ladder, net, demands, plan, traffic, horizon, seed);
  return engine.execute();
}

VerificationReport verify_against_bounds(const RunResult& result,
                                         const std::vector<PlannedFlow>& plan) {
  VerificationReport report;
  for (std::size_t fi = 0; fi < plan.size(); ++fi) {
    const FlowStats& st = result.flows[fi];
    FlowVerification v;
    v.demand = st.demand;
    v.max_delay = st.max_delay;
    v.e2e_bound = plan[fi].schedule.e2e_bound;
    v.jitter = st.jitter;
    v.jitter_bound = plan[fi].schedule.jitter_bound;
    v.dropped = st.dropped;
    v.pass = st.delivered > 0 && st.dropped == 0 && st.max_delay <= v.e2e_bound &&
             st.jitter <= v.jitter_bound;
    if (!v.pass)
      for (const PacketSample& s : result.samples)
        if (s.demand == st.demand && s.delay > v.e2e_bound) v.offending.push_back(s);
    report.all_pass = report.all_pass && v.pass;
    report.flows.push_back(std::move(v));
  }
  report.gate_violations = result.out_of_window_starts;
  return report;
}

} // namespace fdip
