#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fdip/forwarding.hpp"
#include "fdip/ladder.hpp"
#include "fdip/network.hpp"

namespace fdip {

struct TrafficConfig {
  double be_utilization = 0.0;          // offered best-effort load per link
  std::map<LinkIndex, double> be_per_link; // overrides for specific links
  std::int64_t be_packet_bits = 12000;  // 1500-byte frames
  int be_burst_packets = 10;            // packets released back to back
  int horizon_hypercycles = 4;          // warm-up hypercycle + measurement
  bool record_samples = true;
};

/// One accepted demand as the simulator replays it.
struct PlannedFlow {
  int demand = -1;
  PathSchedule schedule; // carries path, group, transmit cycles and bounds
};

struct FlowStats {
  int demand = -1;
  std::int64_t delivered = 0;
  std::int64_t dropped = 0;
  Ticks min_delay = 0;
  Ticks max_delay = 0;
  double mean_delay = 0.0;
  Ticks jitter = 0; // max - min over delivered, measured packets
  std::int64_t bound_violations = 0;
};

struct HopStamp {
  NodeIndex node = -1;
  Ticks time = 0; // transmission start at this node
};

struct PacketSample {
  int demand = -1;
  std::int64_t seq = 0; // periodic repetition counter from simulation start
  Ticks release = 0;    // start of the first eligible transmit window
  Ticks delivery = 0;
  Ticks delay = 0;
  std::vector<HopStamp> hops;
};

struct BeLinkStats {
  LinkIndex link = -1;
  std::int64_t offered_bits = 0;
  std::int64_t delivered_packets = 0;
  Ticks max_delay = 0;
};

struct RunResult {
  std::vector<FlowStats> flows;      // one per planned flow, plan order
  std::vector<PacketSample> samples; // measured TS packets, (demand, seq) order
  std::vector<BeLinkStats> be_links;
  std::uint64_t trace_hash = 0;      // digest of the processed event sequence
  std::int64_t events_processed = 0;
  std::int64_t preemptions = 0;
  std::int64_t out_of_window_starts = 0; // gate-discipline breaches (0 when feasible)
};

struct BePacket {
  LinkIndex link = -1;
  Ticks time = 0;
  std::int64_t bits = 0;
};

/// Seeded on/off burst process per link whose long-run offered load matches
/// the configured utilization. Utilization >= 1 is rejected.
std::vector<BePacket> inject_background(const Network& net, const TrafficConfig& traffic,
                                        Ticks horizon_end, std::uint64_t seed,
                                        std::int64_t tick_ns = 1);

/// Event-driven replay of an accepted plan over `horizon` hypercycles
/// (the first is warm-up), plus seeded best-effort background. Ports host
/// M groups of cyclically gated queues and one best-effort queue; selection
/// is strict priority with ideal (bit-granular, zero-overhead) preemption of
/// lower-priority traffic. Deterministic for a given seed.
RunResult run(const GroupLadder& ladder, const Network& net,
              const std::vector<Demand>& demands, const std::vector<PlannedFlow>& plan,
              const TrafficConfig& traffic, int horizon, std::uint64_t seed);

struct FlowVerification {
  int demand = -1;
  bool pass = false;
  Ticks max_delay = 0;
  Ticks e2e_bound = 0;
  Ticks jitter = 0;
  Ticks jitter_bound = 0;
  std::int64_t dropped = 0;
  std::vector<PacketSample> offending; // packets over the bound, with hop traces
};

struct VerificationReport {
  bool all_pass = true;
  std::vector<FlowVerification> flows;
  std::int64_t gate_violations = 0;
};

/// Measured obligations: per flow, max delay within the analytic bound,
/// realized jitter within 2*delta_m, and zero drops.
VerificationReport verify_against_bounds(const RunResult& result,
                                         const std::vector<PlannedFlow>& plan);

} // namespace fdip
