#include <doctest.h>

#include "fdip/errors.hpp"
#include "fdip/forwarding.hpp"
#include "testutil.hpp"

using namespace fdip;
using test::kUs;

TEST_SUITE_BEGIN("forwarding");

namespace {

// One group of 10us cycles with 8 queues: hypercycle 80us, N_1 = 8.
GroupLadder ladder_10us_n8() {
  LadderConfig c;
  c.delta0 = 10 * kUs;
  c.multipliers = {1};
  c.queues_per_group = 8;
  return GroupLadder::build(c);
}

Network offset_link_net(Ticks theta_src, Ticks theta_dst, Ticks delay) {
  test::NetSpec spec;
  spec.nodes = {{"A", theta_src}, {"B", theta_dst}};
  spec.links = {{"A", "B", delay, 10000000000}};
  return test::make_net(spec);
}

} // namespace

TEST_CASE("cycle mapping examples") {
  const GroupLadder ladder = ladder_10us_n8();

  // tau = 25us, tau_hc = 5us: mod(floor(30/10), 8)
  Network net = offset_link_net(0, 5 * kUs, 25 * kUs);
  CHECK(cycle_map(ladder, net, 0, 1, 0) == 3);

  // Zero-delay link: a -> a+1 before the +1 re-send convention.
  net = offset_link_net(0, 0, 0);
  CHECK(cycle_map(ladder, net, 0, 1, 5) == 6);
  CHECK(cycle_map(ladder, net, 0, 1, 7) == 0); // wraps mod N_m
  CHECK_THROWS_AS((void)cycle_map(ladder, net, 0, 1, 8), validation_error);
}

TEST_CASE("hop delay examples") {
  const GroupLadder ladder = ladder_10us_n8();

  Network net = offset_link_net(0, 5 * kUs, 25 * kUs);
  CHECK(hop_delay(ladder, net, 0, 1, 0) == 35 * kUs); // in (25us, 35us]

  net = offset_link_net(0, 0, 0);
  for (std::int64_t a = 0; a < 8; ++a) CHECK(hop_delay(ladder, net, 0, 1, a) == 10 * kUs);

  // Negative hypercycle offset: floor(40/10)*10 - 5 - 0
  net = offset_link_net(5 * kUs, 0, 25 * kUs);
  CHECK(hop_delay(ladder, net, 0, 1, 0) == 35 * kUs);
}

TEST_CASE("hop delay stays in (tau, tau + delta] and matches the mapping") {
  SplitMix64 rng(4242);
  for (int trial = 0; trial < 300; ++trial) {
    const GroupLadder ladder = test::random_ladder(rng);
    const int m = static_cast<int>(rng.range(1, ladder.group_count()));
    const Ticks delta = ladder.cycle_length(m);
    const Ticks delta1 = ladder.cycle_length(1);
    const Network net = offset_link_net(rng.range(0, delta1 - 1), rng.range(0, delta1 - 1),
                                        rng.range(0, 60) * kUs);
    const Ticks tau = net.link(0).delay;
    const Ticks tau_hc = net.hypercycle_offset(0);
    const std::int64_t cycles = ladder.cycles_per_hypercycle(m);
    for (int probe = 0; probe < 16; ++probe) {
      const std::int64_t a = rng.range(0, cycles - 1);
      const Ticks d = hop_delay(ladder, net, 0, m, a);
      CHECK(d > tau);
      CHECK(d <= tau + delta);
      // The mapping and the delay share one floor term exactly.
      const std::int64_t mapped = cycle_map(ladder, net, 0, m, a);
      CHECK(mapped == mod_floor((a * delta + d - tau_hc) / delta, cycles));
      // Hypercycle periodicity of the shared floor term.
      const std::int64_t unwrapped = floor_div((a + 1) * delta + tau - tau_hc, delta);
      const std::int64_t shifted =
          floor_div((a + cycles + 1) * delta + tau - tau_hc, delta);
      CHECK(shifted == unwrapped + cycles);
    }
  }
}

TEST_CASE("schedule trace over two zero-delay hops") {
  LadderConfig c;
  c.delta0 = 10 * kUs;
  c.multipliers = {1};
  c.queues_per_group = 4;
  const GroupLadder ladder = GroupLadder::build(c);
  const Network net = test::line_net(3, 0, 10000000000);
  const Path path{{0, 1, 2}};
  const PathSchedule s = trace_schedule_at(ladder, net, path, 1, 0);
  CHECK(s.acc_delays == std::vector<Ticks>{10 * kUs, 30 * kUs, 50 * kUs});
  CHECK(s.e2e_bound == 50 * kUs);
  CHECK(s.jitter_bound == 20 * kUs);
  CHECK(s.tx_cycles.size() == 2);
}

TEST_CASE("schedule trace with link and clock offsets") {
  const GroupLadder ladder = ladder_10us_n8();
  const Network net = offset_link_net(0, 5 * kUs, 25 * kUs);
  // Arrival cycle 7 puts the first transmit window at cycle 0.
  const PathSchedule s = trace_schedule_at(ladder, net, Path{{0, 1}}, 1, 7);
  REQUIRE(s.tx_cycles == std::vector<std::int64_t>{0});
  CHECK(s.acc_delays == std::vector<Ticks>{10 * kUs, 55 * kUs});
  CHECK(s.e2e_bound == 55 * kUs);
}

TEST_CASE("single-hop degenerate path") {
  LadderConfig c;
  c.delta0 = 10 * kUs;
  c.multipliers = {1};
  c.queues_per_group = 4;
  const GroupLadder ladder = GroupLadder::build(c);
  const Network net = test::line_net(2, 0, 10000000000);
  const PathSchedule s = trace_schedule_at(ladder, net, Path{{0, 1}}, 1, 0);
  CHECK(s.acc_delays == std::vector<Ticks>{10 * kUs, 30 * kUs});
}

TEST_CASE("qos verdicts") {
  const GroupLadder ladder = ladder_10us_n8();
  const Network net = test::line_net(3, 0, 10000000000);
  Demand d = test::make_demand(net, "t1", "N0", "N2", ladder.hypercycle(), 0, 6000,
                               500 * kUs, 100 * kUs);
  PathSchedule s = trace_schedule(ladder, net, d, 0, Path{{0, 1, 2}}, 1);
  QosVerdict v = check_qos(s, d);
  CHECK(v.feasible);
  CHECK(v.latency_slack == 450 * kUs);
  REQUIRE(v.jitter_slack.has_value());
  CHECK(*v.jitter_slack == 80 * kUs);

  // 2 * 60us exceeds a 100us jitter budget.
  LadderConfig c;
  c.delta0 = 60 * kUs;
  c.multipliers = {1};
  c.queues_per_group = 4;
  const GroupLadder slow = GroupLadder::build(c);
  s = trace_schedule(slow, net, d, 0, Path{{0, 1, 2}}, 1);
  v = check_qos(s, d);
  CHECK(!v.feasible);
  CHECK(v.latency_ok);
  CHECK(!v.jitter_ok);

  // Boundary: bound exactly equal to the limit is feasible.
  d.max_latency = s.e2e_bound;
  d.max_jitter = s.jitter_bound;
  v = check_qos(s, d);
  CHECK(v.feasible);
  CHECK(v.latency_slack == 0);
}

TEST_CASE("per-hop growth and the worst-case envelope") {
  SplitMix64 rng(777);
  for (int trial = 0; trial < 200; ++trial) {
    const GroupLadder ladder = test::random_ladder(rng);
    const int m = static_cast<int>(rng.range(1, ladder.group_count()));
    const Ticks delta = ladder.cycle_length(m);
    const Ticks delta1 = ladder.cycle_length(1);
    const int hops = static_cast<int>(rng.range(1, 4));
    test::NetSpec spec;
    for (int i = 0; i <= hops; ++i)
      spec.nodes.emplace_back("N" + std::to_string(i), rng.range(0, delta1 - 1));
    Ticks tau_sum = 0;
    for (int i = 0; i < hops; ++i) {
      const Ticks tau = rng.range(0, 50) * kUs;
      tau_sum += tau;
      spec.links.emplace_back("N" + std::to_string(i), "N" + std::to_string(i + 1), tau,
                              1000000000);
    }
    const Network net = test::make_net(spec);
    Path path;
    for (int i = 0; i <= hops; ++i) path.nodes.push_back(i);
    const std::int64_t arrival = rng.range(0, ladder.cycles_per_hypercycle(0) - 1);
    const PathSchedule s = trace_schedule_at(ladder, net, path, m, arrival);

    for (int i = 1; i <= hops; ++i) {
      const Ticks growth = s.acc_delays[static_cast<std::size_t>(i)] -
                           s.acc_delays[static_cast<std::size_t>(i) - 1];
      const Ticks tau = net.link(net.link_index(i - 1, i)).delay;
      CHECK(growth > delta + tau);
      CHECK(growth <= 2 * delta + tau);
    }
    CHECK(s.e2e_bound <= (2 * hops + 1) * delta + tau_sum);
  }

  // Envelope equality: zero offsets and tau a multiple of delta.
  LadderConfig c;
  c.delta0 = 10 * kUs;
  c.multipliers = {1};
  c.queues_per_group = 4;
  const GroupLadder ladder = GroupLadder::build(c);
  const Network net = test::line_net(3, 20 * kUs, 1000000000);
  const PathSchedule s = trace_schedule_at(ladder, net, Path{{0, 1, 2}}, 1, 0);
  CHECK(s.e2e_bound == (2 * 2 + 1) * 10 * kUs + 40 * kUs);
}

TEST_SUITE_END();
