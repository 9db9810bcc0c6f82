#include <doctest.h>

#include "fdip/capacity.hpp"
#include "fdip/errors.hpp"
#include "testutil.hpp"

using namespace fdip;
using test::kUs;

TEST_SUITE_BEGIN("capacity");

namespace {

// delta = {10us, 20us}, N_dn = 4, hypercycle 80us: N_1 = 8, N_2 = 4.
GroupLadder two_group_ladder() {
  LadderConfig c;
  c.delta0 = 10 * kUs;
  c.multipliers = {1, 2};
  c.queues_per_group = 4;
  return GroupLadder::build(c);
}

Footprint manual_footprint(int demand, std::initializer_list<std::pair<CellKey, std::int64_t>> cells) {
  Footprint fp;
  fp.demand = demand;
  fp.entries.assign(cells.begin(), cells.end());
  return fp;
}

} // namespace

TEST_CASE("footprints reserve one cell per hop and repetition") {
  const GroupLadder ladder = two_group_ladder();
  const Network net = test::line_net(3, 0, 10000000000);
  Demand d = test::make_demand(net, "d0", "N0", "N2", ladder.hypercycle(), 0, 4000,
                               1000 * kUs);
  const PathSchedule s = trace_schedule(ladder, net, d, 0, Path{{0, 1, 2}}, 1);
  const Footprint fp = demand_footprint(ladder, net, s, d);
  REQUIRE(fp.entries.size() == 2); // one per hop
  for (const auto& [cell, bits] : fp.entries) {
    CHECK(bits == 4000);
    CHECK(cell.group == 1);
  }

  const PathSchedule one_hop = trace_schedule(ladder, net, d, 0, Path{{0, 1}}, 1);
  const Footprint fp1 = demand_footprint(ladder, net, one_hop, d);
  REQUIRE(fp1.entries.size() == 1);
  CHECK(fp1.entries[0].first ==
        CellKey{net.link_index(0, 1), 1, one_hop.tx_cycles[0]});

  // A 20us period inside the 80us hypercycle: four repetitions per hop.
  Demand fast = d;
  fast.period = 20 * kUs;
  const PathSchedule sf = trace_schedule(ladder, net, fast, 0, Path{{0, 1}}, 1);
  const Footprint fp4 = demand_footprint(ladder, net, sf, fast);
  CHECK(fp4.entries.size() == 4);
}

TEST_CASE("demands in different groups keep disjoint raw entries") {
  const GroupLadder ladder = two_group_ladder();
  const Network net = test::line_net(2, 0, 10000000000);
  Demand d0 = test::make_demand(net, "d0", "N0", "N1", ladder.hypercycle(), 0, 4000,
                                1000 * kUs);
  Demand d1 = d0;
  d1.id = "d1";
  const Footprint fp0 =
      demand_footprint(ladder, net, trace_schedule(ladder, net, d0, 0, Path{{0, 1}}, 1), d0);
  const Footprint fp1 =
      demand_footprint(ladder, net, trace_schedule(ladder, net, d1, 1, Path{{0, 1}}, 2), d1);
  CHECK(fp0.entries[0].first.group == 1);
  CHECK(fp1.entries[0].first.group == 2);
  CapacityLedger ledger(ladder, net);
  ledger.commit(fp0);
  ledger.commit(fp1);
  CHECK(ledger.raw(fp0.entries[0].first) == 4000);
  CHECK(ledger.raw(fp1.entries[0].first) == 4000);
}

TEST_CASE("commit cascades into slower groups") {
  const GroupLadder ladder = two_group_ladder();
  const Network net = test::line_net(2, 0, 10000000000);
  CapacityLedger ledger(ladder, net);

  // 4000 bits at group 1, cycle 2; the overlapping group-2 cycle is align(2).
  CHECK(ladder.align(1, 2, 2) == 1);
  ledger.commit(manual_footprint(0, {{CellKey{0, 1, 2}, 4000}}));
  CHECK(ledger.cascaded(CellKey{0, 1, 2}) == 4000);
  CHECK(ledger.cascaded(CellKey{0, 2, 1}) == 4000);
  CHECK(ledger.raw(CellKey{0, 2, 1}) == 0);
}

TEST_CASE("commit and rollback are exact inverses") {
  const GroupLadder ladder = two_group_ladder();
  const Network net = test::line_net(2, 0, 10000000000);
  CapacityLedger ledger(ladder, net);
  const Footprint fp = manual_footprint(7, {{CellKey{0, 1, 3}, 5000}});
  ledger.commit(fp);
  CHECK_THROWS_AS(ledger.commit(fp), validation_error); // double commit
  ledger.rollback(fp);
  CHECK(ledger.raw_cells().empty());
  CHECK(ledger.cascaded_cells().empty());
  CHECK_THROWS_AS(ledger.rollback(fp), validation_error); // unknown rollback
}

TEST_CASE("random commit/rollback sequences preserve the cascade") {
  SplitMix64 rng(31337);
  const GroupLadder ladder = two_group_ladder();
  const Network net = test::line_net(3, 0, 10000000000);

  for (int trial = 0; trial < 30; ++trial) {
    CapacityLedger ledger(ladder, net);
    std::vector<Footprint> committed;
    const int ops = static_cast<int>(rng.range(5, 25));
    for (int op = 0; op < ops; ++op) {
      if (!committed.empty() && rng.range(0, 2) == 0) {
        const std::size_t pick = rng.below(committed.size());
        ledger.rollback(committed[pick]);
        committed.erase(committed.begin() + static_cast<std::ptrdiff_t>(pick));
        continue;
      }
      Footprint fp;
      fp.demand = 1000 + trial * 100 + op;
      const int cells = static_cast<int>(rng.range(1, 3));
      for (int i = 0; i < cells; ++i) {
        const int group = static_cast<int>(rng.range(1, 2));
        fp.entries.emplace_back(
            CellKey{static_cast<LinkIndex>(rng.range(0, 1)), group,
                    rng.range(0, ladder.cycles_per_hypercycle(group) - 1)},
            rng.range(1, 9000));
      }
      std::sort(fp.entries.begin(), fp.entries.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      ledger.commit(fp);
      committed.push_back(fp);
    }

    // Oracle: rebuild from scratch and compare cell by cell.
    CapacityLedger fresh(ladder, net);
    for (const Footprint& fp : committed) fresh.commit(fp);
    CHECK(fresh.raw_cells() == ledger.raw_cells());
    CHECK(fresh.cascaded_cells() == ledger.cascaded_cells());

    // Conservation: group-M totals equal all raw bits.
    std::int64_t raw_total = 0;
    for (const auto& [cell, bits] : ledger.raw_cells()) raw_total += bits;
    std::int64_t top_total = 0;
    for (const auto& [cell, bits] : ledger.cascaded_cells())
      if (cell.group == ladder.group_count()) top_total += bits;
    CHECK(raw_total == top_total);
  }
}

TEST_CASE("capacity violations report the excess") {
  const GroupLadder ladder = two_group_ladder();
  const Network net = test::line_net(2, 0, 10000000000);

  // Budget: 10 Gbps * 10us = 100,000 bits.
  CHECK(cell_budget_bits(ladder, net, 0, 1) == 100000);
  CHECK(cell_budget_bits(ladder, net, 0, 2) == 200000);

  CapacityLedger ledger(ladder, net);
  ledger.commit(manual_footprint(0, {{CellKey{0, 1, 0}, 4000}}));
  CHECK(ledger.check_capacity().empty());

  // 26 demands of 4000 bits in one cell: 104,000 > 100,000.
  CapacityLedger crowded(ladder, net);
  for (int d = 0; d < 26; ++d)
    crowded.commit(manual_footprint(d, {{CellKey{0, 1, 0}, 4000}}));
  const auto violations = crowded.check_capacity();
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].cell == CellKey{0, 1, 0});
  CHECK(violations[0].excess_bits() == 4000);

  // Group-1 traffic cascading into an already loaded group-2 cell.
  CapacityLedger cascade(ladder, net);
  cascade.commit(manual_footprint(0, {{CellKey{0, 1, 0}, 90000}}));
  cascade.commit(manual_footprint(1, {{CellKey{0, 2, 0}, 150000}}));
  const auto v2 = cascade.check_capacity();
  REQUIRE(v2.size() == 1);
  CHECK(v2[0].cell == CellKey{0, 2, 0});
  CHECK(v2[0].load_bits == 240000);
  CHECK(v2[0].excess_bits() == 40000);
}

TEST_CASE("violations are commit-order independent and shrink on rollback") {
  const GroupLadder ladder = two_group_ladder();
  const Network net = test::line_net(2, 0, 10000000000);
  std::vector<Footprint> fps;
  for (int d = 0; d < 6; ++d)
    fps.push_back(manual_footprint(
        d, {{CellKey{0, 1, d % 2}, 60000}, {CellKey{0, 2, 0}, 30000}}));

  CapacityLedger forward(ladder, net), backward(ladder, net);
  for (const Footprint& fp : fps) forward.commit(fp);
  for (auto it = fps.rbegin(); it != fps.rend(); ++it) backward.commit(*it);
  CHECK(forward.check_capacity().size() == backward.check_capacity().size());
  CHECK(forward.cascaded_cells() == backward.cascaded_cells());

  auto before = forward.check_capacity();
  forward.rollback(fps[0]);
  auto after = forward.check_capacity();
  CHECK(after.size() <= before.size());
  for (const CapacityViolation& v : after) {
    bool existed = false;
    for (const CapacityViolation& b : before) existed |= (b.cell == v.cell);
    CHECK(existed);
  }
}

TEST_CASE("headroom fractions") {
  const GroupLadder ladder = two_group_ladder();
  const Network net = test::line_net(2, 0, 10000000000);
  CapacityLedger ledger(ladder, net);
  CHECK(ledger.headroom(0, 1, 0) == 1.0);

  ledger.commit(manual_footprint(0, {{CellKey{0, 1, 0}, 100000}}));
  CHECK(ledger.headroom(0, 1, 0) == 0.0);

  CapacityLedger partial(ladder, net);
  partial.commit(manual_footprint(0, {{CellKey{0, 1, 0}, 4000}}));
  CHECK(partial.headroom(0, 1, 0) == doctest::Approx(0.96));
}

TEST_SUITE_END();
