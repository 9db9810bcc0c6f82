#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fdip/num.hpp"

namespace fdip {

struct LadderConfig {
  Ticks delta0 = 0;                      // unitary cycle length, in ticks
  std::vector<std::int64_t> multipliers; // k_m for m = 1..M, each >= 1
  int queues_per_group = 4;              // N_dn, >= 3
  std::int64_t tick_ns = 1;              // nanoseconds per tick
  // Smallest admissible value is used when unset; larger values are allowed.
  std::optional<std::int64_t> hypercycle_factor; // N_hc override
};

/// The network-wide multi-rate cycle ladder.
///
/// Group m (m = 1..M) slices time into cycles of length delta_m =
/// k_m * delta_{m-1}; group 0 is the unitary grid delta_0. The hypercycle is
/// the common period after which every group's cycle pattern and every demand
/// period realign. Immutable once built; safe to share across threads.
class GroupLadder {
public:
  /// Builds the ladder and its hypercycle in one step. `demand_periods`
  /// (ticks) are folded into the hypercycle so that every period divides it.
  /// Throws validation_error on bad config, limit_error on tick overflow.
  static GroupLadder build(const LadderConfig& config,
                           const std::vector<Ticks>& demand_periods = {});

  int group_count() const { return static_cast<int>(deltas_.size()) - 1; } // M
  int queues_per_group() const { return queues_per_group_; }               // N_dn
  Ticks delta0() const { return deltas_[0]; }
  std::int64_t tick_ns() const { return tick_ns_; }

  /// delta_m for m in [0, M]; m = 0 is the unitary cycle.
  Ticks cycle_length(int m) const;

  Ticks hypercycle() const { return hypercycle_; }                 // delta_hc
  std::int64_t hypercycle_factor() const { return hypercycle_factor_; } // N_hc

  /// N_m = delta_hc / delta_m, the number of group-m cycles per hypercycle.
  std::int64_t cycles_per_hypercycle(int m) const;

  /// Cycle alignment from a faster group m_i to a slower group m_j
  /// (m_i < m_j): the index of the group-m_j cycle that overlaps cycle `a`
  /// of group m_i. Requires 0 <= a < N_{m_i}.
  std::int64_t align(int m_i, int m_j, std::int64_t a) const;

  /// Preimage of `align`: all group-m_i cycles overlapping group-m_j cycle
  /// `b`. The result has exactly delta_{m_j}/delta_{m_i} elements, ascending.
  std::vector<std::int64_t> align_inverse(int m_i, int m_j, std::int64_t b) const;

private:
  GroupLadder() = default;

  void check_group(int m) const;
  void check_pair(int m_i, int m_j) const;

  std::vector<Ticks> deltas_;      // deltas_[m] for m = 0..M
  int queues_per_group_ = 0;
  std::int64_t tick_ns_ = 1;
  std::int64_t hypercycle_factor_ = 0;
  Ticks hypercycle_ = 0;
};

} // namespace fdip
