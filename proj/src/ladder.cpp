#include "fdip/ladder.hpp"

#include <string>

#include "fdip/errors.hpp"

namespace fdip {

GroupLadder GroupLadder::build(const LadderConfig& config,
                               const std::vector<Ticks>& demand_periods) {
  if (config.delta0 <= 0)
    throw validation_error("ladder: delta0 must be a positive tick count");
  if (config.multipliers.empty())
    throw validation_error("ladder: at least one group is required");
  if (config.queues_per_group < 3)
    throw validation_error("ladder: queues_per_group must be >= 3");
  if (config.tick_ns <= 0)
    throw validation_error("ladder: tick_ns must be positive");

  GroupLadder ladder;
  ladder.queues_per_group_ = config.queues_per_group;
  ladder.tick_ns_ = config.tick_ns;
  ladder.deltas_.reserve(config.multipliers.size() + 1);
  ladder.deltas_.push_back(config.delta0);
  for (std::int64_t k : config.multipliers) {
    if (k < 1)
      throw validation_error("ladder: multipliers must be positive integers");
    ladder.deltas_.push_back(checked_mul(ladder.deltas_.back(), k));
  }

  const Ticks delta_max = ladder.deltas_.back();
  Ticks base = delta_max;
  for (Ticks period : demand_periods) {
    if (period <= 0)
      throw validation_error("ladder: demand periods must be positive");
    base = checked_lcm(base, period);
  }

  // Smallest N_hc with N_hc * base / delta_m >= N_dn for every m; the largest
  // cycle length is binding.
  const std::int64_t minimal =
      ceil_div(checked_mul(config.queues_per_group, delta_max), base);
  std::int64_t factor = minimal;
  if (config.hypercycle_factor) {
    if (*config.hypercycle_factor < minimal)
      throw validation_error(
          "ladder: hypercycle_factor " + std::to_string(*config.hypercycle_factor) +
          " is below the minimal admissible value " + std::to_string(minimal));
    factor = *config.hypercycle_factor;
  }

  ladder.hypercycle_factor_ = factor;
  ladder.hypercycle_ = checked_mul(factor, base);
  return ladder;
}

void GroupLadder::check_group(int m) const {
  if (m < 0 || m > group_count())
    throw validation_error("ladder: group index " + std::to_string(m) +
                           " out of range [0, " + std::to_string(group_count()) + "]");
}

void GroupLadder::check_pair(int m_i, int m_j) const {
  check_group(m_i);
  check_group(m_j);
  if (m_i >= m_j)
    throw validation_error("ladder: alignment requires m_i < m_j, got " +
                           std::to_string(m_i) + " >= " + std::to_string(m_j));
}

Ticks GroupLadder::cycle_length(int m) const {
  check_group(m);
  return deltas_[static_cast<std::size_t>(m)];
}

std::int64_t GroupLadder::cycles_per_hypercycle(int m) const {
  check_group(m);
  return hypercycle_ / deltas_[static_cast<std::size_t>(m)];
}

std::int64_t GroupLadder::align(int m_i, int m_j, std::int64_t a) const {
  check_pair(m_i, m_j);
  if (a < 0 || a >= cycles_per_hypercycle(m_i))
    throw validation_error("ladder: cycle index " + std::to_string(a) +
                           " out of range for group " + std::to_string(m_i));
  const Ticks di = deltas_[static_cast<std::size_t>(m_i)];
  const Ticks dj = deltas_[static_cast<std::size_t>(m_j)];
  return ceil_div(checked_mul(a + 1, di), dj) - 1;
}

std::vector<std::int64_t> GroupLadder::align_inverse(int m_i, int m_j,
                                                     std::int64_t b) const {
  check_pair(m_i, m_j);
  if (b < 0 || b >= cycles_per_hypercycle(m_j))
    throw validation_error("ladder: cycle index " + std::to_string(b) +
                           " out of range for group " + std::to_string(m_j));
  const Ticks di = deltas_[static_cast<std::size_t>(m_i)];
  const Ticks dj = deltas_[static_cast<std::size_t>(m_j)];
  const std::int64_t ratio = dj / di; // exact: delta_{m_i} divides delta_{m_j}
  std::vector<std::int64_t> cycles;
  cycles.reserve(static_cast<std::size_t>(ratio));
  for (std::int64_t a = b * ratio; a < (b + 1) * ratio; ++a) cycles.push_back(a);
  return cycles;
}

} // namespace fdip
