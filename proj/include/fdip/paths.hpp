#pragma once

#include <vector>

#include "fdip/network.hpp"

namespace fdip {

/// All simple paths from `s` to `t` with at most `hop_limit` hops, ordered by
/// (hop count, total link delay, lexicographic node-id sequence) and truncated
/// to `limit` entries. The ordering makes the candidate universe
/// deterministic. Returns an empty vector when s and t are disconnected.
std::vector<Path> enumerate_paths(const Network& net, NodeIndex s, NodeIndex t,
                                  int hop_limit, int limit);

} // namespace fdip
