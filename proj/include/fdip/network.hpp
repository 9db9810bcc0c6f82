#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fdip/ladder.hpp"
#include "fdip/num.hpp"

namespace fdip {

using NodeIndex = int;
using LinkIndex = int;

struct Node {
  std::string id;
  Ticks clock_offset = 0; // theta_v in [0, delta_1)
};

struct Link {
  NodeIndex src = -1;
  NodeIndex dst = -1;
  Ticks delay = 0;              // propagation delay tau
  std::int64_t bandwidth_bps = 0;
};

/// A simple path, stored as node indices; links are resolved on demand.
struct Path {
  std::vector<NodeIndex> nodes;
  int hops() const { return static_cast<int>(nodes.size()) - 1; }
};

/// The 7-tuple time-sensitive flow descriptor.
struct Demand {
  std::string id;
  NodeIndex src = -1;
  NodeIndex dst = -1;
  Ticks period = 0;              // T^d; always a divisor of the hypercycle
  std::int64_t arrival_cycle = 0; // c^d, unitary-cycle index in [0, N_0)
  std::int64_t payload_bits = 0;  // omega^d
  Ticks max_latency = 0;          // Gamma^d
  std::optional<Ticks> max_jitter; // Pi^d; nullopt = unbounded
  double value = 1.0;             // v^d weight in the branching priority
};

/// Directed topology with per-node clock phases. Immutable after load.
class Network {
public:
  NodeIndex add_node(const std::string& id, Ticks clock_offset);
  LinkIndex add_link(const std::string& src, const std::string& dst, Ticks delay,
                     std::int64_t bandwidth_bps);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int link_count() const { return static_cast<int>(links_.size()); }
  const Node& node(NodeIndex v) const { return nodes_[static_cast<std::size_t>(v)]; }
  const Link& link(LinkIndex e) const { return links_[static_cast<std::size_t>(e)]; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }

  std::optional<NodeIndex> find_node(const std::string& id) const;
  NodeIndex node_index(const std::string& id) const; // throws if unknown
  std::optional<LinkIndex> find_link(NodeIndex src, NodeIndex dst) const;
  LinkIndex link_index(NodeIndex src, NodeIndex dst) const; // throws if unknown

  /// Outgoing links of `v`, ordered by destination node id (lexicographic);
  /// the basis for deterministic path enumeration.
  const std::vector<LinkIndex>& outgoing(NodeIndex v) const;

  /// Hypercycle offset tau_hc over a link: theta_dst - theta_src. The node
  /// invariant theta in [0, delta_1) keeps it inside (-delta_m, delta_m) for
  /// every group.
  Ticks hypercycle_offset(LinkIndex e) const;

  /// Validates node invariants that depend on the ladder (clock phases).
  void validate_offsets(const GroupLadder& ladder) const;

private:
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::map<std::string, NodeIndex> node_by_id_;
  std::map<std::pair<NodeIndex, NodeIndex>, LinkIndex> link_by_ends_;
  mutable std::vector<std::vector<LinkIndex>> outgoing_; // built lazily
  mutable bool outgoing_ready_ = false;
};

} // namespace fdip
