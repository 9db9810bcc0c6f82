#include "fdip/network.hpp"

#include <algorithm>

#include "fdip/errors.hpp"

namespace fdip {

NodeIndex Network::add_node(const std::string& id, Ticks clock_offset) {
  if (id.empty()) throw validation_error("topology: empty node id");
  if (node_by_id_.count(id))
    throw validation_error("topology: duplicate node id '" + id + "'");
  if (clock_offset < 0)
    throw validation_error("topology: negative clock offset on node '" + id + "'");
  NodeIndex v = node_count();
  nodes_.push_back(Node{id, clock_offset});
  node_by_id_[id] = v;
  outgoing_ready_ = false;
  return v;
}

LinkIndex Network::add_link(const std::string& src, const std::string& dst,
                            Ticks delay, std::int64_t bandwidth_bps) {
  auto s = find_node(src);
  auto d = find_node(dst);
  if (!s || !d)
    throw validation_error("topology: link (" + src + " -> " + dst +
                           ") references an unknown node");
  if (*s == *d)
    throw validation_error("topology: self-loop on node '" + src + "'");
  if (delay < 0)
    throw validation_error("topology: negative delay on link (" + src + " -> " + dst + ")");
  if (bandwidth_bps <= 0)
    throw validation_error("topology: nonpositive bandwidth on link (" + src + " -> " +
                           dst + ")");
  if (link_by_ends_.count({*s, *d}))
    throw validation_error("topology: duplicate link (" + src + " -> " + dst + ")");
  LinkIndex e = link_count();
  links_.push_back(Link{*s, *d, delay, bandwidth_bps});
  link_by_ends_[{*s, *d}] = e;
  outgoing_ready_ = false;
  return e;
}

std::optional<NodeIndex> Network::find_node(const std::string& id) const {
  auto it = node_by_id_.find(id);
  if (it == node_by_id_.end()) return std::nullopt;
  return it->second;
}

NodeIndex Network::node_index(const std::string& id) const {
  auto v = find_node(id);
  if (!v) throw validation_error("unknown node id '" + id + "'");
  return *v;
}

std::optional<LinkIndex> Network::find_link(NodeIndex src, NodeIndex dst) const {
  auto it = link_by_ends_.find({src, dst});
  if (it == link_by_ends_.end()) return std::nullopt;
  return it->second;
}

LinkIndex Network::link_index(NodeIndex src, NodeIndex dst) const {
  auto e = find_link(src, dst);
  if (!e)
    throw validation_error("unknown link (" + node(src).id + " -> " + node(dst).id + ")");
  return *e;
}

const std::vector<LinkIndex>& Network::outgoing(NodeIndex v) const {
  if (!outgoing_ready_) {
    outgoing_.assign(nodes_.size(), {});
    for (LinkIndex e = 0; e < link_count(); ++e)
      outgoing_[static_cast<std::size_t>(links_[static_cast<std::size_t>(e)].src)]
          .push_back(e);
    for (auto& out : outgoing_)
      std::sort(out.begin(), out.end(), [this](LinkIndex a, LinkIndex b) {
        return node(links_[static_cast<std::size_t>(a)].dst).id <
               node(links_[static_cast<std::size_t>(b)].dst).id;
      });
    outgoing_ready_ = true;
  }
  return outgoing_[static_cast<std::size_t>(v)];
}

Ticks Network::hypercycle_offset(LinkIndex e) const {
  if (e < 0 || e >= link_count())
    throw validation_error("hypercycle_offset: unknown link index " + std::to_string(e));
  const Link& l = links_[static_cast<std::size_t>(e)];
  return node(l.dst).clock_offset - node(l.src).clock_offset;
}

void Network::validate_offsets(const GroupLadder& ladder) const {
  const Ticks delta1 = ladder.cycle_length(1);
  for (const Node& n : nodes_)
    if (n.clock_offset < 0 || n.clock_offset >= delta1)
      throw validation_error("topology: clock offset of node '" + n.id +
                             "' must lie in [0, delta_1)");
}

} // namespace fdip
