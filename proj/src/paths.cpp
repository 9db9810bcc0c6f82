#include "fdip/paths.hpp"

#include <algorithm>

#include "fdip/errors.hpp"

namespace fdip {

namespace {

struct Found {
  Path path;
  Ticks total_delay;
};

void dfs(const Network& net, NodeIndex t, int hop_limit, std::vector<NodeIndex>& stack,
         std::vector<char>& on_stack, Ticks delay, std::vector<Found>& out) {
  NodeIndex v = stack.back();
  if (v == t) {
    out.push_back(Found{Path{stack}, delay});
    return;
  }
  if (static_cast<int>(stack.size()) - 1 >= hop_limit) return;
  for (LinkIndex e : net.outgoing(v)) {
    const Link& l = net.link(e);
    if (on_stack[static_cast<std::size_t>(l.dst)]) continue;
    on_stack[static_cast<std::size_t>(l.dst)] = 1;
    stack.push_back(l.dst);
    dfs(net, t, hop_limit, stack, on_stack, delay + l.delay, out);
    stack.pop_back();
    on_stack[static_cast<std::size_t>(l.dst)] = 0;
  }
}

} // namespace

std::vector<Path> enumerate_paths(const Network& net, NodeIndex s, NodeIndex t,
                                  int hop_limit, int limit) {
  if (s < 0 || s >= net.node_count() || t < 0 || t >= net.node_count())
    throw validation_error("enumerate_paths: node index out of range");
  std::vector<Found> found;
  if (s != t && hop_limit >= 1) {
    std::vector<NodeIndex> stack{s};
    std::vector<char> on_stack(static_cast<std::size_t>(net.node_count()), 0);
    on_stack[static_cast<std::size_t>(s)] = 1;
    dfs(net, t, hop_limit, stack, on_stack, 0, found);
  }
  std::sort(found.begin(), found.end(), [&net](const Found& a, const Found& b) {
    if (a.path.hops() != b.path.hops()) return a.path.hops() < b.path.hops();
    if (a.total_delay != b.total_delay) return a.total_delay < b.total_delay;
    const auto& an = a.path.nodes;
    const auto& bn = b.path.nodes;
    for (std::size_t i = 0; i < an.size() && i < bn.size(); ++i) {
      const std::string& ai = net.node(an[i]).id;
      const std::string& bi = net.node(bn[i]).id;
      if (ai != bi) return ai < bi;
    }
    return an.size() < bn.size();
  });
  if (limit >= 0 && static_cast<int>(found.size()) > limit) found.resize(static_cast<std::size_t>(limit));
  std::vector<Path> out;
  out.reserve(found.size());
  for (auto& f : found) out.push_back(std::move(f.path));
  return out;
}

} // namespace fdip
