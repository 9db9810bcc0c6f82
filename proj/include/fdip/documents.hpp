#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fdip/ladder.hpp"
#include "fdip/network.hpp"

namespace fdip {

using json = nlohmann::json;

/// Document fields carry explicit units (_ns, _bps, _bytes); internally
/// everything is ticks and bits. tick_ns is the grid declared by the ladder.

Network load_topology(const json& doc, std::int64_t tick_ns);
Network load_topology_file(const std::string& path, std::int64_t tick_ns);
json save_topology(const Network& net, std::int64_t tick_ns);

/// Periods declared in a demand document, in ticks. Needed before the ladder
/// exists, because the hypercycle folds them in.
std::vector<Ticks> demand_periods(const json& doc, std::int64_t tick_ns);

/// Validates rows against the built ladder: periods divide the hypercycle
/// and sit on the unitary grid, arrival cycles are in range, payloads are
/// positive. Omitted period_ns defaults to the hypercycle.
std::vector<Demand> load_demands(const json& doc, const Network& net,
                                 const GroupLadder& ladder);
std::vector<Demand> load_demands_file(const std::string& path, const Network& net,
                                      const GroupLadder& ladder);
json save_demands(const std::vector<Demand>& demands, const Network& net,
                  std::int64_t tick_ns);

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace fdip
