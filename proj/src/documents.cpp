#include "fdip/documents.hpp"

#include <fstream>
#include <set>

#include "fdip/errors.hpp"

namespace fdip {

namespace {

std::int64_t require_int(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key))
    throw validation_error(where + ": missing field '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw validation_error(where + ": field '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_string())
    throw validation_error(where + ": missing string field '" + key + "'");
  return obj.at(key).get<std::string>();
}

Ticks ns_to_ticks(std::int64_t ns, std::int64_t tick_ns, const std::string& where) {
  if (ns % tick_ns != 0)
    throw validation_error(where + ": " + std::to_string(ns) +
                           " ns is not a multiple of the tick (" +
                           std::to_string(tick_ns) + " ns)");
  return ns / tick_ns;
}

} // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw validation_error("malformed JSON in '" + path + "': " + e.what());
  }
  return doc;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw validation_error("cannot write file '" + path + "'");
  out << text;
}

Network load_topology(const json& doc, std::int64_t tick_ns) {
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("links"))
    throw validation_error("topology: document must have 'nodes' and 'links'");
  Network net;
  for (const json& n : doc.at("nodes")) {
    const std::string id = require_string(n, "id", "topology node");
    const std::int64_t offset_ns =
        n.contains("clock_offset_ns") ? require_int(n, "clock_offset_ns", "node " + id) : 0;
    net.add_node(id, ns_to_ticks(offset_ns, tick_ns, "node " + id));
  }
  for (const json& l : doc.at("links")) {
    const std::string src = require_string(l, "src", "topology link");
    const std::string dst = require_string(l, "dst", "topology link");
    const std::string where = "link (" + src + " -> " + dst + ")";
    net.add_link(src, dst, ns_to_ticks(require_int(l, "delay_ns", where), tick_ns, where),
                 require_int(l, "bandwidth_bps", where));
  }
  return net;
}

Network load_topology_file(const std::string& path, std::int64_t tick_ns) {
  return load_topology(load_json_file(path), tick_ns);
}

json save_topology(const Network& net, std::int64_t tick_ns) {
  json nodes = json::array();
  for (const Node& n : net.nodes())
    nodes.push_back({{"id", n.id}, {"clock_offset_ns", n.clock_offset * tick_ns}});
  json links = json::array();
  for (const Link& l : net.links())
    links.push_back({{"src", net.node(l.src).id},
                     {"dst", net.node(l.dst).id},
                     {"delay_ns", l.delay * tick_ns},
                     {"bandwidth_bps", l.bandwidth_bps}});
  return json{{"nodes", nodes}, {"links", links}};
}

std::vector<Ticks> demand_periods(const json& doc, std::int64_t tick_ns) {
  std::vector<Ticks> periods;
  if (!doc.is_object() || !doc.contains("demands"))
    throw validation_error("demands: document must have a 'demands' array");
  for (const json& d : doc.at("demands"))
    if (d.contains("period_ns") && !d.at("period_ns").is_null())
      periods.push_back(ns_to_ticks(require_int(d, "period_ns", "demand"), tick_ns, "demand period"));
  return periods;
}

std::vector<Demand> load_demands(const json& doc, const Network& net,
                                 const GroupLadder& ladder) {
  if (!doc.is_object() || !doc.contains("demands"))
    throw validation_error("demands: document must have a 'demands' array");
  const std::int64_t tick_ns = ladder.tick_ns();
  const std::int64_t unitary_cycles = ladder.cycles_per_hypercycle(0);
  std::vector<Demand> demands;
  std::set<std::string> seen;
  for (const json& row : doc.at("demands")) {
    Demand d;
    d.id = require_string(row, "id", "demand");
    const std::string where = "demand '" + d.id + "'";
    if (!seen.insert(d.id).second)
      throw validation_error(where + ": duplicate id");
    d.src = net.node_index(require_string(row, "src", where));
    d.dst = net.node_index(require_string(row, "dst", where));
    if (d.src == d.dst)
      throw validation_error(where + ": source equals sink");
    if (row.contains("period_ns") && !row.at("period_ns").is_null())
      d.period = ns_to_ticks(require_int(row, "period_ns", where), tick_ns, where);
    else
      d.period = ladder.hypercycle();
    if (d.period <= 0) throw validation_error(where + ": nonpositive period");
    if (ladder.hypercycle() % d.period != 0)
      throw validation_error(where + ": period does not divide the hypercycle (" +
                             std::to_string(d.period * tick_ns) + " ns vs " +
                             std::to_string(ladder.hypercycle() * tick_ns) + " ns)");
    if (d.period % ladder.delta0() != 0)
      throw validation_error(where + ": period is not a multiple of the unitary cycle");
    d.arrival_cycle = require_int(row, "arrival_cycle", where);
    if (d.arrival_cycle < 0 || d.arrival_cycle >= unitary_cycles)
      throw validation_error(where + ": arrival_cycle out of [0, " +
                             std::to_string(unitary_cycles) + ")");
    const std::int64_t payload_bytes = require_int(row, "payload_bytes", where);
    if (payload_bytes <= 0) throw validation_error(where + ": nonpositive payload");
    d.payload_bits = payload_bytes * 8;
    d.max_latency = ns_to_ticks(require_int(row, "max_latency_ns", where), tick_ns, where);
    if (d.max_latency <= 0) throw validation_error(where + ": nonpositive max_latency");
    if (row.contains("max_jitter_ns") && !row.at("max_jitter_ns").is_null()) {
      d.max_jitter = ns_to_ticks(require_int(row, "max_jitter_ns", where), tick_ns, where);
      if (*d.max_jitter < 0) throw validation_error(where + ": negative max_jitter");
    }
    if (row.contains("value") && !row.at("value").is_null()) {
      if (!row.at("value").is_number())
        throw validation_error(where + ": 'value' must be a number");
      d.value = row.at("value").get<double>();
    }
    demands.push_back(std::move(d));
  }
  return demands;
}

std::vector<Demand> load_demands_file(const std::string& path, const Network& net,
                                      const GroupLadder& ladder) {
  return load_demands(load_json_file(path), net, ladder);
}

json save_demands(const std::vector<Demand>& demands, const Network& net,
                  std::int64_t tick_ns) {
  json rows = json::array();
  for (const Demand& d : demands) {
    json row{{"id", d.id},
             {"src", net.node(d.src).id},
             {"dst", net.node(d.dst).id},
             {"period_ns", d.period * tick_ns},
             {"arrival_cycle", d.arrival_cycle},
             {"payload_bytes", d.payload_bits / 8},
             {"max_latency_ns", d.max_latency * tick_ns},
             {"value", d.value}};
    if (d.max_jitter) row["max_jitter_ns"] = *d.max_jitter * tick_ns;
    rows.push_back(std::move(row));
  }
  return json{{"demands", rows}};
}

} // namespace fdip
