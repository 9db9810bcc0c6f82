#include "fdip/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <set>

#include "fdip/errors.hpp"
#include "fdip/hash.hpp"

namespace fdip {

namespace fs = std::filesystem;

namespace {

std::int64_t get_int(const json& obj, const char* key, std::int64_t fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  if (!obj.at(key).is_number_integer())
    throw validation_error(std::string("scenario: '") + key + "' must be an integer");
  return obj.at(key).get<std::int64_t>();
}

double get_double(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  if (!obj.at(key).is_number())
    throw validation_error(std::string("scenario: '") + key + "' must be a number");
  return obj.at(key).get<double>();
}

Ticks to_ticks(std::int64_t ns, std::int64_t tick_ns, const char* what) {
  if (ns % tick_ns != 0)
    throw validation_error(std::string("scenario: ") + what +
                           " is not a multiple of tick_ns");
  return ns / tick_ns;
}

PlanMode parse_mode(const std::string& mode) {
  if (mode == "bnb") return PlanMode::bnb;
  if (mode == "greedy") return PlanMode::greedy;
  if (mode == "oracle") return PlanMode::oracle;
  throw validation_error("scenario: unknown planner mode '" + mode + "'");
}

const char* mode_name(PlanMode mode) {
  switch (mode) {
    case PlanMode::bnb: return "bnb";
    case PlanMode::greedy: return "greedy";
    case PlanMode::oracle: return "oracle";
  }
  return "bnb";
}

std::string fmt_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

json scenario_fingerprint_doc(const Scenario& s) {
  // The parts an assignment depends on; traffic and seed are simulate-time.
  json ladder{{"delta0", s.ladder.delta0},
              {"multipliers", s.ladder.multipliers},
              {"queues_per_group", s.ladder.queues_per_group},
              {"tick_ns", s.tick_ns}};
  if (s.ladder.hypercycle_factor) ladder["hypercycle_factor"] = *s.ladder.hypercycle_factor;
  json planner{{"mode", mode_name(s.planner.mode)},
               {"hop_limit", s.planner.hop_limit},
               {"paths_per_demand", s.planner.paths_per_demand},
               {"xi", {s.planner.xi1, s.planner.xi2, s.planner.xi3}},
               {"max_nodes", s.planner.max_nodes},
               {"worst_first", s.planner.worst_first}};
  return json{{"ladder", ladder}, {"planner", planner}};
}

} // namespace

Scenario parse_scenario(const json& doc, const std::string& base_dir) {
  if (!doc.is_object()) throw validation_error("scenario: document must be an object");
  Scenario s;
  s.tick_ns = get_int(doc, "tick_ns", 1);
  if (s.tick_ns <= 0) throw validation_error("scenario: tick_ns must be positive");

  if (!doc.contains("ladder") || !doc.at("ladder").is_object())
    throw validation_error("scenario: missing 'ladder' object");
  const json& ladder = doc.at("ladder");
  s.ladder.tick_ns = s.tick_ns;
  s.ladder.delta0 = to_ticks(get_int(ladder, "delta0_ns", 0), s.tick_ns, "delta0_ns");
  if (!ladder.contains("multipliers") || !ladder.at("multipliers").is_array())
    throw validation_error("scenario: ladder needs a 'multipliers' array");
  for (const json& k : ladder.at("multipliers")) {
    if (!k.is_number_integer())
      throw validation_error("scenario: multipliers must be integers");
    s.ladder.multipliers.push_back(k.get<std::int64_t>());
  }
  s.ladder.queues_per_group = static_cast<int>(get_int(ladder, "queues_per_group", 4));
  if (ladder.contains("hypercycle_factor") && !ladder.at("hypercycle_factor").is_null())
    s.ladder.hypercycle_factor = get_int(ladder, "hypercycle_factor", 0);

  const auto resolve = [&](const std::string& rel) {
    fs::path p(rel);
    if (p.is_absolute()) return p.string();
    return (fs::path(base_dir) / p).string();
  };
  if (!doc.contains("topology") || !doc.at("topology").is_string())
    throw validation_error("scenario: missing 'topology' path");
  if (!doc.contains("demands") || !doc.at("demands").is_string())
    throw validation_error("scenario: missing 'demands' path");
  s.topology_path = resolve(doc.at("topology").get<std::string>());
  s.demands_path = resolve(doc.at("demands").get<std::string>());

  if (doc.contains("planner") && doc.at("planner").is_object()) {
    const json& p = doc.at("planner");
    if (p.contains("mode")) s.planner.mode = parse_mode(p.at("mode").get<std::string>());
    s.planner.hop_limit = static_cast<int>(get_int(p, "hop_limit", s.planner.hop_limit));
    s.planner.paths_per_demand =
        static_cast<int>(get_int(p, "paths_per_demand", s.planner.paths_per_demand));
    if (p.contains("xi")) {
      const json& xi = p.at("xi");
      if (!xi.is_array() || xi.size() != 3)
        throw validation_error("scenario: planner.xi must be [xi1, xi2, xi3]");
      s.planner.xi1 = xi[0].get<double>();
      s.planner.xi2 = xi[1].get<double>();
      s.planner.xi3 = xi[2].get<double>();
    }
    s.planner.max_nodes = get_int(p, "max_nodes", s.planner.max_nodes);
    s.planner.time_budget_ms = get_int(p, "time_budget_ms", s.planner.time_budget_ms);
    if (p.contains("worst_first")) s.planner.worst_first = p.at("worst_first").get<bool>();
    s.planner.oracle_cap = static_cast<int>(get_int(p, "oracle_cap", s.planner.oracle_cap));
  }
  if (s.planner.hop_limit < 1) throw validation_error("scenario: hop_limit must be >= 1");
  if (s.planner.paths_per_demand < 1)
    throw validation_error("scenario: paths_per_demand must be >= 1");

  if (doc.contains("traffic") && doc.at("traffic").is_object()) {
    const json& t = doc.at("traffic");
    s.traffic.be_utilization = get_double(t, "be_utilization", 0.0);
    s.traffic.be_packet_bits = get_int(t, "be_packet_bits", s.traffic.be_packet_bits);
    s.traffic.be_burst_packets =
        static_cast<int>(get_int(t, "be_burst_packets", s.traffic.be_burst_packets));
    s.traffic.horizon_hypercycles =
        static_cast<int>(get_int(t, "horizon_hypercycles", s.traffic.horizon_hypercycles));
  }
  s.seed = static_cast<std::uint64_t>(get_int(doc, "seed", 1));
  return s;
}

LoadedScenario materialize(const Scenario& scenario, const json& topology_doc,
                           const json& demands_doc) {
  LoadedScenario loaded{
      scenario,
      GroupLadder::build(scenario.ladder, demand_periods(demands_doc, scenario.tick_ns)),
      load_topology(topology_doc, scenario.tick_ns),
      {},
      {}};
  loaded.net.validate_offsets(loaded.ladder);
  loaded.demands = load_demands(demands_doc, loaded.net, loaded.ladder);

  Fnv1a64 hash;
  hash.add(scenario_fingerprint_doc(scenario).dump());
  hash.add(topology_doc.dump());
  hash.add(demands_doc.dump());
  loaded.hash = hash.hex();
  return loaded;
}

LoadedScenario load_scenario_file(const std::string& path) {
  const json doc = load_json_file(path);
  const Scenario scenario = parse_scenario(doc, fs::path(path).parent_path().string());
  return materialize(scenario, load_json_file(scenario.topology_path),
                     load_json_file(scenario.demands_path));
}

PlanResult plan_scenario(const LoadedScenario& loaded) {
  const Scenario& s = loaded.scenario;
  PlanResult result;
  result.candidates = build_candidates(loaded.ladder, loaded.net, loaded.demands, s.planner);
  switch (s.planner.mode) {
    case PlanMode::bnb:
      result.assignment = branch_and_bound(result.candidates, loaded.ladder, loaded.net,
                                           loaded.demands, s.planner);
      break;
    case PlanMode::greedy:
      result.assignment = greedy_baseline(result.candidates, loaded.ladder, loaded.net,
                                          loaded.demands, s.planner);
      break;
    case PlanMode::oracle:
      result.assignment = brute_force_oracle(result.candidates, loaded.ladder, loaded.net,
                                             loaded.demands, s.planner);
      break;
  }

  const std::int64_t tick_ns = s.tick_ns;
  json accepted = json::array();
  json rejected = json::array();
  for (std::size_t d = 0; d < loaded.demands.size(); ++d) {
    const int ci = result.assignment.chosen[d];
    if (ci < 0) {
      rejected.push_back(loaded.demands[d].id);
      continue;
    }
    const Candidate& cand = result.candidates[static_cast<std::size_t>(ci)];
    json path = json::array();
    for (NodeIndex v : cand.path.nodes) path.push_back(loaded.net.node(v).id);
    json delays = json::array();
    for (Ticks t : cand.schedule.acc_delays) delays.push_back(t * tick_ns);
    accepted.push_back(json{{"demand", loaded.demands[d].id},
                            {"path", path},
                            {"group", cand.group},
                            {"tx_cycles", cand.schedule.tx_cycles},
                            {"acc_delay_ns", delays},
                            {"e2e_bound_ns", cand.schedule.e2e_bound * tick_ns},
                            {"jitter_bound_ns", cand.schedule.jitter_bound * tick_ns}});
  }
  const SearchStats& st = result.assignment.stats;
  result.document = json{
      {"format", "fdip-assignment-v1"},
      {"scenario_hash", loaded.hash},
      {"mode", mode_name(s.planner.mode)},
      {"groups", loaded.ladder.group_count()},
      {"hop_limit", s.planner.hop_limit},
      {"hypercycle_ns", loaded.ladder.hypercycle() * tick_ns},
      {"objective", result.assignment.objective},
      {"accepted", accepted},
      {"rejected", rejected},
      {"stats", json{{"nodes_explored", st.nodes_explored},
                     {"nodes_pruned", st.nodes_pruned},
                     {"lp_solves", st.lp_solves},
                     {"incumbent_updates", st.incumbent_updates},
                     {"exhausted", st.exhausted},
                     {"gap", st.gap}}}};
  return result;
}

std::vector<PlannedFlow> flows_from_document(const json& assignment,
                                             const LoadedScenario& loaded) {
  if (!assignment.is_object() || assignment.value("format", "") != "fdip-assignment-v1")
    throw validation_error("assignment: unrecognized document format");
  if (assignment.value("scenario_hash", "") != loaded.hash)
    throw validation_error("assignment: scenario hash mismatch; replan for this scenario");

  std::map<std::string, int> demand_index;
  for (std::size_t d = 0; d < loaded.demands.size(); ++d)
    demand_index[loaded.demands[d].id] = static_cast<int>(d);

  std::vector<PlannedFlow> flows;
  for (const json& row : assignment.at("accepted")) {
    const std::string id = row.at("demand").get<std::string>();
    auto it = demand_index.find(id);
    if (it == demand_index.end())
      throw validation_error("assignment: unknown demand '" + id + "'");
    Path path;
    for (const json& node : row.at("path"))
      path.nodes.push_back(loaded.net.node_index(node.get<std::string>()));
    const int group = row.at("group").get<int>();
    PathSchedule schedule =
        trace_schedule(loaded.ladder, loaded.net, loaded.demands[static_cast<std::size_t>(it->second)],
                       it->second, path, group);
    const auto tx = row.at("tx_cycles").get<std::vector<std::int64_t>>();
    if (tx != schedule.tx_cycles ||
        row.at("e2e_bound_ns").get<std::int64_t>() !=
            schedule.e2e_bound * loaded.scenario.tick_ns)
      throw validation_error("assignment: schedule for demand '" + id +
                             "' does not match this scenario");
    flows.push_back(PlannedFlow{it->second, std::move(schedule)});
  }
  return flows;
}

SimResult simulate_flows(const LoadedScenario& loaded,
                         const std::vector<PlannedFlow>& flows) {
  const Scenario& s = loaded.scenario;
  SimResult out;
  out.run = run(loaded.ladder, loaded.net, loaded.demands, flows, s.traffic,
                s.traffic.horizon_hypercycles, s.seed);
  out.verification = verify_against_bounds(out.run, flows);

  const std::int64_t tick_ns = s.tick_ns;
  std::string csv =
      "flow,group,hops,delivered,dropped,min_delay_ns,max_delay_ns,mean_delay_ns,"
      "jitter_ns,e2e_bound_ns,jitter_bound_ns,bound_violations,pass\n";
  for (std::size_t fi = 0; fi < flows.size(); ++fi) {
    const FlowStats& st = out.run.flows[fi];
    const FlowVerification& v = out.verification.flows[fi];
    csv += loaded.demands[static_cast<std::size_t>(st.demand)].id;
    csv += "," + std::to_string(flows[fi].schedule.group);
    csv += "," + std::to_string(flows[fi].schedule.path.hops());
    csv += "," + std::to_string(st.delivered);
    csv += "," + std::to_string(st.dropped);
    csv += "," + std::to_string(st.min_delay * tick_ns);
    csv += "," + std::to_string(st.max_delay * tick_ns);
    csv += "," + fmt_fixed(st.mean_delay * static_cast<double>(tick_ns), 3);
    csv += "," + std::to_string(st.jitter * tick_ns);
    csv += "," + std::to_string(flows[fi].schedule.e2e_bound * tick_ns);
    csv += "," + std::to_string(flows[fi].schedule.jitter_bound * tick_ns);
    csv += "," + std::to_string(st.bound_violations);
    csv += std::string(",") + (v.pass ? "1" : "0") + "\n";
  }
  out.flowstats_csv = std::move(csv);

  std::string samples = "flow,seq,release_ns,delivery_ns,delay_ns\n";
  for (const PacketSample& p : out.run.samples) {
    samples += loaded.demands[static_cast<std::size_t>(p.demand)].id;
    samples += "," + std::to_string(p.seq);
    samples += "," + std::to_string(p.release * tick_ns);
    samples += "," + std::to_string(p.delivery * tick_ns);
    samples += "," + std::to_string(p.delay * tick_ns) + "\n";
  }
  out.samples_csv = std::move(samples);

  json flows_doc = json::array();
  for (const FlowVerification& v : out.verification.flows) {
    json offending = json::array();
    for (const PacketSample& p : v.offending) {
      json hops = json::array();
      for (const HopStamp& h : p.hops)
        hops.push_back(json{{"node", loaded.net.node(h.node).id},
                            {"time_ns", h.time * tick_ns}});
      offending.push_back(json{{"seq", p.seq},
                               {"delay_ns", p.delay * tick_ns},
                               {"release_ns", p.release * tick_ns},
                               {"hops", hops}});
    }
    flows_doc.push_back(
        json{{"demand", loaded.demands[static_cast<std::size_t>(v.demand)].id},
             {"pass", v.pass},
             {"max_delay_ns", v.max_delay * tick_ns},
             {"e2e_bound_ns", v.e2e_bound * tick_ns},
             {"jitter_ns", v.jitter * tick_ns},
             {"jitter_bound_ns", v.jitter_bound * tick_ns},
             {"dropped", v.dropped},
             {"offending", offending}});
  }
  out.verify_doc = json{{"all_pass", out.verification.all_pass},
                        {"gate_violations", out.verification.gate_violations},
                        {"flows", flows_doc}};
  return out;
}

std::string report_csv(const std::vector<std::string>& run_dirs) {
  std::string csv =
      "run,mode,groups,hop_limit,objective,gap,nodes_explored,exhausted,"
      "flows_pass,flows_total,max_delay_ns\n";
  bool any = false;
  for (const std::string& dir : run_dirs) {
    const fs::path assignment_path = fs::path(dir) / "assignment.json";
    if (!fs::exists(assignment_path)) continue;
    json doc;
    try {
      doc = load_json_file(assignment_path.string());
    } catch (const validation_error& e) {
      throw validation_error("report: unreadable '" + assignment_path.string() +
                             "': " + e.what());
    }
    any = true;
    csv += fs::path(dir).filename().string();
    csv += "," + doc.value("mode", "?");
    csv += "," + std::to_string(doc.value("groups", 0));
    csv += "," + std::to_string(doc.value("hop_limit", 0));
    csv += "," + std::to_string(doc.value("objective", 0));
    const json stats = doc.value("stats", json::object());
    csv += "," + fmt_fixed(stats.value("gap", 0.0), 3);
    csv += "," + std::to_string(stats.value("nodes_explored", std::int64_t{0}));
    csv += std::string(",") + (stats.value("exhausted", false) ? "1" : "0");

    int pass = 0, total = 0;
    std::int64_t max_delay = 0;
    const fs::path verify_path = fs::path(dir) / "verify.json";
    if (fs::exists(verify_path)) {
      json verify;
      try {
        verify = load_json_file(verify_path.string());
      } catch (const validation_error& e) {
        throw validation_error("report: unreadable '" + verify_path.string() + "': " +
                               e.what());
      }
      for (const json& f : verify.value("flows", json::array())) {
        ++total;
        if (f.value("pass", false)) ++pass;
        max_delay = std::max(max_delay, f.value("max_delay_ns", std::int64_t{0}));
      }
    }
    csv += "," + std::to_string(pass);
    csv += "," + std::to_string(total);
    csv += "," + std::to_string(max_delay) + "\n";
  }
  if (!any) throw validation_error("report: no assignment.json found under the run directory");
  return csv;
}

namespace {

Scenario apply_overrides(Scenario s, const CliOverrides& o) {
  if (o.mode) s.planner.mode = parse_mode(*o.mode);
  if (o.hop_limit) s.planner.hop_limit = *o.hop_limit;
  if (o.seed) s.seed = *o.seed;
  if (o.horizon) s.traffic.horizon_hypercycles = *o.horizon;
  if (o.be_load) s.traffic.be_utilization = *o.be_load;
  return s;
}

LoadedScenario load_with_overrides(const std::string& path, const CliOverrides& o) {
  const json doc = load_json_file(path);
  Scenario scenario =
      apply_overrides(parse_scenario(doc, fs::path(path).parent_path().string()), o);
  return materialize(scenario, load_json_file(scenario.topology_path),
                     load_json_file(scenario.demands_path));
}

std::string out_dir_for(const std::string& scenario_path, const CliOverrides& o) {
  if (o.out_dir) return *o.out_dir;
  return (fs::path(scenario_path).parent_path() / "out").string();
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const limit_error& e) {
    std::cerr << "limit: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return 4;
  }
}

} // namespace

int cmd_plan(const std::string& scenario_path, const CliOverrides& overrides) {
  return guarded([&] {
    const LoadedScenario loaded = load_with_overrides(scenario_path, overrides);
    const PlanResult plan = plan_scenario(loaded);
    const std::string out_dir = out_dir_for(scenario_path, overrides);
    fs::create_directories(out_dir);
    write_text_file((fs::path(out_dir) / "assignment.json").string(),
                    plan.document.dump(2) + "\n");
    const SearchStats& st = plan.assignment.stats;
    std::cout << "plan: objective " << plan.assignment.objective << " of "
              << loaded.demands.size() << " demands (mode "
              << mode_name(loaded.scenario.planner.mode) << ", H "
              << loaded.scenario.planner.hop_limit << ", nodes " << st.nodes_explored
              << ", gap " << fmt_fixed(st.gap, 3) << ")\n";
    std::cout << "plan: wrote " << (fs::path(out_dir) / "assignment.json").string() << "\n";
    return 0;
  });
}

namespace {

int simulate_common(const std::string& scenario_path, const std::string& assignment_path,
                    const CliOverrides& overrides, bool write_stats) {
  const LoadedScenario loaded = load_with_overrides(scenario_path, overrides);
  const json assignment = load_json_file(assignment_path);
  const std::vector<PlannedFlow> flows = flows_from_document(assignment, loaded);
  const SimResult sim = simulate_flows(loaded, flows);
  const std::string out_dir = out_dir_for(scenario_path, overrides);
  fs::create_directories(out_dir);
  if (write_stats) {
    write_text_file((fs::path(out_dir) / "flowstats.csv").string(), sim.flowstats_csv);
    write_text_file((fs::path(out_dir) / "samples.csv").string(), sim.samples_csv);
  }
  write_text_file((fs::path(out_dir) / "verify.json").string(),
                  sim.verify_doc.dump(2) + "\n");
  int pass = 0;
  for (const FlowVerification& v : sim.verification.flows) pass += v.pass;
  std::cout << (write_stats ? "simulate: " : "verify: ") << pass << "/"
            << sim.verification.flows.size() << " flows within bounds, "
            << sim.run.events_processed << " events, trace " << std::hex
            << sim.run.trace_hash << std::dec << "\n";
  if (!sim.verification.all_pass) {
    std::cerr << "verification failed: a measured flow exceeded its bound\n";
    return 3;
  }
  return 0;
}

} // namespace

int cmd_simulate(const std::string& scenario_path, const std::string& assignment_path,
                 const CliOverrides& overrides) {
  return guarded(
      [&] { return simulate_common(scenario_path, assignment_path, overrides, true); });
}

int cmd_verify(const std::string& scenario_path, const std::string& assignment_path,
               const CliOverrides& overrides) {
  return guarded(
      [&] { return simulate_common(scenario_path, assignment_path, overrides, false); });
}

int cmd_report(const std::string& run_dir, const std::optional<std::string>& out_file) {
  return guarded([&] {
    if (!fs::is_directory(run_dir))
      throw validation_error("report: '" + run_dir + "' is not a directory");
    std::vector<std::string> dirs;
    for (const auto& entry : fs::directory_iterator(run_dir))
      if (entry.is_directory()) dirs.push_back(entry.path().string());
    std::sort(dirs.begin(), dirs.end());
    if (fs::exists(fs::path(run_dir) / "assignment.json")) dirs.insert(dirs.begin(), run_dir);
    const std::string csv = report_csv(dirs);
    const std::string path =
        out_file ? *out_file : (fs::path(run_dir) / "report.csv").string();
    write_text_file(path, csv);
    std::cout << csv;
    return 0;
  });
}

int cmd_sweep(const std::string& scenario_path, const std::string& axis,
              const std::vector<std::string>& values, const CliOverrides& overrides,
              int jobs) {
  return guarded([&] {
    if (values.empty()) throw validation_error("sweep: no values given");
    if (axis != "be-load" && axis != "hop-limit" && axis != "delta0-ns")
      throw validation_error("sweep: axis must be be-load, hop-limit or delta0-ns");

    const std::string out_root = out_dir_for(scenario_path, overrides);
    fs::create_directories(out_root);

    struct Point {
      std::string value;
      std::string dir;
      int objective = 0;
      bool all_pass = false;
      std::int64_t max_delay_ns = 0;
      std::int64_t max_jitter_ns = 0;
    };

    const auto run_point = [&](const std::string& value) {
      const json doc = load_json_file(scenario_path);
      Scenario scenario = apply_overrides(
          parse_scenario(doc, fs::path(scenario_path).parent_path().string()), overrides);
      if (axis == "be-load")
        scenario.traffic.be_utilization = std::stod(value);
      else if (axis == "hop-limit")
        scenario.planner.hop_limit = std::stoi(value);
      else
        scenario.ladder.delta0 = to_ticks(std::stoll(value), scenario.tick_ns, "delta0_ns");

      const LoadedScenario loaded =
          materialize(scenario, load_json_file(scenario.topology_path),
                      load_json_file(scenario.demands_path));
      const PlanResult plan = plan_scenario(loaded);
      std::vector<PlannedFlow> flows;
      for (std::size_t d = 0; d < loaded.demands.size(); ++d) {
        const int ci = plan.assignment.chosen[d];
        if (ci >= 0)
          flows.push_back(PlannedFlow{
              static_cast<int>(d),
              plan.candidates[static_cast<std::size_t>(ci)].schedule});
      }
      const SimResult sim = simulate_flows(loaded, flows);

      Point point;
      point.value = value;
      point.dir = (fs::path(out_root) / (axis + "-" + value)).string();
      fs::create_directories(point.dir);
      write_text_file((fs::path(point.dir) / "assignment.json").string(),
                      plan.document.dump(2) + "\n");
      write_text_file((fs::path(point.dir) / "flowstats.csv").string(), sim.flowstats_csv);
      write_text_file((fs::path(point.dir) / "samples.csv").string(), sim.samples_csv);
      write_text_file((fs::path(point.dir) / "verify.json").string(),
                      sim.verify_doc.dump(2) + "\n");
      point.objective = plan.assignment.objective;
      point.all_pass = sim.verification.all_pass;
      for (const FlowVerification& v : sim.verification.flows) {
        point.max_delay_ns =
            std::max(point.max_delay_ns, v.max_delay * loaded.scenario.tick_ns);
        point.max_jitter_ns =
            std::max(point.max_jitter_ns, v.jitter * loaded.scenario.tick_ns);
      }
      return point;
    };

    std::vector<Point> points(values.size());
    if (jobs > 1) {
      std::vector<std::future<Point>> futures;
      futures.reserve(values.size());
      for (const std::string& v : values)
        futures.push_back(std::async(std::launch::async, run_point, v));
      for (std::size_t i = 0; i < futures.size(); ++i) points[i] = futures[i].get();
    } else {
      for (std::size_t i = 0; i < values.size(); ++i) points[i] = run_point(values[i]);
    }

    std::string csv = "axis,value,objective,all_pass,max_delay_ns,max_jitter_ns\n";
    bool all_pass = true;
    for (const Point& p : points) {
      csv += axis + "," + p.value + "," + std::to_string(p.objective) + "," +
             (p.all_pass ? "1" : "0") + "," + std::to_string(p.max_delay_ns) + "," +
             std::to_string(p.max_jitter_ns) + "\n";
      all_pass = all_pass && p.all_pass;
    }
    write_text_file((fs::path(out_root) / "sweep.csv").string(), csv);
    std::cout << csv;
    return all_pass ? 0 : 3;
  });
}

} // namespace fdip
