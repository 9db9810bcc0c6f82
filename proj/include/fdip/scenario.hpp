#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fdip/documents.hpp"
#include "fdip/ladder.hpp"
#include "fdip/network.hpp"
#include "fdip/planner.hpp"
#include "fdip/simulator.hpp"

namespace fdip {

/// Scenario document: ladder config plus references to the topology and
/// demand documents, planner and traffic settings, and the pipeline seed.
struct Scenario {
  std::int64_t tick_ns = 1;
  LadderConfig ladder; // delta0/multipliers in ticks after parsing
  std::string topology_path;
  std::string demands_path;
  PlannerConfig planner;
  TrafficConfig traffic;
  std::uint64_t seed = 1;
};

/// Scenario with its documents materialized into models.
struct LoadedScenario {
  Scenario scenario;
  GroupLadder ladder;
  Network net;
  std::vector<Demand> demands;
  std::string hash; // fingerprint binding scenario + topology + demands
};

Scenario parse_scenario(const json& doc, const std::string& base_dir);
LoadedScenario load_scenario_file(const std::string& path);
LoadedScenario materialize(const Scenario& scenario, const json& topology_doc,
                           const json& demands_doc);

struct PlanResult {
  Assignment assignment;
  std::vector<Candidate> candidates;
  json document; // serialized assignment, byte-deterministic
};

PlanResult plan_scenario(const LoadedScenario& loaded);

/// Reconstructs planned flows from an assignment document, re-deriving each
/// schedule and rejecting documents that do not match the scenario.
std::vector<PlannedFlow> flows_from_document(const json& assignment,
                                             const LoadedScenario& loaded);

struct SimResult {
  RunResult run;
  VerificationReport verification;
  std::string flowstats_csv;
  std::string samples_csv;
  json verify_doc;
};

SimResult simulate_flows(const LoadedScenario& loaded,
                         const std::vector<PlannedFlow>& flows);

/// Aggregates assignment/verification artifacts found under run directories
/// into a comparison table (one row per run).
std::string report_csv(const std::vector<std::string>& run_dirs);

// ---- CLI entry points (exit codes: 0 ok, 2 invalid input, 3 infeasible or
// verification failure, 4 internal limit) ----

struct CliOverrides {
  std::optional<std::string> mode;
  std::optional<int> hop_limit;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> horizon;
  std::optional<double> be_load;
};

int cmd_plan(const std::string& scenario_path, const CliOverrides& overrides);
int cmd_simulate(const std::string& scenario_path, const std::string& assignment_path,
                 const CliOverrides& overrides);
int cmd_verify(const std::string& scenario_path, const std::string& assignment_path,
               const CliOverrides& overrides);
int cmd_report(const std::string& run_dir, const std::optional<std::string>& out_file);
int cmd_sweep(const std::string& scenario_path, const std::string& axis,
              const std::vector<std::string>& values, const CliOverrides& overrides,
              int jobs);

} // namespace fdip
