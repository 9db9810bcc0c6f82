#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdip/scenario.hpp"

namespace {

void add_common(CLI::App* cmd, std::string& scenario, fdip::CliOverrides& o) {
  cmd->add_option("--scenario", scenario, "scenario document (JSON)")->required();
  cmd->add_option("--seed", o.seed, "pipeline seed override");
  cmd->add_option("--out", o.out_dir, "output directory");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"FDIP planning and verification toolkit"};
  app.require_subcommand(1);

  std::string scenario, assignment, run_dir, axis;
  std::vector<std::string> values;
  std::optional<std::string> report_out;
  int jobs = 1;
  fdip::CliOverrides o;

  CLI::App* plan = app.add_subcommand("plan", "compute an admission plan");
  add_common(plan, scenario, o);
  plan->add_option("--mode", o.mode, "bnb | greedy | oracle");
  plan->add_option("--hop-limit", o.hop_limit, "max hops per path (H)");

  CLI::App* simulate =
      app.add_subcommand("simulate", "replay a plan and verify measured bounds");
  add_common(simulate, scenario, o);
  simulate->add_option("--assignment", assignment, "assignment document")->required();
  simulate->add_option("--horizon", o.horizon, "hypercycles to simulate (>= 2)");
  simulate->add_option("--be-load", o.be_load, "best-effort utilization in [0, 1)");

  CLI::App* verify = app.add_subcommand("verify", "re-simulate and check bounds only");
  add_common(verify, scenario, o);
  verify->add_option("--assignment", assignment, "assignment document")->required();
  verify->add_option("--horizon", o.horizon, "hypercycles to simulate (>= 2)");
  verify->add_option("--be-load", o.be_load, "best-effort utilization in [0, 1)");

  CLI::App* report = app.add_subcommand("report", "aggregate runs into a table");
  report->add_option("--dir", run_dir, "directory holding run outputs")->required();
  report->add_option("--out", report_out, "report file (default <dir>/report.csv)");

  CLI::App* sweep = app.add_subcommand("sweep", "plan+simulate across one axis");
  add_common(sweep, scenario, o);
  sweep->add_option("--axis", axis, "be-load | hop-limit | delta0-ns")->required();
  sweep->add_option("--values", values, "axis values")->required()->delimiter(',');
  sweep->add_option("--hop-limit", o.hop_limit, "hop limit for non-H axes");
  sweep->add_option("--horizon", o.horizon, "hypercycles to simulate");
  sweep->add_option("--jobs", jobs, "parallel sweep workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (plan->parsed()) return fdip::cmd_plan(scenario, o);
  if (simulate->parsed()) return fdip::cmd_simulate(scenario, assignment, o);
  if (verify->parsed()) return fdip::cmd_verify(scenario, assignment, o);
  if (report->parsed()) return fdip::cmd_report(run_dir, report_out);
  if (sweep->parsed()) return fdip::cmd_sweep(scenario, axis, values, o, jobs);
  return 2;
}
