#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "cli/commands.hpp"

namespace cli = cascade::cli;

int main(int argc, char** argv) {
  CLI::App app{"Cascading-failure simulator and equilibrium analyzer for cross-holding networks"};
  app.require_subcommand(1);

  cli::GlobalOptions global;
  std::string out_dir = global.out_dir.string();
  std::uint64_t seed = 0;
  app.add_flag("--json", global.json, "Machine-readable JSON report");
  app.add_option("--out", out_dir, "Directory for trajectory and topology files")
      ->capture_default_str();
  auto* seed_opt = app.add_option("--seed-override", seed, "Replace every generator seed in the scenario");
  app.add_flag("--force", global.force, "Allow --seed-override on scenarios with pinned seeds");

  std::string scenario;
  auto add_scenario = [&](CLI::App* sub) {
    sub->add_option("scenario", scenario, "Scenario file or directory of *.scenario files")
        ->required();
    sub->fallthrough();
  };

  cli::SimulateOptions sim;
  std::vector<std::size_t> snapshots;
  std::string topo = "dot";
  auto* simulate = app.add_subcommand("simulate", "Run the dynamics and write trajectory/topology files");
  add_scenario(simulate);
  auto* snap_opt = simulate->add_option("--snapshots", snapshots, "Topology snapshot times")->delimiter(',');
  simulate->add_option("--topology-format", topo, "dot or json")
      ->check(CLI::IsMember({"dot", "json"}))
      ->capture_default_str();

  cli::EquilibriaOptions eq;
  std::string certificate;
  auto* equilibria = app.add_subcommand("equilibria", "Regime classification and equilibrium enumeration");
  add_scenario(equilibria);
  equilibria->add_flag("--enumerate", eq.enumerate, "Enumerate all 2^n orthant candidates");
  equilibria->add_flag("--regime", eq.regime, "Report existence/uniqueness conditions and n_F bounds");
  equilibria->add_option("--certificate", certificate,
                         "No-all-fail certificate on a principal submatrix: 'all' or 0-based indices, comma separated");
  equilibria->add_option("--max-n", eq.max_n, "Enumeration size limit")->capture_default_str();

  cli::SigniterOptions si;
  std::string direction = "both";
  auto* signiter = app.add_subcommand("signiter", "Worst/best-case sign-space iteration");
  add_scenario(signiter);
  signiter->add_option("--direction", direction, "worst, best or both")
      ->check(CLI::IsMember({"worst", "best", "both"}))
      ->capture_default_str();
  signiter->add_flag("--trace", si.trace, "Print every iterate and its safe-node set");

  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario");
  add_scenario(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kInputError;
  }

  global.out_dir = out_dir;
  if (seed_opt->count() > 0) global.seed_override = seed;

  cli::CommandOutcome outcome;
  if (simulate->parsed()) {
    if (snap_opt->count() > 0) sim.snapshot_times = snapshots;
    sim.topology_format = topo == "json" ? cascade::TopologyFormat::Json : cascade::TopologyFormat::Dot;
    outcome = cli::cmd_simulate(scenario, global, sim);
  } else if (equilibria->parsed()) {
    if (certificate == "all") {
      eq.certificate_all = true;
    } else if (!certificate.empty()) {
      std::vector<std::size_t> idx;
      std::stringstream ss(certificate);
      std::string item;
      try {
        while (std::getline(ss, item, ',')) idx.push_back(std::stoul(item));
      } catch (const std::exception&) {
        std::cerr << "--certificate expects 'all' or comma-separated indices\n";
        return cli::kInputError;
      }
      eq.certificate_indices = idx;
    }
    outcome = cli::cmd_equilibria(scenario, global, eq);
  } else if (signiter->parsed()) {
    si.direction = direction == "worst"  ? cli::SignDirection::Worst
                   : direction == "best" ? cli::SignDirection::Best
                                         : cli::SignDirection::Both;
    outcome = cli::cmd_signiter(scenario, global, si);
  } else if (validate->parsed()) {
    outcome = cli::cmd_validate(scenario, global);
  }

  (outcome.exit_code == cli::kSuccess ? std::cout : std::cerr) << outcome.report;
  return outcome.exit_code;
}
