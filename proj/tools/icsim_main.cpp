#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "criteria.hpp"
#include "icsim/analysis.hpp"
#include "icsim/experiments.hpp"
#include "icsim/sim.hpp"

namespace fs = std::filesystem;
using namespace icsim;

namespace {

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed) {
  ScenarioConfig cfg;
  try {
    cfg = load_scenario(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "invalid config (" << e.field << "): " << e.what() << "\n";
    return 2;
  }
  if (seed) cfg.seed = *seed;

  auto res = run(cfg);
  fs::create_directories(out_dir);
  {
    std::ofstream trace(fs::path(out_dir) / "trace.csv");
    write_trace_csv(trace, res.trace, cfg);
  }
  std::string summary = verdict_summary(res.verdict, cfg);
  {
    std::ofstream vf(fs::path(out_dir) / "verdict.txt");
    vf << summary;
  }
  std::cout << summary;
  return res.verdict.safe && res.verdict.both_crossed ? 0 : 1;
}

int cmd_sweep_failures(int max_f, const std::string& out_dir) {
  auto rows = failure_grid(max_f);
  fs::create_directories(out_dir);
  std::ofstream out(fs::path(out_dir) / "sweep_failures.csv");
  write_grid_csv(out, rows);
  int mismatches = 0;
  for (const GridRow& r : rows)
    if (!r.match) ++mismatches;
  std::cout << rows.size() << " cells, " << mismatches << " mismatches\n";
  return mismatches == 0 ? 0 : 1;
}

int cmd_expected_delay(const std::string& env, const std::vector<double>& xis,
                       double dmin, double dmax, double dstep,
                       const std::string& out_dir, double slot_duration) {
  DelaySweepSpec spec;
  spec.model = env == "harsh" ? PdrModel::harsh() : PdrModel::open_field();
  for (double xi : xis) {
    if (xi >= 1.0) {
      std::cerr << "xi = " << xi
                << " rejected: the expected delay diverges as xi approaches 1 "
                   "(an unbounded loss burst); use a different technology "
                   "instead of this protocol\n";
      return 2;
    }
    if (xi < 0.0) {
      std::cerr << "xi = " << xi << " rejected: must be in [0,1)\n";
      return 2;
    }
  }
  spec.xis = xis;
  if (dstep <= 0 || dmax < dmin || dmin < 0) {
    std::cerr << "invalid distance range\n";
    return 2;
  }
  for (double d = dmin; d <= dmax + 1e-9; d += dstep) spec.distances.push_back(d);

  auto rows = delay_sweep(spec);
  fs::create_directories(out_dir);
  std::ofstream out(fs::path(out_dir) / "expected_delay.csv");
  write_delay_csv(out, rows, spec, slot_duration);
  std::cout << rows.size() << " rows written\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-car intersection-crossing simulator and analysis toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  auto* sim = app.add_subcommand("simulate", "Run one scenario; exit 0 iff safe and both cars crossed");
  sim->add_option("--config", config_path, "scenario file (JSON)")->required();
  sim->add_option("--out", out_dir, "output directory");
  sim->add_option("--seed", seed, "override the scenario seed");

  int max_f = 10;
  std::string sweep_out = ".";
  auto* sweep = app.add_subcommand(
      "sweep-failures", "Simulate every (f1,f2) burst pair against the closed form");
  sweep->add_option("--max-f", max_f, "grid upper bound")->check(CLI::NonNegativeNumber);
  sweep->add_option("--out", sweep_out, "output directory");

  std::string env = "open";
  std::vector<double> xis{0.0, 0.5, 0.7, 0.9};
  double dmin = 0.0, dmax = 500.0, dstep = 10.0;
  double slot_duration = 0.1;
  std::string delay_out = ".";
  auto* delay = app.add_subcommand("expected-delay",
                                   "Expected ENTER delay vs distance and correlation");
  delay->add_option("--env", env, "pdr environment preset")
      ->check(CLI::IsMember({"open", "harsh"}));
  delay->add_option("--xi", xis, "correlation values (0 = independent)");
  delay->add_option("--dmin", dmin, "start distance, m");
  delay->add_option("--dmax", dmax, "end distance, m");
  delay->add_option("--dstep", dstep, "distance step, m");
  delay->add_option("--out", delay_out, "output directory");

  auto* verify = app.add_subcommand("verify", "Run the full verification suite");

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) return cmd_simulate(config_path, out_dir, seed);
  if (sweep->parsed()) return cmd_sweep_failures(max_f, sweep_out);
  if (delay->parsed())
    return cmd_expected_delay(env, xis, dmin, dmax, dstep, delay_out, slot_duration);
  if (verify->parsed())
    return acceptance::report(acceptance::run_all()) == 0 ? 0 : 1;
  return 1;
}
