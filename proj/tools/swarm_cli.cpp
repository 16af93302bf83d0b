#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "swarm/sim.hpp"
#include "swarm/world.hpp"

namespace {

struct RunSpec {
  std::string scenario;
  std::string fleet;
  int seed = -1;
  int max_ticks = 20000;
  std::string out;
  int stride = -1;
  double voxel_size = -1.0;
  bool no_return = false;
};

swarm::Scenario load_with_overrides(const RunSpec& spec) {
  swarm::ScenarioOverrides ovr;
  if (!spec.fleet.empty()) {
    auto [e, p] = swarm::parse_fleet_spec(spec.fleet);
    ovr.exd_count = e;
    ovr.pgd_count = p;
  }
  if (spec.seed >= 0) ovr.seed = static_cast<std::uint32_t>(spec.seed);
  if (spec.stride > 0) ovr.stride = spec.stride;
  if (spec.voxel_size > 0) ovr.voxel_size = spec.voxel_size;
  swarm::Scenario sc = swarm::load_scenario(spec.scenario, ovr);
  if (spec.no_return) sc.config.return_home = false;
  return sc;
}

// Returns 0 on a terminating mission, 2 on timeout.
int execute_run(const RunSpec& spec, const std::filesystem::path& out_dir,
                swarm::MissionReport* report_out) {
  swarm::Scenario sc = load_with_overrides(spec);
  swarm::Simulation sim(std::move(sc));
  swarm::MissionReport report = sim.run(spec.max_ticks);
  swarm::write_outputs(sim, report, out_dir);
  std::cout << (report.completed ? "completed" : "timeout") << " ticks="
            << report.ticks_run << " score=" << nlohmann::json(report.total_score).dump()
            << " coverage=" << nlohmann::json(report.coverage).dump() << "\n";
  if (report_out) *report_out = report;
  return report.completed ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heterogeneous UAV swarm inspection simulator"};
  app.require_subcommand(1);

  RunSpec spec;
  std::vector<std::string> fleets;
  std::vector<int> seeds;

  CLI::App* run = app.add_subcommand("run", "Run one mission and write its reports");
  run->add_option("--scenario", spec.scenario, "Scenario file (.scn)")->required();
  run->add_option("--fleet", spec.fleet, "Fleet override, e.g. 2E3P");
  run->add_option("--seed", spec.seed, "Defect-sampling seed override");
  run->add_option("--max-ticks", spec.max_ticks, "Tick budget")
      ->default_val(20000);
  run->add_option("--out", spec.out, "Output directory")->default_val("out");
  run->add_option("--stride", spec.stride, "Inspection layer stride override");
  run->add_option("--voxel-size", spec.voxel_size, "Planning voxel edge override");
  run->add_flag("--no-return", spec.no_return,
                "Test hook: skip the return-home leg (undelivered captures score 0)");

  CLI::App* sweep = app.add_subcommand("sweep", "Run a fleet/seed grid and tabulate");
  sweep->add_option("--scenario", spec.scenario, "Scenario file (.scn)")->required();
  sweep->add_option("--fleet", fleets, "Fleet specs, e.g. 1E0P 1E2P")->required();
  sweep->add_option("--seed", seeds, "Seeds (default 1)");
  sweep->add_option("--max-ticks", spec.max_ticks, "Tick budget per run")
      ->default_val(20000);
  sweep->add_option("--out", spec.out, "Output directory")->default_val("out");
  sweep->add_option("--stride", spec.stride, "Inspection layer stride override");
  sweep->add_option("--voxel-size", spec.voxel_size, "Planning voxel edge override");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return execute_run(spec, spec.out, nullptr);

    if (seeds.empty()) seeds.push_back(1);
    std::filesystem::create_directories(spec.out);
    std::ofstream table(std::filesystem::path(spec.out) / "sweep.csv",
                        std::ios::binary);
    table << "fleet,seed,score,completion_tick\n";
    int worst = 0;
    for (const std::string& fleet : fleets) {
      for (int seed : seeds) {
        RunSpec one = spec;
        one.fleet = fleet;
        one.seed = seed;
        std::filesystem::path dir =
            std::filesystem::path(spec.out) / (fleet + "_s" + std::to_string(seed));
        swarm::MissionReport rep;
        int code = execute_run(one, dir, &rep);
        worst = std::max(worst, code);
        table << fleet << "," << seed << ","
              << nlohmann::json(rep.total_score).dump() << ","
              << rep.completion_tick << "\n";
      }
    }
    return worst;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
