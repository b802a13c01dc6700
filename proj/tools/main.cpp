#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cvqd/io.hpp"
#include "cvqd/stability.hpp"
#include "cvqd/sweep.hpp"

// Steady-state simulator for two coupled hybrid optomechanical cavities with
// intracavity BECs. Subcommands:
//   sweep      discord vs normalized detuning, CSV/JSON/SVG outputs
//   stability  characteristic-polynomial coefficients and Routh verdicts
//   info       preset catalog and quadrature/block index conventions

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;    // validation / parse errors
constexpr int kExitNumeric = 2;  // every grid point failed numerically

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

struct GridFlags {
  double from = 0.0;
  double to = 15.0;
  int steps = 301;
  bool from_set = false, to_set = false, steps_set = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--from", from, "sweep start, in units of omega_m")
        ->each([this](const std::string&) { from_set = true; });
    cmd->add_option("--to", to, "sweep end, in units of omega_m")
        ->each([this](const std::string&) { to_set = true; });
    cmd->add_option("--steps", steps, "number of grid points")
        ->each([this](const std::string&) { steps_set = true; });
  }

  void apply(cvqd::GridSpec& grid) const {
    if (from_set) grid.from = from;
    if (to_set) grid.to = to;
    if (steps_set) grid.steps = steps;
  }
};

std::vector<int> parse_block_list(const std::string& text) {
  std::vector<int> blocks;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      blocks.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw cvqd::ValidationError("blocks", "expected comma-separated integers");
    }
  }
  std::sort(blocks.begin(), blocks.end());
  blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
  return blocks;
}

int run_sweep_command(const std::string& config_path, const std::string& scenario,
                      const std::string& blocks, const GridFlags& grid_flags,
                      const std::string& csv, const std::string& json,
                      const std::string& svg, const std::string& variant, int threads) {
  cvqd::SweepSpec spec;
  if (!config_path.empty()) spec = cvqd::parse_config(read_file(config_path));
  if (!scenario.empty())
    spec.scenario = cvqd::scenario_preset(cvqd::scenario_id_from_string(scenario));
  if (!blocks.empty()) spec.blocks = parse_block_list(blocks);
  grid_flags.apply(spec.grid);
  if (!csv.empty()) spec.outputs.csv = csv;
  if (!json.empty()) spec.outputs.json = json;
  if (!svg.empty()) spec.outputs.svg = svg;
  if (variant == "standard")
    spec.variant = cvqd::DiscordVariant::Standard;
  else if (variant == "literal-paper")
    spec.variant = cvqd::DiscordVariant::LiteralPaper;
  else if (!variant.empty())
    throw cvqd::ValidationError("variant", "must be 'standard' or 'literal-paper'");
  spec.validate();

  const std::vector<cvqd::OutputRow> rows = cvqd::run_sweep(spec, threads);

  if (!spec.outputs.csv.empty()) cvqd::emit_csv(rows, spec.outputs.csv);
  if (!spec.outputs.json.empty()) cvqd::emit_json(rows, spec, spec.outputs.json);
  if (!spec.outputs.svg.empty()) cvqd::emit_plot(rows, spec.outputs.svg);
  if (spec.outputs.csv.empty() && spec.outputs.json.empty() && spec.outputs.svg.empty())
    std::fputs(cvqd::csv_string(rows).c_str(), stdout);

  const bool any_value =
      std::any_of(rows.begin(), rows.end(),
                  [](const cvqd::OutputRow& r) { return r.discord.has_value(); });
  if (!any_value) {
    std::fputs("cvqd: no grid point produced Gaussian quantities\n", stderr);
    return kExitNumeric;
  }
  return kExitOk;
}

int run_stability_command(const std::string& scenario, const GridFlags& grid_flags,
                          const std::string& csv) {
  cvqd::SweepSpec spec;
  if (!scenario.empty())
    spec.scenario = cvqd::scenario_preset(cvqd::scenario_id_from_string(scenario));
  grid_flags.apply(spec.grid);
  spec.validate();

  const std::vector<cvqd::StabilityRow> rows =
      cvqd::stability_sweep(spec.scenario.params, cvqd::grid_points(spec.grid));
  const std::string table = cvqd::stability_csv_string(rows);
  if (csv.empty())
    std::fputs(table.c_str(), stdout);
  else
    cvqd::write_file(csv, table);
  return kExitOk;
}

int run_info_command() {
  std::puts("presets (rates in units of omega_m; kappa = 14*2pi, mu = S = 8*2pi,");
  std::puts("gamma_m = gamma_sm = 100*2pi, Omega = 10*2pi for all):");
  std::puts("  id   nbar     N     J     M");
  for (auto id : {cvqd::ScenarioId::A, cvqd::ScenarioId::B, cvqd::ScenarioId::C,
                  cvqd::ScenarioId::D}) {
    const cvqd::Scenario s = cvqd::scenario_preset(id);
    std::printf("  %-4s %-8g %-5g %-5g %g\n", cvqd::to_string(id),
                s.params.cavity_a.nbar, s.params.N_sq, s.params.J, s.params.M_sq);
  }
  std::puts("\nquadrature order:");
  for (int i = 0; i < cvqd::kStateDim; ++i)
    std::printf("  %2d  %s\n", i + 1, cvqd::state_names()[i]);
  std::puts("\ntwo-mode blocks (1-based covariance indices):");
  const char* roles[] = {"photon-phonon A",    "photon-phonon B",
                         "mechanical modes",   "cavity modes",
                         "BEC A - mechanics A", "BEC B - mechanics B",
                         "BEC A - optics A",    "BEC B - optics B"};
  for (int b = 1; b <= cvqd::kBlockCount; ++b) {
    const auto idx = cvqd::block_indices(b);
    std::printf("  %d  {%d,%d,%d,%d}  %s\n", b, idx[0] + 1, idx[1] + 1, idx[2] + 1,
                idx[3] + 1, roles[b - 1]);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steady-state Gaussian discord and stability analysis of two "
               "coupled hybrid optomechanical cavities"};
  app.require_subcommand(1);

  std::string config_path, scenario, blocks, csv, json, svg, variant;
  int threads = 0;
  GridFlags sweep_grid, stability_grid;

  CLI::App* sweep = app.add_subcommand("sweep", "discord vs normalized detuning");
  sweep->add_option("--config", config_path, "key-value config file");
  sweep->add_option("--scenario", scenario, "preset id: a, b, c or d");
  sweep->add_option("--blocks", blocks, "comma-separated block ids (1..8)");
  sweep_grid.add_to(sweep);
  sweep->add_option("--csv", csv, "CSV output path");
  sweep->add_option("--json", json, "JSON output path");
  sweep->add_option("--svg", svg, "SVG output path");
  sweep->add_option("--variant", variant, "discord variant: standard | literal-paper");
  sweep->add_option("--threads", threads, "worker count (0 = hardware)");

  std::string stability_scenario, stability_csv;
  CLI::App* stability = app.add_subcommand("stability", "Routh-Hurwitz sweep");
  stability->add_option("--scenario", stability_scenario, "preset id: a, b, c or d");
  stability_grid.add_to(stability);
  stability->add_option("--csv", stability_csv, "CSV output path (default: stdout)");

  CLI::App* info = app.add_subcommand("info", "preset catalog and index conventions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sweep->parsed())
      return run_sweep_command(config_path, scenario, blocks, sweep_grid, csv, json,
                               svg, variant, threads);
    if (stability->parsed())
      return run_stability_command(stability_scenario, stability_grid, stability_csv);
    if (info->parsed()) return run_info_command();
  } catch (const cvqd::ParseError& e) {
    std::fprintf(stderr, "cvqd: config %s\n", e.what());
    return kExitUsage;
  } catch (const cvqd::ValidationError& e) {
    std::fprintf(stderr, "cvqd: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "cvqd: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
