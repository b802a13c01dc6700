#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cvqd/gaussian.hpp"
#include "cvqd/model.hpp"

// Scenario presets and the discord-vs-detuning sweep engine. Grid points are
// independent work items; rows come back sorted by (block_id, detuning) and
// are bit-identical for any worker count.

namespace cvqd {

enum class ScenarioId { A, B, C, D, Custom };

const char* to_string(ScenarioId id);
ScenarioId scenario_id_from_string(const std::string& text);

struct Scenario {
  ScenarioId id = ScenarioId::Custom;
  SystemParams params{};

  bool operator==(const Scenario&) const = default;
};

/// Preset parameter sets in mechanical-frequency units (omega_m = 1):
/// kappa = 14*2pi, mu = S = 8*2pi, gamma_m = gamma_sm = 100*2pi,
/// Omega = 10*2pi, with per-preset (nbar, N, J) and M = sqrt(N(N+1)).
Scenario scenario_preset(ScenarioId id);

struct GridSpec {
  double from = 0.0;
  double to = 15.0;
  int steps = 301;

  bool operator==(const GridSpec&) const = default;
};

struct OutputPaths {
  std::string csv;
  std::string json;
  std::string svg;

  bool operator==(const OutputPaths&) const = default;
};

struct SweepSpec {
  Scenario scenario = scenario_preset(ScenarioId::A);
  std::vector<int> blocks = {1, 2, 3, 4, 5, 6, 7, 8};
  GridSpec grid{};
  OutputPaths outputs{};
  DiscordVariant variant = DiscordVariant::Standard;

  void validate() const;  // throws ValidationError
  bool operator==(const SweepSpec&) const = default;
};

/// One sweep result: missing numeric fields mean the grid point produced no
/// Gaussian quantities (unstable drift or a per-point numerical failure).
struct OutputRow {
  double delta_over_omega_m = 0.0;
  int block_id = 0;
  std::optional<double> discord;
  std::optional<double> s_minus, s_plus;
  std::optional<double> s_pt_minus, s_pt_plus;
  std::optional<double> b1, b2, b3, b4;
  bool clamped = false;
  bool stable = false;
};

/// Runs the sweep on `threads` workers (0 = hardware concurrency). Per-point
/// failures are recorded as row flags and never abort the sweep.
std::vector<OutputRow> run_sweep(const SweepSpec& spec, int threads = 0);

/// Equally spaced grid: from + k*(to-from)/(steps-1).
std::vector<double> grid_points(const GridSpec& grid);

}  // namespace cvqd
