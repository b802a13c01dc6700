#include "cvqd/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "cvqd/linalg.hpp"

namespace cvqd {

const char* to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::A: return "a";
    case ScenarioId::B: return "b";
    case ScenarioId::C: return "c";
    case ScenarioId::D: return "d";
    case ScenarioId::Custom: return "custom";
  }
  return "?";
}

ScenarioId scenario_id_from_string(const std::string& text) {
  if (text == "a") return ScenarioId::A;
  if (text == "b") return ScenarioId::B;
  if (text == "c") return ScenarioId::C;
  if (text == "d") return ScenarioId::D;
  if (text == "custom") return ScenarioId::Custom;
  throw ValidationError("scenario", "unknown scenario id '" + text + "'");
}

Scenario scenario_preset(ScenarioId id) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  CavityParams cavity{};
  cavity.omega_m = 1.0;
  cavity.kappa = 14.0 * two_pi;
  cavity.gamma_m = 100.0 * two_pi;
  cavity.gamma_sm = 100.0 * two_pi;
  cavity.Omega = 10.0 * two_pi;
  cavity.Delta = 0.0;
  cavity.mu = 8.0 * two_pi;
  cavity.S = 8.0 * two_pi;
  cavity.nbar = 0.0;

  Scenario scenario;
  scenario.id = id;
  scenario.params.cavity_a = cavity;
  scenario.params.cavity_b = cavity;
  scenario.params.J = 1.0;
  scenario.params.N_sq = 0.0;

  switch (id) {
    case ScenarioId::A:
    case ScenarioId::Custom:
      break;
    case ScenarioId::B:
      scenario.params.cavity_a.nbar = 836.0;
      scenario.params.cavity_b.nbar = 836.0;
      break;
    case ScenarioId::C:
      scenario.params.J = 0.5;
      break;
    case ScenarioId::D:
      scenario.params.cavity_a.nbar = 14642.0;
      scenario.params.cavity_b.nbar = 14642.0;
      scenario.params.N_sq = 0.1;
      break;
  }
  scenario.params.M_sq = ideal_squeezing_m(scenario.params.N_sq);
  return scenario;
}

void SweepSpec::validate() const {
  scenario.params.validate();
  if (blocks.empty()) throw ValidationError("blocks", "must name at least one block");
  for (int b : blocks)
    if (b < 1 || b > kBlockCount)
      throw ValidationError("blocks", "block id " + std::to_string(b) + " outside 1..8");
  if (!std::is_sorted(blocks.begin(), blocks.end()) ||
      std::adjacent_find(blocks.begin(), blocks.end()) != blocks.end())
    throw ValidationError("blocks", "must be sorted and free of duplicates");
  if (!std::isfinite(grid.from) || !std::isfinite(grid.to))
    throw ValidationError("grid", "bounds must be finite");
  if (!(grid.from < grid.to)) throw ValidationError("grid", "requires from < to");
  if (grid.steps < 2) throw ValidationError("steps", "must be >= 2");
}

std::vector<double> grid_points(const GridSpec& grid) {
  std::vector<double> points(grid.steps);
  for (int k = 0; k < grid.steps; ++k)
    points[k] = grid.from + (grid.to - grid.from) * k / (grid.steps - 1);
  return points;
}

namespace {

// All rows of one grid point, in block order.
std::vector<OutputRow> evaluate_point(const SweepSpec& spec, double ratio) {
  std::vector<OutputRow> rows(spec.blocks.size());
  for (std::size_t k = 0; k < spec.blocks.size(); ++k) {
    rows[k].delta_over_omega_m = ratio;
    rows[k].block_id = spec.blocks[k];
  }

  SystemParams point = spec.scenario.params;
  point.cavity_a.Delta = ratio * point.cavity_a.omega_m;
  point.cavity_b.Delta = ratio * point.cavity_b.omega_m;

  Eigen::MatrixXd covariance;
  try {
    covariance = solve_lyapunov(build_drift(point), build_diffusion(point));
  } catch (const UnstableDrift&) {
    return rows;  // stable = false, no Gaussian quantities
  } catch (const SingularSystem&) {
    return rows;
  } catch (const NoConvergence&) {
    return rows;
  }

  const Mat12 cov12 = covariance;
  for (std::size_t k = 0; k < spec.blocks.size(); ++k) {
    OutputRow& row = rows[k];
    row.stable = true;
    try {
      const DiscordReport report =
          gaussian_discord(extract_block(cov12, spec.blocks[k]), spec.variant);
      row.discord = report.discord;
      row.s_minus = report.s_minus;
      row.s_plus = report.s_plus;
      row.s_pt_minus = report.s_pt_minus;
      row.s_pt_plus = report.s_pt_plus;
      row.b1 = report.invariants.b1;
      row.b2 = report.invariants.b2;
      row.b3 = report.invariants.b3;
      row.b4 = report.invariants.b4;
      row.clamped = report.clamped;
    } catch (const std::exception&) {
      // block-level failure: leave the numeric fields empty
    }
  }
  return rows;
}

}  // namespace

std::vector<OutputRow> run_sweep(const SweepSpec& spec, int threads) {
  spec.validate();
  const std::vector<double> grid = grid_points(spec.grid);

  std::vector<std::vector<OutputRow>> per_point(grid.size());
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min<int>(workers, static_cast<int>(grid.size()));

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1))
      per_point[i] = evaluate_point(spec, grid[i]);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  // emission order: by (block_id, grid index), independent of scheduling
  std::vector<OutputRow> rows;
  rows.reserve(grid.size() * spec.blocks.size());
  for (std::size_t k = 0; k < spec.blocks.size(); ++k)
    for (std::size_t i = 0; i < grid.size(); ++i)
      rows.push_back(per_point[i][k]);
  return rows;
}

}  // namespace cvqd
