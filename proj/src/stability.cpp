#include "cvqd/stability.hpp"

#include <cmath>

#include "cvqd/linalg.hpp"

namespace cvqd {

namespace {

// Routh table with the given sign of the epsilon substitution. Returns the
// first column and sets the substitution/degeneracy flags.
Eigen::VectorXd routh_first_column(const Eigen::VectorXd& coeffs, double eps_sign,
                                   bool* epsilon_used, bool* degenerate) {
  const int degree = static_cast<int>(coeffs.size()) - 1;
  const int ncols = degree / 2 + 1;
  const double eps = eps_sign * 1e-12 * coeffs.cwiseAbs().maxCoeff();

  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(degree + 1, ncols);
  for (int j = 0; 2 * j <= degree; ++j) rows(0, j) = coeffs[2 * j];
  for (int j = 0; 2 * j + 1 <= degree; ++j) rows(1, j) = coeffs[2 * j + 1];

  auto fix_pivot = [&](int i) {
    if (i > degree) return;
    if (rows.row(i).cwiseAbs().maxCoeff() == 0.0) {
      // whole row vanished: continue through the derivative of the
      // auxiliary polynomial formed from the row above (degree m)
      *degenerate = true;
      const int m = degree - (i - 1);
      for (int j = 0; j < ncols; ++j) rows(i, j) = (m - 2 * j) * rows(i - 1, j);
    }
    if (rows(i, 0) == 0.0) {
      *epsilon_used = true;
      rows(i, 0) = eps;
    }
  };

  fix_pivot(1);
  for (int i = 2; i <= degree; ++i) {
    const double pivot = rows(i - 1, 0);
    for (int j = 0; j + 1 < ncols; ++j)
      rows(i, j) = (pivot * rows(i - 2, j + 1) - rows(i - 2, 0) * rows(i - 1, j + 1)) / pivot;
    fix_pivot(i);
  }
  return rows.col(0);
}

int sign_changes(const Eigen::VectorXd& column) {
  int changes = 0;
  for (int i = 0; i + 1 < column.size(); ++i)
    if (column[i] * column[i + 1] < 0.0) ++changes;
  return changes;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::Unstable: return "unstable";
    case Verdict::Marginal: return "marginal";
  }
  return "?";
}

StabilityReport routh_hurwitz(const Eigen::VectorXd& coeffs) {
  if (coeffs.size() < 2)
    throw std::invalid_argument("routh_hurwitz: need degree >= 1");
  if (!coeffs.allFinite())
    throw std::invalid_argument("routh_hurwitz: coefficients contain NaN/Inf");
  if (std::abs(coeffs[0] - 1.0) > 1e-9)
    throw std::invalid_argument("routh_hurwitz: leading coefficient must be 1");

  StabilityReport report;
  report.coeffs = coeffs / coeffs[0];
  report.coeff_positive.resize(coeffs.size());
  for (int i = 0; i < coeffs.size(); ++i)
    report.coeff_positive[i] = report.coeffs[i] > 0.0;

  bool eps_plus = false, degen_plus = false;
  const Eigen::VectorXd column =
      routh_first_column(report.coeffs, +1.0, &eps_plus, &degen_plus);
  report.routh_first_column = column;
  report.epsilon_used = eps_plus;
  report.degenerate = degen_plus;
  report.routh_positive = !eps_plus && !degen_plus && (column.array() > 0.0).all();

  // Sign changes count right-half-plane roots. A vanishing row signals a
  // factor with roots symmetric about the origin: changes after the
  // auxiliary-derivative continuation still count RHP roots, and zero
  // changes leaves roots on the axis, hence marginal. An epsilon verdict is
  // trusted only when it does not depend on the sign of epsilon.
  int changes = sign_changes(column);
  if (eps_plus) {
    bool eps_minus = false, degen_minus = false;
    const int minus_changes = sign_changes(
        routh_first_column(report.coeffs, -1.0, &eps_minus, &degen_minus));
    if (minus_changes != changes) {
      report.verdict = Verdict::Marginal;
      return report;
    }
  }
  if (changes > 0)
    report.verdict = Verdict::Unstable;
  else
    report.verdict = (degen_plus || eps_plus) ? Verdict::Marginal : Verdict::Stable;
  return report;
}

StabilityReport stability_report(const Mat12& drift) {
  StabilityReport report = routh_hurwitz(char_poly(drift));
  report.spectral_abscissa = spectral_abscissa(drift);
  switch (report.verdict) {
    case Verdict::Stable: report.consistent = report.spectral_abscissa < 0.0; break;
    case Verdict::Unstable: report.consistent = report.spectral_abscissa > 0.0; break;
    case Verdict::Marginal: report.consistent = true; break;
  }
  return report;
}

std::vector<StabilityRow> stability_sweep(const SystemParams& params,
                                          const std::vector<double>& detuning_grid) {
  if (detuning_grid.empty())
    throw std::invalid_argument("stability_sweep: empty detuning grid");
  for (std::size_t i = 0; i < detuning_grid.size(); ++i) {
    if (!std::isfinite(detuning_grid[i]))
      throw std::invalid_argument("stability_sweep: non-finite grid point");
    if (i > 0 && !(detuning_grid[i] > detuning_grid[i - 1]))
      throw std::invalid_argument("stability_sweep: grid must be strictly increasing");
  }
  params.validate();

  std::vector<StabilityRow> rows;
  rows.reserve(detuning_grid.size());
  for (double ratio : detuning_grid) {
    SystemParams point = params;
    point.cavity_a.Delta = ratio * point.cavity_a.omega_m;
    point.cavity_b.Delta = ratio * point.cavity_b.omega_m;
    const StabilityReport report = stability_report(build_drift(point));
    rows.push_back({ratio, report.coeffs, report.verdict, report.spectral_abscissa,
                    report.consistent});
  }
  return rows;
}

}  // namespace cvqd
