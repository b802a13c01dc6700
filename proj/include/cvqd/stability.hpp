#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cvqd/errors.hpp"
#include "cvqd/model.hpp"

// Routh-Hurwitz stability analysis of the drift matrix. The verdict comes
// from the full Routh array (the sufficient test); coefficient positivity is
// reported separately as the necessary condition.

namespace cvqd {

enum class Verdict { Stable, Unstable, Marginal };

const char* to_string(Verdict v);

struct StabilityReport {
  Eigen::VectorXd coeffs;              // char poly, descending, leading 1
  std::vector<bool> coeff_positive;    // per-coefficient S_i > 0 flags
  Eigen::VectorXd routh_first_column;
  bool routh_positive = false;         // whole first column > 0, no substitutions
  bool epsilon_used = false;           // a zero pivot was replaced by epsilon
  bool degenerate = false;             // an entire Routh row vanished
  Verdict verdict = Verdict::Marginal;
  double spectral_abscissa = 0.0;      // filled by stability_report
  bool consistent = true;              // Routh verdict vs sign of the abscissa
};

/// Routh array test on monic descending coefficients (degree >= 1). Zero
/// pivots take the epsilon substitution; a vanishing row continues through
/// the auxiliary-polynomial derivative and forces a marginal verdict.
StabilityReport routh_hurwitz(const Eigen::VectorXd& coeffs);

/// char_poly + routh_hurwitz + spectral_abscissa combined. The two stability
/// verdicts are compared, never reconciled: `consistent` records agreement.
StabilityReport stability_report(const Mat12& drift);

struct StabilityRow {
  double delta_over_omega_m = 0.0;
  Eigen::VectorXd coeffs;   // descending, S_12 .. S_0
  Verdict verdict = Verdict::Marginal;
  double spectral_abscissa = 0.0;
  bool consistent = true;
};

/// One stability_report per grid point, with Delta of both cavities set to
/// ratio * omega_m. Grid must be non-empty and strictly increasing.
std::vector<StabilityRow> stability_sweep(const SystemParams& params,
                                          const std::vector<double>& detuning_grid);

}  // namespace cvqd
