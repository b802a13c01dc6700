#include "cvqd/model.hpp"

#include <cmath>
#include <limits>

namespace cvqd {

namespace {
constexpr double kHbar = 1.054571817e-34;  // J s
constexpr double kBoltzmann = 1.380649e-23;  // J/K

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
}
}  // namespace

const std::array<const char*, kStateDim>& state_names() {
  static const std::array<const char*, kStateDim> names = {
      "q_A", "p_A", "X_A", "Y_A", "q_B", "p_B",
      "X_B", "Y_B", "Q_A", "P_A", "Q_B", "P_B"};
  return names;
}

std::array<int, 4> block_indices(int block_id) {
  switch (block_id) {
    case 1: return {0, 1, 2, 3};
    case 2: return {4, 5, 6, 7};
    case 3: return {0, 1, 4, 5};
    case 4: return {2, 3, 6, 7};
    case 5: return {0, 1, 8, 9};
    case 6: return {4, 5, 10, 11};
    case 7: return {2, 3, 8, 9};
    case 8: return {6, 7, 10, 11};
    default:
      throw InvalidBlockId("block_id must be in 1..8, got " + std::to_string(block_id));
  }
}

void CavityParams::validate() const {
  require_finite(omega_m, "omega_m");
  require_finite(kappa, "kappa");
  require_finite(gamma_m, "gamma_m");
  require_finite(gamma_sm, "gamma_sm");
  require_finite(Omega, "Omega");
  require_finite(Delta, "Delta");
  require_finite(mu, "mu");
  require_finite(S, "S");
  require_finite(nbar, "nbar");
  if (!(omega_m > 0)) throw ValidationError("omega_m", "must be > 0");
  if (!(kappa > 0)) throw ValidationError("kappa", "must be > 0");
  if (gamma_m < 0) throw ValidationError("gamma_m", "must be >= 0");
  if (gamma_sm < 0) throw ValidationError("gamma_sm", "must be >= 0");
  if (Omega < 0) throw ValidationError("Omega", "must be >= 0");
  if (nbar < 0) throw ValidationError("nbar", "must be >= 0");
}

void SystemParams::validate() const {
  cavity_a.validate();
  cavity_b.validate();
  require_finite(J, "J");
  require_finite(N_sq, "N");
  require_finite(M_sq, "M");
  if (J < 0) throw ValidationError("J", "must be >= 0");
  if (N_sq < 0) throw ValidationError("N", "must be >= 0");
  // physicality of the squeezed reservoir, with one-ulp slack at the boundary
  const double ideal = std::sqrt(N_sq * (N_sq + 1.0));
  if (std::abs(M_sq) > ideal * (1.0 + 1e-12))
    throw ValidationError("M", "|M| must not exceed sqrt(N(N+1))");
}

double thermal_occupation(double omega_m, double T) {
  if (!(omega_m > 0) || !std::isfinite(omega_m))
    throw DomainError("thermal_occupation: omega_m must be > 0");
  if (T < 0 || !std::isfinite(T))
    throw DomainError("thermal_occupation: T must be >= 0");
  if (T == 0) return 0.0;
  const double x = kHbar * omega_m / (kBoltzmann * T);
  const double denom = std::expm1(x);
  return std::isinf(denom) ? 0.0 : 1.0 / denom;
}

std::pair<double, double> squeezed_correlations(const SqueezedSourceSpec& spec) {
  const double lambda1 = 0.5 * spec.pi1 - spec.pi2;
  const double lambda2 = 0.5 * spec.pi1 + spec.pi2;
  if (!(lambda2 > 0))
    throw DomainError("squeezed_correlations: pi1/2 + pi2 must be > 0");
  const double detune2 = (spec.omega_k - spec.omega_sl) * (spec.omega_k - spec.omega_sl);
  const double denom1 = detune2 + lambda1 * lambda1;
  const double denom2 = detune2 + lambda2 * lambda2;
  if (denom1 <= 0)
    throw DomainError("squeezed_correlations: vanishing Lorentzian denominator");
  const double prefactor = 0.25 * (lambda1 * lambda1 - lambda2 * lambda2);
  return {prefactor * (1.0 / denom2 - 1.0 / denom1),
          prefactor * (1.0 / denom2 + 1.0 / denom1)};
}

double ideal_squeezing_m(double N) {
  if (N < 0 || !std::isfinite(N))
    throw DomainError("ideal_squeezing_m: N must be >= 0");
  return std::sqrt(N * (N + 1.0));
}

Mat12 build_drift(const SystemParams& params) {
  params.validate();
  const CavityParams& a = params.cavity_a;
  const CavityParams& b = params.cavity_b;
  const double hop = params.J;

  Mat12 d = Mat12::Zero();
  // cavity A: mirror
  d(0, 1) = a.omega_m;
  d(1, 0) = -a.omega_m;
  d(1, 1) = -a.gamma_m;
  d(1, 2) = a.mu;
  // cavity A: field (X then Y)
  d(2, 2) = -a.kappa;
  d(2, 3) = a.Delta;
  d(2, 7) = hop;
  d(3, 0) = a.S;
  d(3, 2) = a.Delta;
  d(3, 3) = -a.kappa;
  d(3, 6) = -hop;
  // cavity B: mirror
  d(4, 5) = b.omega_m;
  d(5, 4) = -b.omega_m;
  d(5, 5) = -b.gamma_m;
  d(5, 6) = b.mu;
  // cavity B: field
  d(6, 6) = -b.kappa;
  d(6, 7) = b.Delta;
  d(6, 3) = hop;
  d(7, 4) = b.S;
  d(7, 6) = b.Delta;
  d(7, 7) = -b.kappa;
  d(7, 2) = -hop;
  // BEC A (driven by the field, no back-action on it)
  d(8, 8) = -a.gamma_sm;
  d(8, 9) = -a.Omega;
  d(9, 8) = a.Omega;
  d(9, 9) = -a.gamma_sm;
  d(9, 2) = a.mu;
  // BEC B
  d(10, 10) = -b.gamma_sm;
  d(10, 11) = -b.Omega;
  d(11, 10) = b.Omega;
  d(11, 11) = -b.gamma_sm;
  d(11, 6) = b.mu;
  return d;
}

Mat12 build_diffusion(const SystemParams& params) {
  params.validate();
  const CavityParams& a = params.cavity_a;
  const CavityParams& b = params.cavity_b;
  const double optical = 1.0 + 2.0 * params.N_sq;

  Mat12 f = Mat12::Zero();
  f(1, 1) = a.gamma_m * (1.0 + 2.0 * a.nbar);
  f(2, 2) = a.kappa * optical;
  f(3, 3) = a.kappa * optical;
  f(5, 5) = b.gamma_m * (1.0 + 2.0 * b.nbar);
  f(6, 6) = b.kappa * optical;
  f(7, 7) = b.kappa * optical;
  f(8, 8) = a.gamma_sm * (1.0 + 2.0 * a.nbar);
  f(9, 9) = a.gamma_sm * (1.0 + 2.0 * a.nbar);
  f(10, 10) = b.gamma_sm * (1.0 + 2.0 * b.nbar);
  f(11, 11) = b.gamma_sm * (1.0 + 2.0 * b.nbar);

  // squeezing correlations between the two optical inputs; reduces to
  // 2*M*kappa for identical cavities
  const double cross = 2.0 * params.M_sq * std::sqrt(a.kappa * b.kappa);
  f(2, 6) = cross;
  f(6, 2) = cross;
  f(3, 7) = -cross;
  f(7, 3) = -cross;
  return f;
}

}  // namespace cvqd
