#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>

#include "cvqd/errors.hpp"

// Physical parameter model of two coupled hybrid optomechanical cavities with
// intracavity BECs, and the construction of the 12x12 drift and diffusion
// matrices of the linearized fluctuation dynamics. All rates are stored in a
// single user-chosen frequency unit; the scenario presets adopt the
// mechanical frequency as that unit, so only ratios matter.

namespace cvqd {

using Mat12 = Eigen::Matrix<double, 12, 12>;

/// Fixed ordering of the 12 quadrature fluctuations.
enum class StateIndex : int {
  MirrorPosA = 0,   // q_A
  MirrorMomA = 1,   // p_A
  FieldXA = 2,      // X_A
  FieldYA = 3,      // Y_A
  MirrorPosB = 4,   // q_B
  MirrorMomB = 5,   // p_B
  FieldXB = 6,      // X_B
  FieldYB = 7,      // Y_B
  BecPosA = 8,      // Q_A
  BecMomA = 9,      // P_A
  BecPosB = 10,     // Q_B
  BecMomB = 11,     // P_B
};

inline constexpr int kStateDim = 12;
inline constexpr int kBlockCount = 8;

/// Display names of the quadratures, in StateIndex order.
const std::array<const char*, kStateDim>& state_names();

/// Zero-based index set of one of the eight catalogued two-mode blocks:
///   1 photon-phonon A        {q_A,p_A,X_A,Y_A}
///   2 photon-phonon B        {q_B,p_B,X_B,Y_B}
///   3 mechanical modes       {q_A,p_A,q_B,p_B}
///   4 cavity modes           {X_A,Y_A,X_B,Y_B}
///   5 BEC A - mechanical A   {q_A,p_A,Q_A,P_A}
///   6 BEC B - mechanical B   {q_B,p_B,Q_B,P_B}
///   7 BEC A - optical A      {X_A,Y_A,Q_A,P_A}
///   8 BEC B - optical B      {X_B,Y_B,Q_B,P_B}
std::array<int, 4> block_indices(int block_id);

struct CavityParams {
  double omega_m;    // mechanical frequency
  double kappa;      // cavity decay rate
  double gamma_m;    // mirror mechanical damping
  double gamma_sm;   // BEC-mode damping
  double Omega;      // atomic recoil frequency
  double Delta;      // effective cavity detuning
  double mu;         // effective optomechanical coupling (field -> mirror momentum)
  double S;          // field-mirror coupling (mirror position -> field phase)
  double nbar;       // mean thermal phonon number

  void validate() const;  // throws ValidationError
  bool operator==(const CavityParams&) const = default;
};

struct SystemParams {
  CavityParams cavity_a;
  CavityParams cavity_b;
  double J;      // photon hopping rate between the cavities
  double N_sq;   // squeezed-source photon number N
  double M_sq;   // two-photon correlation M

  void validate() const;
  bool operator==(const SystemParams&) const = default;
};

/// Squeezed-light source description for the Lorentzian N/C calculators.
struct SqueezedSourceSpec {
  double omega_k;    // probe frequency
  double omega_sl;   // squeezed-light carrier frequency
  double pi1;        // damping strength
  double pi2;        // amplification parameter
};

/// Mean thermal occupation (exp(h_bar*omega/(k_B*T)) - 1)^-1; 0 at T = 0.
/// omega_m in rad/s, T in kelvin (absolute units, unlike the rest).
double thermal_occupation(double omega_m, double T);

/// Photon number N and two-photon correlation C of the squeezed source,
/// evaluated as the printed Lorentzian difference/sum pair.
std::pair<double, double> squeezed_correlations(const SqueezedSourceSpec& spec);

/// Maximum-correlation squeezing M = sqrt(N(N+1)).
double ideal_squeezing_m(double N);

/// Drift matrix of the linearized fluctuation equations, rows in StateIndex
/// order. Constant (mean-shift) terms are dropped; they do not enter the
/// covariance dynamics.
Mat12 build_drift(const SystemParams& params);

/// Diffusion matrix: thermal/vacuum noise on the diagonal plus the
/// two-mode-squeezing cross terms +-2M*sqrt(kappa_A*kappa_B) between the
/// X (resp. Y) quadratures of the two cavities.
Mat12 build_diffusion(const SystemParams& params);

}  // namespace cvqd
