#pragma once

#include <Eigen/Dense>
#include <utility>

#include "cvqd/errors.hpp"
#include "cvqd/model.hpp"

// Two-mode Gaussian-state analysis in the vacuum-variance-1/2 convention:
// block extraction from the 12x12 covariance, symplectic invariants and
// eigenvalues, the entropy kernel h, Gaussian quantum discord, and the
// correlation classification.

namespace cvqd {

/// 4x4 principal submatrix of the covariance on one catalogued index set,
/// partitioned as [[sigma1, sigma3], [sigma3^T, sigma2]] with 2x2 blocks.
struct TwoModeBlock {
  int block_id = 0;
  Eigen::Matrix4d sigma = Eigen::Matrix4d::Zero();
};

struct SymplecticInvariants {
  double b1;  // det sigma1
  double b2;  // det sigma2
  double b3;  // det sigma3
  double b4;  // det sigma
  double Z;   // b1 + b2 + 2*b3
};

enum class Classification {
  Correlated,     // discord > 1
  Indeterminate,  // 0 <= discord <= 1
  NegativeFlag,   // discord < 0 (clamping artifact, reported as-is)
};

enum class DiscordVariant {
  Standard,      // h applied to the symplectic eigenvalues s+-
  LiteralPaper,  // h applied to sqrt(s+-), the double-square-root reading
};

struct DiscordReport {
  int block_id = 0;
  SymplecticInvariants invariants{};
  double s_minus = 0;
  double s_plus = 0;
  double s_pt_minus = 0;
  double s_pt_plus = 0;
  double discord = 0;
  Classification classification = Classification::Indeterminate;
  bool clamped = false;              // an h argument below 1/2 was lifted to 1/2
  bool physicality_warning = false;  // s_minus < 1/2 - 1e-6 (never clamped away)
};

TwoModeBlock extract_block(const Mat12& covariance, int block_id);

SymplecticInvariants symplectic_invariants(const TwoModeBlock& block);

/// Symplectic eigenvalue pair (s_minus, s_plus) of the block, or of its
/// partial transpose (momentum flip on the second mode).
std::pair<double, double> symplectic_eigenvalues(const TwoModeBlock& block,
                                                 bool partial_transpose);

/// h(x) = (x+1/2)log(x+1/2) - (x-1/2)log(x-1/2), natural log by default.
/// h(1/2) = 0 with the 0*log(0) -> 0 convention; x below 1/2 - 1e-9 is a
/// domain error, the sliver above it evaluates as 1/2.
double entropy_h(double x, bool base2 = false);

DiscordReport gaussian_discord(const TwoModeBlock& block,
                               DiscordVariant variant = DiscordVariant::Standard);

Classification classify(double discord);

const char* to_string(Classification c);

}  // namespace cvqd
