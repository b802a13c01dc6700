#include "cvqd/gaussian.hpp"

#include <cmath>
#include <numbers>

namespace cvqd {

namespace {

constexpr double kRadicandTol = 1e-12;
constexpr double kPhysicalityTol = 1e-6;

double det2(const Eigen::Matrix2d& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

// Eigenvalue pair from one symplectic quadratic x^4 - w*x^2 + b4.
std::pair<double, double> symplectic_pair(double w, double b4, const char* what) {
  double radicand = w * w - 4.0 * b4;
  if (radicand < 0) {
    if (radicand < -kRadicandTol * std::max(1.0, w * w))
      throw ComplexEigenvalue(std::string(what) + ": discriminant is negative");
    radicand = 0.0;
  }
  const double root = std::sqrt(radicand);
  double lo = 0.5 * (w - root);
  double hi = 0.5 * (w + root);
  if (lo < 0) {
    if (lo < -kRadicandTol * std::max(1.0, std::abs(w)))
      throw ComplexEigenvalue(std::string(what) + ": negative squared eigenvalue");
    lo = 0.0;
  }
  if (hi < 0) hi = 0.0;
  return {std::sqrt(lo), std::sqrt(hi)};
}

}  // namespace

TwoModeBlock extract_block(const Mat12& covariance, int block_id) {
  const double scale = covariance.cwiseAbs().maxCoeff();
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() >
      1e-9 * std::max(1.0, scale))
    throw std::invalid_argument("extract_block: covariance is not symmetric");
  const std::array<int, 4> idx = block_indices(block_id);
  TwoModeBlock block;
  block.block_id = block_id;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      block.sigma(r, c) = covariance(idx[r], idx[c]);
  return block;
}

SymplecticInvariants symplectic_invariants(const TwoModeBlock& block) {
  const Eigen::Matrix4d& s = block.sigma;
  SymplecticInvariants inv{};
  inv.b1 = det2(s.topLeftCorner<2, 2>());
  inv.b2 = det2(s.bottomRightCorner<2, 2>());
  inv.b3 = det2(s.topRightCorner<2, 2>());
  inv.b4 = s.determinant();
  inv.Z = inv.b1 + inv.b2 + 2.0 * inv.b3;
  return inv;
}

std::pair<double, double> symplectic_eigenvalues(const TwoModeBlock& block,
                                                 bool partial_transpose) {
  const SymplecticInvariants inv = symplectic_invariants(block);
  const double w = partial_transpose ? inv.b1 + inv.b2 - 2.0 * inv.b3 : inv.Z;
  return symplectic_pair(w, inv.b4, "symplectic_eigenvalues");
}

double entropy_h(double x, bool base2) {
  if (!std::isfinite(x) || x < 0.5 - 1e-9)
    throw DomainError("entropy_h: argument below 1/2");
  if (x <= 0.5) return 0.0;
  const double value =
      (x + 0.5) * std::log(x + 0.5) - (x - 0.5) * std::log(x - 0.5);
  return base2 ? value / std::numbers::ln2 : value;
}

DiscordReport gaussian_discord(const TwoModeBlock& block, DiscordVariant variant) {
  DiscordReport report;
  report.block_id = block.block_id;
  report.invariants = symplectic_invariants(block);
  const SymplecticInvariants& inv = report.invariants;
  if (!(inv.b1 > 0) || !(inv.b2 > 0))
    throw std::invalid_argument("gaussian_discord: b1 and b2 must be positive");

  std::tie(report.s_minus, report.s_plus) = symplectic_eigenvalues(block, false);
  std::tie(report.s_pt_minus, report.s_pt_plus) = symplectic_eigenvalues(block, true);
  report.physicality_warning = report.s_minus < 0.5 - kPhysicalityTol;

  double radicand = inv.b1 + 2.0 * std::sqrt(inv.b1 * inv.b2) + 2.0 * inv.b3;
  if (radicand < 0) {
    if (radicand < -kRadicandTol * std::max(1.0, inv.b1))
      throw NegativeRadicand("gaussian_discord: conditional-state radicand is negative");
    radicand = 0.0;
  }
  const double last_arg = std::sqrt(radicand) / (1.0 + 2.0 * std::sqrt(inv.b2));

  // every h argument below 1/2 is lifted to 1/2 (h = 0) and flagged
  auto h_clamped = [&report](double x) {
    if (x < 0.5) {
      report.clamped = true;
      return 0.0;
    }
    return entropy_h(x);
  };

  const bool literal = variant == DiscordVariant::LiteralPaper;
  const double arg_minus = literal ? std::sqrt(report.s_minus) : report.s_minus;
  const double arg_plus = literal ? std::sqrt(report.s_plus) : report.s_plus;
  report.discord = h_clamped(std::sqrt(inv.b2)) - h_clamped(arg_minus) -
                   h_clamped(arg_plus) + h_clamped(last_arg);
  report.classification = classify(report.discord);
  return report;
}

Classification classify(double discord) {
  if (!std::isfinite(discord))
    throw std::invalid_argument("classify: discord must be finite");
  if (discord > 1.0) return Classification::Correlated;
  if (discord >= 0.0) return Classification::Indeterminate;
  return Classification::NegativeFlag;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Correlated: return "correlated";
    case Classification::Indeterminate: return "indeterminate";
    case Classification::NegativeFlag: return "negative-flag";
  }
  return "?";
}

}  // namespace cvqd
