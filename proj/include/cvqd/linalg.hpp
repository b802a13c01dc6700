#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cvqd/errors.hpp"

// Dense real-matrix kernels for small systems (n <= 16): continuous Lyapunov
// solve, characteristic polynomial, spectral abscissa. Free functions over
// Eigen expressions; dense factorizations with extended-precision touch-ups
// where stiff rate spectra would otherwise eat the accuracy.

namespace cvqd {

inline constexpr int kMaxKernelDim = 16;
inline constexpr double kStabilityMargin = 1e-12;

namespace detail {

template <typename Derived>
void require_square_finite(const Eigen::MatrixBase<Derived>& a, const char* name) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw DimensionMismatch(std::string(name) + " must be square and non-empty");
  if (!a.derived().allFinite())
    throw std::invalid_argument(std::string(name) + " contains NaN/Inf entries");
}

}  // namespace detail

/// Largest real part over the eigenvalues of a dense real matrix.
template <typename Derived>
typename Derived::Scalar spectral_abscissa(const Eigen::MatrixBase<Derived>& a) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  detail::require_square_finite(a, "matrix");
  if (a.rows() > kMaxKernelDim) throw DimensionTooLarge("spectral_abscissa: n > 16");
  Mat m = a.derived();
  Eigen::EigenSolver<Mat> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NoConvergence("spectral_abscissa: eigenvalue iteration did not converge");
  return solver.eigenvalues().real().maxCoeff();
}

/// Coefficients of det(lambda*I - A) in descending powers, leading entry
/// exactly 1, via the Faddeev-LeVerrier recurrence. The recurrence runs in
/// extended precision: its intermediates grow like ||A||^k, which would
/// otherwise wash out small trailing coefficients of stiff spectra.
template <typename Derived>
Eigen::Vector<typename Derived::Scalar, Eigen::Dynamic> char_poly(
    const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Wide = long double;
  using WideMat = Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic>;
  detail::require_square_finite(a, "matrix");
  const Eigen::Index n = a.rows();
  if (n > kMaxKernelDim) throw DimensionTooLarge("char_poly: n > 16");

  const WideMat m = a.derived().template cast<Wide>();
  Eigen::Vector<Scalar, Eigen::Dynamic> coeffs(n + 1);
  coeffs[0] = Scalar(1);
  WideMat aux = WideMat::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    aux = (m * aux).eval();
    const Wide ck = -aux.trace() / Wide(k);
    coeffs[k] = static_cast<Scalar>(ck);
    aux.diagonal().array() += ck;
  }
  return coeffs;
}

/// Unique symmetric solution C of drift*C + C*drift^T = -diffusion, obtained
/// by Kronecker vectorization and dense LU with one refinement pass. The
/// drift must be strictly stable (abscissa < -1e-12); this is checked.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> solve_lyapunov(
    const Eigen::MatrixBase<DerivedA>& drift, const Eigen::MatrixBase<DerivedB>& diffusion) {
  using Scalar = typename DerivedA::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Vector<Scalar, Eigen::Dynamic>;

  detail::require_square_finite(drift, "drift");
  detail::require_square_finite(diffusion, "diffusion");
  const Eigen::Index n = drift.rows();
  if (diffusion.rows() != n)
    throw DimensionMismatch("solve_lyapunov: drift and diffusion dimensions differ");

  Mat d = drift.derived();
  Mat f = diffusion.derived();
  const Scalar fscale = f.cwiseAbs().maxCoeff();
  if ((f - f.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * std::max(Scalar(1), fscale))
    throw std::invalid_argument("solve_lyapunov: diffusion matrix is not symmetric");

  const Scalar abscissa = spectral_abscissa(d);
  if (!(abscissa < Scalar(-kStabilityMargin)))
    throw UnstableDrift("solve_lyapunov: spectral abscissa " + std::to_string(abscissa) +
                        " >= -1e-12");

  // Column-major vec: vec(DC) = (I (x) D) vec(C), vec(C D^T) = (D (x) I) vec(C).
  Mat big = Mat::Zero(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j)
    big.block(j * n, j * n, n, n) = d;
  for (Eigen::Index bj = 0; bj < n; ++bj)
    for (Eigen::Index bi = 0; bi < n; ++bi)
      big.block(bi * n, bj * n, n, n).diagonal().array() += d(bi, bj);

  Vec rhs = -Vec(Eigen::Map<const Vec>(f.data(), n * n));
  Eigen::PartialPivLU<Mat> lu(big);
  Vec x = lu.solve(rhs);
  // iterative refinement with extended-precision residuals; near-marginal
  // drifts make the vectorized system ill-conditioned enough to matter
  using WideVec = Eigen::Vector<long double, Eigen::Dynamic>;
  const Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> big_wide =
      big.template cast<long double>();
  const WideVec rhs_wide = rhs.template cast<long double>();
  for (int pass = 0; pass < 3; ++pass) {
    const WideVec residual_wide = rhs_wide - big_wide * x.template cast<long double>();
    const Vec correction = lu.solve(residual_wide.template cast<Scalar>());
    x += correction;
    if (correction.cwiseAbs().maxCoeff() <=
        Scalar(1e-18) * std::max(Scalar(1), x.cwiseAbs().maxCoeff()))
      break;
  }

  Mat cov = Eigen::Map<Mat>(x.data(), n, n);
  cov = Scalar(0.5) * (cov + cov.transpose()).eval();

  const Scalar residual = (d * cov + cov * d.transpose() + f).cwiseAbs().maxCoeff();
  if (!(residual <= Scalar(1e-10) * std::max(Scalar(1), fscale)))
    throw SingularSystem("solve_lyapunov: residual " + std::to_string(residual) +
                         " exceeds tolerance; vectorized system is numerically singular");
  return cov;
}

}  // namespace cvqd
