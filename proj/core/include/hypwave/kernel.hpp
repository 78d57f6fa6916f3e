#pragma once

// Closed-form reproducing kernels for the Laguerre-band wavelet spaces, the
// phase-twisted group action on half-plane functions, covariance residuals,
// kernel projections, multi-band (super) kernels, the magnetic-Laplacian
// eigenvalue check, and rotation-covariance residuals.
//
// Everything here is a pure function of its arguments; kernel_eval is the
// hot path and is safe to call concurrently from many threads.

#include <complex>
#include <functional>

#include "hypwave/hyperbolic.hpp"
#include "hypwave/wavelet.hpp"

namespace hypwave {

/// A stack of N consecutive bands hanging below a level parameter B:
/// band n in {0, .., N-1} carries alpha_n = 2(B - n) - 1.  Valid when
/// every constituent alpha_n is positive, i.e. N <= floor(B - 1/2) + 1.
struct SuperParams {
  double B = 1.0;
  int N = 1;
};

/// Throws std::invalid_argument unless sp describes a valid band stack.
void validate(const SuperParams& sp);

/// alpha of band n at level B: 2 (B - n) - 1.
double band_alpha(double B, int n);

/// Closed-form reproducing kernel k(z, w) of the band-(n, alpha) wavelet
/// space: with d = z - conj(w),
///   k(z, w) = 2^alpha alpha (conj(d)/d)^n (sqrt(Im z Im w) / (-i d))^{alpha+1}
///             J_n^{(alpha,0)}(1 - 8 Im z Im w / |d|^2),
/// where J is the (alpha, 0) Jacobi polynomial and the (alpha+1)-power is a
/// principal-branch power.  The base sqrt(Im z Im w)/(-i d) always lies in
/// the open right half-plane, so the branch cut is never crossed (asserted).
/// Hermitian: kernel_eval(p, z, w) = conj(kernel_eval(p, w, z)); the
/// diagonal is the constant alpha/2.
std::complex<double> kernel_eval(const WaveletParams& p, const HPoint& z,
                                 const HPoint& w);

/// A complex-valued function on the half-plane.
using PlaneFunction = std::function<std::complex<double>(const HPoint&)>;

/// One group element together with the real exponent of its phase twist.
/// For the band-(n, alpha) space the natural exponent is 2n + alpha + 1.
struct RepElement {
  GroupElement g;
  double exponent = 1.0;
};

/// The phase exponent 2n + alpha + 1 attached to band-(n, alpha) profiles.
double rep_exponent(const WaveletParams& p);

/// Phase-twisted composition
///   (T F)(z) = (|c z + d| / (c z + d))^exponent F(g z),
/// the projective unitary action on functions over the half-plane.  The
/// phase factor is unimodular, so |T F(z)| = |F(g z)| pointwise and T is
/// unitary on L^2 of the invariant measure.
PlaneFunction rep_apply(const RepElement& rep, PlaneFunction F);

/// Residual of the kernel covariance identity
///   (|cz+d|/(cz+d))^sigma k(g z, w) = ((-cw+a)/|-cw+a|)^sigma k(z, g^-1 w)
/// with sigma = 2n + alpha + 1.  Analytically zero; numerically bounded by
/// rounding (~1e-14 relative) for any g, z, w.
double covariance_residual(const WaveletParams& p, const GroupElement& g,
                           const HPoint& z, const HPoint& w);

/// Residuals of the three scalar identities the covariance identity is
/// assembled from; each is analytically zero and independent of (n, alpha).
struct CovarianceParts {
  /// | Im(gz) Im(w)/|gz - conj w|^2  -  Im(z) Im(g^-1 w)/|z - conj(g^-1 w)|^2 |
  double metric = 0.0;
  /// twisted linear factor sqrt(Im Im)/(-i (z - conj w)), phase exponent 1
  double linear = 0.0;
  /// twisted unimodular ratio (conj z - w)/(z - conj w), phase exponent 2
  double ratio = 0.0;
};
CovarianceParts covariance_parts(const GroupElement& g, const HPoint& z,
                                 const HPoint& w);

/// Kernel projection: (P Phi)(z) = (1/2pi) integral Phi(w) k(z, w) dmu(w),
/// evaluated with the supplied discrete rule.  With this normalization P is
/// idempotent on kernel sections: feeding Phi = conj(k(z0, .)) returns
/// conj(k(z0, z)) up to quadrature error.
std::complex<double> project(const WaveletParams& p, const PlaneFunction& Phi,
                             const HPoint& z, const HalfPlaneRule& rule);

/// Sum of the band kernels of a stack: sum_{n<N} k_{n, 2(B-n)-1}(z, w).
/// Diagonal: N (2B - N) / 2.
std::complex<double> super_kernel(const SuperParams& sp, const HPoint& z,
                                  const HPoint& w);

/// Relative eigen-equation residual of the magnetic half-plane Laplacian
///   H_B = s^2 (d^2/dx^2 + d^2/ds^2) - 2 i B s d/dx
/// on the kernel section F = conj(k(z0, .)) of the band-(n, 2(B-n)-1)
/// space, evaluated at `probe` by fourth-order central differences with
/// Richardson extrapolation over steps h and h/2:
///   |H_B F(probe) - (B-n)(B-n-1) F(probe)| / |F(probe)|.
/// The drift term's sign is fixed by requiring the band kernels to be
/// genuine eigenfunctions.  Requires n <= floor(B - 1/2) and probe.s >= 10h.
double maass_eigen_residual(double B, int n, const HPoint& z0,
                            const HPoint& probe, double h);

/// Residual of rotation covariance for the weight-normalized self-transform
/// V(z) = Im(z)^{-sigma/2} W(z), where W(z) is the self-transform of `psi`:
///   | (e^{i theta}/(z sin theta + cos theta))^sigma V(g_theta z) - V(z) |
/// with g_theta z = (cos theta z - sin theta)/(sin theta z + cos theta).
/// Vanishes (to quadrature accuracy) exactly for the Laguerre-band profiles;
/// generic profiles leave an order-one residual.
double rotation_covariance_residual_general(const FreqFunction& psi,
                                            double sigma, double theta,
                                            const HPoint& z);

/// Band-profile specialization with sigma = 2n + alpha + 1.
double rotation_covariance_residual(const WaveletParams& p, double theta,
                                    const HPoint& z);

/// Cross-route consistency check: the closed-form kernel times the
/// admissibility constant against the same inner product evaluated by
/// direct frequency-domain quadrature,
///   sqrt(Im z Im w) integral psi^(Im w xi) psi^(Im z xi) e^{i(x - x') xi} dxi.
/// Returns the absolute difference (analytically zero).
double kernel_transform_consistency(const WaveletParams& p, const HPoint& z,
                                    const HPoint& w);

}  // namespace hypwave
