#pragma once

#include <complex>
#include <functional>

#include "hypwave/hyperbolic.hpp"
#include "hypwave/specfun.hpp"

namespace hypwave {

/// Analyzing-wavelet parameters: band index n >= 0 and weight exponent
/// alpha > 0.  The frequency profile of the wavelet is
///   psi_hat(xi) = xi^(alpha/2) e^(-xi) L_n^alpha(2 xi)   for xi > 0,
/// and 0 for xi <= 0 (progressive support).
struct WaveletParams {
  int n = 0;
  double alpha = 1.0;
};

void validate(const WaveletParams& p);

/// How a frequency-side profile decays, so quadrature can be matched to it.
///  - Exponential: |f(xi)| <= C xi^power e^(-rate xi) near 0/infinity;
///  - Gaussian:    |f(xi)| <= C xi^power e^(-rate xi^2);
///  - Compact:     f vanishes for xi > cutoff.
/// `power` is the algebraic behaviour at xi -> 0+ (used to weight the rule);
/// power > -1 required for integrability.
struct DecayClass {
  enum class Kind { Exponential, Gaussian, Compact };
  Kind kind = Kind::Exponential;
  double rate = 1.0;
  double power = 0.0;
  double cutoff = 0.0;  // Compact only
};

/// A function on the frequency half-line (0, inf) with a declared decay
/// class.  The declared class is what the adaptive quadrature trusts; the
/// built-in factories declare honestly.
struct FreqFunction {
  std::function<std::complex<double>(double)> eval;
  DecayClass decay;
};

/// Frequency profile of the analyzing wavelet at unit scale.
/// Throws std::domain_error when evaluated at xi <= 0 through mother_hat
/// (the FreqFunction wrapper returns 0 there, matching the progressive
/// convention for synthesis use).
double mother_hat(const WaveletParams& p, double xi);
FreqFunction mother_freq(const WaveletParams& p);

/// Gaussian-decay control profile xi e^(-xi^2); not admissible-normalized,
/// used as an off-family control in covariance experiments.
FreqFunction control_freq();

/// Admissibility constant integral_0^inf psi_hat(xi)^2 dxi/xi, evaluated two
/// independent ways:
///  closed:      2^-alpha Gamma(n+alpha+1) / (n! alpha)
///  quadrature:  weight-matched Gauss-Laguerre of the same integral
/// admissibility() returns the closed form; check_normalization() returns
/// both plus the squared norm so callers can assert the crossing ratio
/// admissibility/norm_sq = 2/alpha.
double admissibility(const WaveletParams& p);
double admissibility_quadrature(const WaveletParams& p);

/// ||psi||^2 = integral_0^inf psi_hat(xi)^2 dxi:
///  closed:      2^-(alpha+1) Gamma(n+alpha+1) / n!
double norm_sq(const WaveletParams& p);
double norm_sq_quadrature(const WaveletParams& p);

struct NormalizationCheck {
  double admissibility_closed = 0.0;
  double admissibility_quad = 0.0;
  double norm_closed = 0.0;
  double norm_quad = 0.0;
  double ratio_closed = 0.0;  ///< admissibility/norm_sq; equals 2/alpha
};
NormalizationCheck check_normalization(const WaveletParams& p);

/// Frequency-domain inner product integral_0^inf f(xi) conj(g(xi)) dxi with
/// quadrature matched to the combined decay of f and g.
std::complex<double> inner_product_freq(const FreqFunction& f,
                                        const FreqFunction& g);

/// Voice transform of f at z = x + i s against the analyzing wavelet psi:
///   W f(z) = sqrt(s) integral_0^inf f(xi) conj(psi_hat(s xi)) e^(i x xi) dxi.
/// Postcondition (checked): |W f(z)|^2 <= <f,f> * <pi(z)psi, pi(z)psi>
/// up to a 1e-9 relative slack; violation raises std::runtime_error, and
/// failure of the quadrature to converge raises AccuracyError.
std::complex<double> wavelet_transform(const FreqFunction& f,
                                       const WaveletParams& p,
                                       const HPoint& z);

/// General two-profile version (used for control wavelets): analysis profile
/// psi given as a FreqFunction rather than WaveletParams.
std::complex<double> wavelet_transform_pair(const FreqFunction& f,
                                            const FreqFunction& psi,
                                            const HPoint& z);

/// Raised when the adaptive frequency quadrature cannot reach its target
/// relative accuracy.
class AccuracyError : public std::runtime_error {
 public:
  explicit AccuracyError(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive integral of h over (0, inf) where h decays like `decay` and
/// oscillates like e^(i osc xi).  Dispatches between a decay-matched
/// modified Gauss-Laguerre ladder (smooth, mildly oscillatory exponential
/// case) and oscillation-resolving composite panels with a power-weighted
/// first panel.  rel_tol is the target relative accuracy of the refinement
/// step.  Exposed for reuse by the kernel module and for direct testing.
std::complex<double> integrate_halfline(
    const std::function<std::complex<double>(double)>& h,
    const DecayClass& decay, double osc, double rel_tol = 1e-10);

}  // namespace hypwave
