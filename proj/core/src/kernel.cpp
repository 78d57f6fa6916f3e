#include "hypwave/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hypwave/specfun.hpp"

namespace hypwave {

namespace {

std::complex<double> to_complex(const HPoint& z) { return {z.x, z.s}; }

/// u^n for integer n >= 0 by repeated multiplication (exact-phase friendly).
std::complex<double> int_pow(std::complex<double> u, int n) {
  std::complex<double> acc = 1.0;
  for (int j = 0; j < n; ++j) acc *= u;
  return acc;
}

/// (|u|/u)^sigma for nonzero u: unimodular, principal branch.
std::complex<double> unit_phase_pow(std::complex<double> u, double sigma) {
  return std::exp(std::complex<double>(0.0, -sigma * std::arg(u)));
}

}  // namespace

double band_alpha(double B, int n) { return 2.0 * (B - n) - 1.0; }

void validate(const SuperParams& sp) {
  if (!(sp.B > 0.5) || !std::isfinite(sp.B)) {
    throw std::invalid_argument("super params: level B must be finite > 1/2");
  }
  if (sp.N < 1) {
    throw std::invalid_argument("super params: band count N must be >= 1");
  }
  if (!(band_alpha(sp.B, sp.N - 1) > 0.0)) {
    throw std::invalid_argument(
        "super params: band count too large, alpha of the top band is not "
        "positive (need N <= floor(B - 1/2) + 1)");
  }
}

std::complex<double> kernel_eval(const WaveletParams& p, const HPoint& z,
                                 const HPoint& w) {
  validate(p);
  const std::complex<double> zc = to_complex(z);
  const std::complex<double> wc = to_complex(w);
  const std::complex<double> d = zc - std::conj(wc);
  const std::complex<double> minus_i_d(d.imag(), -d.real());  // -i d
  if (!(minus_i_d.real() > 0.0)) {
    // Im(d) = Im z + Im w > 0 for half-plane points; anything else means a
    // corrupted input slipped past HPoint validation.
    throw std::logic_error("kernel_eval: branch-safety invariant violated");
  }
  const double sv = z.s * w.s;
  const std::complex<double> base = std::sqrt(sv) / minus_i_d;
  const std::complex<double> ratio = std::conj(d) / d;  // unimodular
  const double jac_arg = 1.0 - 8.0 * sv / std::norm(d);
  return std::pow(2.0, p.alpha) * p.alpha * int_pow(ratio, p.n) *
         std::exp((p.alpha + 1.0) * std::log(base)) *
         jacobi({p.n, p.alpha, 0.0}, jac_arg);
}

double rep_exponent(const WaveletParams& p) {
  validate(p);
  return 2.0 * p.n + p.alpha + 1.0;
}

PlaneFunction rep_apply(const RepElement& rep, PlaneFunction F) {
  return [rep, F = std::move(F)](const HPoint& z) {
    const std::complex<double> u =
        rep.g.c * to_complex(z) + std::complex<double>(rep.g.d, 0.0);
    return unit_phase_pow(u, rep.exponent) * F(moebius_apply(rep.g, z));
  };
}

double covariance_residual(const WaveletParams& p, const GroupElement& g,
                           const HPoint& z, const HPoint& w) {
  const double sigma = rep_exponent(p);
  const std::complex<double> zc = to_complex(z);
  const std::complex<double> wc = to_complex(w);

  // left: phase from c z + d, kernel moved to g z in the first slot
  const std::complex<double> u = g.c * zc + g.d;
  const std::complex<double> lhs =
      unit_phase_pow(u, sigma) * kernel_eval(p, moebius_apply(g, z), w);

  // right: conjugate phase from a - c w, kernel moved to g^-1 w in the
  // second slot
  const std::complex<double> v = g.a - g.c * wc;
  const std::complex<double> rhs =
      std::exp(std::complex<double>(0.0, sigma * std::arg(v))) *
      kernel_eval(p, z, moebius_apply(g.inverse(), w));

  return std::abs(lhs - rhs);
}

CovarianceParts covariance_parts(const GroupElement& g, const HPoint& z,
                                 const HPoint& w) {
  const std::complex<double> zc = to_complex(z);
  const std::complex<double> wc = to_complex(w);
  const HPoint gz = moebius_apply(g, z);
  const HPoint giw = moebius_apply(g.inverse(), w);
  const std::complex<double> gzc = to_complex(gz);
  const std::complex<double> giwc = to_complex(giw);

  const std::complex<double> dl = gzc - std::conj(wc);   // g z - conj w
  const std::complex<double> dr = zc - std::conj(giwc);  // z - conj(g^-1 w)

  CovarianceParts parts;
  parts.metric =
      std::fabs(gz.s * w.s / std::norm(dl) - z.s * giw.s / std::norm(dr));

  const std::complex<double> u = g.c * zc + g.d;
  const std::complex<double> v = g.a - g.c * wc;
  const std::complex<double> lin_l =
      unit_phase_pow(u, 1.0) * std::sqrt(gz.s * w.s) /
      std::complex<double>(dl.imag(), -dl.real());
  const std::complex<double> lin_r =
      std::exp(std::complex<double>(0.0, std::arg(v))) *
      std::sqrt(z.s * giw.s) / std::complex<double>(dr.imag(), -dr.real());
  parts.linear = std::abs(lin_l - lin_r);

  const std::complex<double> rat_l =
      unit_phase_pow(u, 2.0) * std::conj(dl) / dl;
  const std::complex<double> rat_r =
      std::exp(std::complex<double>(0.0, 2.0 * std::arg(v))) * std::conj(dr) /
      dr;
  parts.ratio = std::abs(rat_l - rat_r);
  return parts;
}

std::complex<double> project(const WaveletParams& p, const PlaneFunction& Phi,
                             const HPoint& z, const HalfPlaneRule& rule) {
  validate(p);
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    acc += rule.weights[j] * Phi(rule.nodes[j]) *
           kernel_eval(p, z, rule.nodes[j]);
  }
  return acc / (2.0 * std::numbers::pi);
}

std::complex<double> super_kernel(const SuperParams& sp, const HPoint& z,
                                  const HPoint& w) {
  validate(sp);
  std::complex<double> acc = 0.0;
  for (int n = 0; n < sp.N; ++n) {
    acc += kernel_eval({n, band_alpha(sp.B, n)}, z, w);
  }
  return acc;
}

double maass_eigen_residual(double B, int n, const HPoint& z0,
                            const HPoint& probe, double h) {
  if (!(B > 0.5) || !std::isfinite(B)) {
    throw std::invalid_argument("maass check: level B must be finite > 1/2");
  }
  if (n < 0 || n > static_cast<int>(std::floor(B - 0.5))) {
    throw std::invalid_argument(
        "maass check: band index must satisfy 0 <= n <= floor(B - 1/2)");
  }
  if (!(h > 0.0)) {
    throw std::invalid_argument("maass check: step h must be > 0");
  }
  if (probe.s < 10.0 * h) {
    throw std::invalid_argument(
        "maass check: probe too close to the boundary for this step size "
        "(need Im(probe) >= 10 h)");
  }
  const WaveletParams p{n, band_alpha(B, n)};
  auto F = [&](double x, double s) {
    return std::conj(kernel_eval(p, z0, HPoint(x, s)));
  };

  // H_B = s^2 (Fxx + Fss) - 2 i B s Fx via fourth-order 5-point stencils.
  auto apply_h = [&](double hh) {
    const double x = probe.x, s = probe.s;
    const std::complex<double> fxx =
        (-F(x - 2 * hh, s) + 16.0 * F(x - hh, s) - 30.0 * F(x, s) +
         16.0 * F(x + hh, s) - F(x + 2 * hh, s)) /
        (12.0 * hh * hh);
    const std::complex<double> fss =
        (-F(x, s - 2 * hh) + 16.0 * F(x, s - hh) - 30.0 * F(x, s) +
         16.0 * F(x, s + hh) - F(x, s + 2 * hh)) /
        (12.0 * hh * hh);
    const std::complex<double> fx =
        (F(x - 2 * hh, s) - 8.0 * F(x - hh, s) + 8.0 * F(x + hh, s) -
         F(x + 2 * hh, s)) /
        (12.0 * hh);
    return s * s * (fxx + fss) - std::complex<double>(0.0, 2.0 * B) * s * fx;
  };

  // Both stencils are O(h^4); Richardson in h^4 lifts the pair to O(h^6).
  const std::complex<double> coarse = apply_h(h);
  const std::complex<double> fine = apply_h(0.5 * h);
  const std::complex<double> extrap = (16.0 * fine - coarse) / 15.0;

  const std::complex<double> f0 = F(probe.x, probe.s);
  const double lambda = (B - n) * (B - n - 1.0);
  return std::abs(extrap - lambda * f0) / std::abs(f0);
}

double rotation_covariance_residual_general(const FreqFunction& psi,
                                            double sigma, double theta,
                                            const HPoint& z) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const GroupElement g(ct, -st, st, ct);
  const HPoint gz = moebius_apply(g, z);

  auto weighted_self_transform = [&](const HPoint& pt) {
    return std::pow(pt.s, -0.5 * sigma) * wavelet_transform_pair(psi, psi, pt);
  };

  // (e^{i theta} / (z sin theta + cos theta))^sigma, principal branch; the
  // base's denominator has imaginary part s sin(theta), so the branch cut on
  // the negative real axis is touched only at theta = +-pi with x-dependent
  // sign -- callers stay inside (-pi, pi).
  const std::complex<double> den = st * to_complex(z) + ct;
  const std::complex<double> factor =
      std::exp(sigma * (std::complex<double>(0.0, theta) - std::log(den)));

  return std::abs(factor * weighted_self_transform(gz) -
                  weighted_self_transform(z));
}

double rotation_covariance_residual(const WaveletParams& p, double theta,
                                    const HPoint& z) {
  return rotation_covariance_residual_general(mother_freq(p), rep_exponent(p),
                                              theta, z);
}

double kernel_transform_consistency(const WaveletParams& p, const HPoint& z,
                                    const HPoint& w) {
  const FreqFunction psi = mother_freq(p);
  const double osc = z.x - w.x;
  const DecayClass decay{DecayClass::Kind::Exponential, z.s + w.s, p.alpha,
                         0.0};
  const std::complex<double> quad =
      std::sqrt(z.s * w.s) *
      integrate_halfline(
          [&](double xi) {
            return psi.eval(w.s * xi) * psi.eval(z.s * xi) *
                   std::exp(std::complex<double>(0.0, osc * xi));
          },
          decay, osc);
  return std::abs(admissibility(p) * kernel_eval(p, z, w) - quad);
}

}  // namespace hypwave
