#include "hypwave/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace hypwave {

namespace {

constexpr double kLogTiny = 46.0;  // e^-46 ~ 1e-20: negligible tail threshold

// ---------------------------------------------------------------------------
// Rule caches.  Rules depend only on (order, exponent) -- scale factors are
// applied by the callers -- so memoization across calls is safe.  Guarded by
// a mutex; the cached objects are immutable once built.

struct RuleKey {
  int order;
  long long exp_q;  // exponent quantized at 2^-20
  auto operator<=>(const RuleKey&) const = default;
};

RuleKey make_key(int order, double exponent) {
  return RuleKey{order, std::llround(exponent * 1048576.0)};
}

const QuadratureRule& cached_modified_laguerre(int order, double a) {
  static std::mutex mu;
  static std::map<RuleKey, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.try_emplace(make_key(order, a));
  if (inserted) it->second = gauss_laguerre_modified(order, a);
  return it->second;
}

/// Reference 16-point Gauss-Legendre rule on [0, 1].
const QuadratureRule& reference_gl16() {
  static const QuadratureRule rule = gauss_legendre(16, 0.0, 1.0);
  return rule;
}

/// Reference power-endpoint rule on [0, 1] for exponent p.
const QuadratureRule& cached_power_rule(double p) {
  static std::mutex mu;
  static std::map<RuleKey, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.try_emplace(make_key(16, p));
  if (inserted) it->second = gauss_power_endpoint(16, p, 1.0);
  return it->second;
}

struct Accum {
  std::complex<double> value{0.0, 0.0};
  double l1 = 0.0;

  void add(double w, std::complex<double> v) {
    value += w * v;
    l1 += w * std::abs(v);
  }
};

/// One modified-Laguerre pass at the given order, with the substitution
/// t = rate * xi matching the integrand's exponential decay.
Accum laguerre_pass(const std::function<std::complex<double>(double)>& h,
                    double rate, double power, int order) {
  const QuadratureRule& rule = cached_modified_laguerre(order, power);
  Accum acc;
  const double inv_rate = 1.0 / rate;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    acc.add(rule.weights[j] * inv_rate, h(rule.nodes[j] * inv_rate));
  }
  return acc;
}

/// Composite-panel pass over [0, L]: a power-weighted opening panel (when
/// the integrand has a non-polynomial algebraic factor xi^power at 0)
/// followed by plain 16-point Gauss-Legendre panels of width `width`.
Accum panel_pass(const std::function<std::complex<double>(double)>& h,
                 double power, double L, double width) {
  Accum acc;
  const bool smooth_at_zero =
      power >= -1e-12 &&
      std::fabs(power - std::nearbyint(power)) < 1e-9;
  const double w0 = std::min(width, L);
  if (smooth_at_zero) {
    const QuadratureRule& ref = reference_gl16();
    for (std::size_t j = 0; j < ref.nodes.size(); ++j) {
      acc.add(w0 * ref.weights[j], h(w0 * ref.nodes[j]));
    }
  } else {
    // integral_0^w0 h = sum_j v_j [h(t_j) (t_j/w0)^-p], with the rule built
    // for the weight (t/w0)^p.
    const QuadratureRule& ref = cached_power_rule(power);
    for (std::size_t j = 0; j < ref.nodes.size(); ++j) {
      const double t = w0 * ref.nodes[j];
      acc.add(w0 * ref.weights[j] * std::pow(ref.nodes[j], -power), h(t));
    }
  }
  const QuadratureRule& ref = reference_gl16();
  double lo = w0;
  while (lo < L) {
    const double hi = std::min(lo + width, L);
    const double span = hi - lo;
    for (std::size_t j = 0; j < ref.nodes.size(); ++j) {
      acc.add(span * ref.weights[j], h(lo + span * ref.nodes[j]));
    }
    lo = hi;
  }
  return acc;
}

/// Effective integration cutoff beyond which the declared decay leaves less
/// than ~1e-20 of relative mass.
double decay_cutoff(const DecayClass& decay) {
  const double p = std::max(decay.power, 0.0);
  switch (decay.kind) {
    case DecayClass::Kind::Exponential: {
      const double l0 = kLogTiny / decay.rate;
      return (kLogTiny + p * std::log(std::max(l0, 2.0))) / decay.rate;
    }
    case DecayClass::Kind::Gaussian: {
      const double l0 = std::sqrt(kLogTiny / decay.rate);
      return std::sqrt((kLogTiny + p * std::log(std::max(l0, 2.0))) /
                       decay.rate);
    }
    case DecayClass::Kind::Compact:
      return decay.cutoff;
  }
  return 0.0;
}

bool close_enough(std::complex<double> a, std::complex<double> b, double l1,
                  double rel_tol) {
  // Relative criterion with an additive floor at ~100x the rounding noise of
  // the quadrature sums themselves, so integrals that cancel to (near) zero
  // against a finite L1 mass still count as converged.
  return std::abs(a - b) <= rel_tol * std::abs(b) + 1e-14 * l1 + 1e-300;
}

void validate_decay(const DecayClass& decay) {
  if (!(decay.power > -1.0)) {
    throw std::invalid_argument("decay class: power must be > -1");
  }
  switch (decay.kind) {
    case DecayClass::Kind::Exponential:
    case DecayClass::Kind::Gaussian:
      if (!(decay.rate > 0.0) || !std::isfinite(decay.rate)) {
        throw std::invalid_argument("decay class: rate must be finite > 0");
      }
      break;
    case DecayClass::Kind::Compact:
      if (!(decay.cutoff > 0.0) || !std::isfinite(decay.cutoff)) {
        throw std::invalid_argument("decay class: cutoff must be finite > 0");
      }
      break;
  }
}

/// Decay class of a pointwise product of two profiles.
DecayClass combine_decay(const DecayClass& f, const DecayClass& g) {
  DecayClass out;
  out.power = f.power + g.power;
  const bool f_compact = f.kind == DecayClass::Kind::Compact;
  const bool g_compact = g.kind == DecayClass::Kind::Compact;
  if (f_compact || g_compact) {
    out.kind = DecayClass::Kind::Compact;
    out.cutoff = f_compact && g_compact ? std::min(f.cutoff, g.cutoff)
                                        : (f_compact ? f.cutoff : g.cutoff);
    return out;
  }
  const bool f_gauss = f.kind == DecayClass::Kind::Gaussian;
  const bool g_gauss = g.kind == DecayClass::Kind::Gaussian;
  if (f_gauss || g_gauss) {
    out.kind = DecayClass::Kind::Gaussian;
    out.rate = (f_gauss ? f.rate : 0.0) + (g_gauss ? g.rate : 0.0);
    return out;
  }
  out.kind = DecayClass::Kind::Exponential;
  out.rate = f.rate + g.rate;
  return out;
}

DecayClass scale_decay(const DecayClass& d, double s) {
  DecayClass out = d;
  switch (d.kind) {
    case DecayClass::Kind::Exponential:
      out.rate = d.rate * s;
      break;
    case DecayClass::Kind::Gaussian:
      out.rate = d.rate * s * s;
      break;
    case DecayClass::Kind::Compact:
      out.cutoff = d.cutoff / s;
      break;
  }
  return out;
}

}  // namespace

void validate(const WaveletParams& p) {
  if (p.n < 0) throw std::invalid_argument("wavelet: band index n must be >= 0");
  if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) {
    throw std::invalid_argument("wavelet: alpha must be finite > 0");
  }
}

double mother_hat(const WaveletParams& p, double xi) {
  validate(p);
  if (!(xi > 0.0)) {
    throw std::domain_error("mother_hat: frequency must be > 0");
  }
  return std::pow(xi, 0.5 * p.alpha) * std::exp(-xi) *
         laguerre({p.n, p.alpha}, 2.0 * xi);
}

FreqFunction mother_freq(const WaveletParams& p) {
  validate(p);
  FreqFunction f;
  f.decay = {DecayClass::Kind::Exponential, 1.0, 0.5 * p.alpha, 0.0};
  f.eval = [p](double xi) -> std::complex<double> {
    if (xi <= 0.0) return 0.0;
    return std::pow(xi, 0.5 * p.alpha) * std::exp(-xi) *
           laguerre({p.n, p.alpha}, 2.0 * xi);
  };
  return f;
}

FreqFunction control_freq() {
  FreqFunction f;
  f.decay = {DecayClass::Kind::Gaussian, 1.0, 1.0, 0.0};
  f.eval = [](double xi) -> std::complex<double> {
    if (xi <= 0.0) return 0.0;
    return xi * std::exp(-xi * xi);
  };
  return f;
}

double admissibility(const WaveletParams& p) {
  validate(p);
  return std::exp(-p.alpha * std::log(2.0) + log_gamma(p.n + p.alpha + 1.0) -
                  log_gamma(p.n + 1.0)) /
         p.alpha;
}

double admissibility_quadrature(const WaveletParams& p) {
  validate(p);
  const FreqFunction psi = mother_freq(p);
  DecayClass decay{DecayClass::Kind::Exponential, 2.0, p.alpha - 1.0, 0.0};
  return integrate_halfline(
             [&psi](double xi) {
               const std::complex<double> v = psi.eval(xi);
               return v * v / xi;
             },
             decay, 0.0)
      .real();
}

double norm_sq(const WaveletParams& p) {
  validate(p);
  return std::exp(-(p.alpha + 1.0) * std::log(2.0) +
                  log_gamma(p.n + p.alpha + 1.0) - log_gamma(p.n + 1.0));
}

double norm_sq_quadrature(const WaveletParams& p) {
  validate(p);
  const FreqFunction psi = mother_freq(p);
  DecayClass decay{DecayClass::Kind::Exponential, 2.0, p.alpha, 0.0};
  return integrate_halfline(
             [&psi](double xi) {
               const std::complex<double> v = psi.eval(xi);
               return v * v;
             },
             decay, 0.0)
      .real();
}

NormalizationCheck check_normalization(const WaveletParams& p) {
  NormalizationCheck out;
  out.admissibility_closed = admissibility(p);
  out.admissibility_quad = admissibility_quadrature(p);
  out.norm_closed = norm_sq(p);
  out.norm_quad = norm_sq_quadrature(p);
  out.ratio_closed = out.admissibility_closed / out.norm_closed;
  return out;
}

std::complex<double> inner_product_freq(const FreqFunction& f,
                                        const FreqFunction& g) {
  validate_decay(f.decay);
  validate_decay(g.decay);
  const DecayClass decay = combine_decay(f.decay, g.decay);
  return integrate_halfline(
      [&](double xi) { return f.eval(xi) * std::conj(g.eval(xi)); }, decay,
      0.0);
}

std::complex<double> wavelet_transform_pair(const FreqFunction& f,
                                            const FreqFunction& psi,
                                            const HPoint& z) {
  validate_decay(f.decay);
  validate_decay(psi.decay);
  const DecayClass decay = combine_decay(f.decay, scale_decay(psi.decay, z.s));
  const double root_s = std::sqrt(z.s);
  const std::complex<double> value =
      root_s * integrate_halfline(
                   [&](double xi) {
                     return f.eval(xi) * std::conj(psi.eval(z.s * xi)) *
                            std::exp(std::complex<double>(0.0, z.x * xi));
                   },
                   decay, z.x);
  // Cauchy-Schwarz bound |W f(z)|^2 <= <f,f> <psi,psi> (the dilation
  // z-dependence cancels: pi(z) is unitary).
  const double f2 = inner_product_freq(f, f).real();
  const double p2 = inner_product_freq(psi, psi).real();
  const double bound = f2 * p2;
  if (std::norm(value) > bound * (1.0 + 1e-9) + 1e-14 * (1.0 + bound)) {
    throw std::runtime_error(
        "wavelet_transform: computed value breaks the Cauchy-Schwarz bound; "
        "quadrature inputs are inconsistent");
  }
  return value;
}

std::complex<double> wavelet_transform(const FreqFunction& f,
                                       const WaveletParams& p,
                                       const HPoint& z) {
  validate(p);
  return wavelet_transform_pair(f, mother_freq(p), z);
}

std::complex<double> integrate_halfline(
    const std::function<std::complex<double>(double)>& h,
    const DecayClass& decay, double osc, double rel_tol) {
  validate_decay(decay);
  // Smooth, mildly oscillatory exponential integrands: decay-matched
  // modified Gauss-Laguerre, refined by order doubling.
  if (decay.kind == DecayClass::Kind::Exponential &&
      std::fabs(osc) <= decay.rate) {
    const Accum a80 = laguerre_pass(h, decay.rate, decay.power, 80);
    const Accum a160 = laguerre_pass(h, decay.rate, decay.power, 160);
    if (close_enough(a80.value, a160.value, a160.l1, rel_tol)) {
      return a160.value;
    }
    // Fall through to the oscillation-robust path.
  }
  const double L = decay_cutoff(decay);
  const double width0 =
      std::min(L / 6.0, 2.8 / std::max(std::fabs(osc), 1e-30));
  double width = std::max(width0, L / 4000.0);
  Accum prev = panel_pass(h, decay.power, L, width);
  for (int halving = 0; halving < 3; ++halving) {
    width *= 0.5;
    const Accum cur = panel_pass(h, decay.power, L, width);
    if (close_enough(prev.value, cur.value, cur.l1, rel_tol)) {
      return cur.value;
    }
    prev = cur;
  }
  std::ostringstream os;
  os << "integrate_halfline: no convergence to rel_tol=" << rel_tol
     << " (cutoff L=" << L << ", oscillation=" << osc << ")";
  throw AccuracyError(os.str());
}

}  // namespace hypwave
