#include "hypwave/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hypwave/tridiag.hpp"

namespace hypwave {

namespace {

void check_poly_params(const PolyParams& p) {
  if (p.n < 0) throw std::invalid_argument("poly degree must be >= 0");
  if (!(p.alpha > -1.0)) {
    throw std::invalid_argument("poly exponent alpha must be > -1");
  }
  if (!(p.beta > -1.0)) {
    throw std::invalid_argument("poly exponent beta must be > -1");
  }
}

void check_order(int order) {
  if (order < 1 || order > 2000) {
    throw std::invalid_argument("quadrature order must be in [1, 2000]");
  }
}

/// Golub-Welsch: nodes are the eigenvalues of the symmetric tridiagonal
/// Jacobi matrix (diag d, offdiag e); the weight of node j is mu0 times the
/// squared first component of the j-th normalized eigenvector.  Returns
/// (nodes, first components) sorted by node.
void golub_welsch(std::vector<double> d, std::vector<double> e, double mu0,
                  std::vector<double>& nodes, std::vector<double>& weights) {
  const std::size_t m = d.size();
  std::vector<double> z(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) z[i * m + i] = 1.0;
  linalg::tridiag_ql<double>(d, e, z.data(), m);

  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });

  nodes.resize(m);
  weights.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    nodes[j] = d[idx[j]];
    const double v0 = z[0 * m + idx[j]];
    weights[j] = mu0 * v0 * v0;
  }
}

/// As golub_welsch but returns log-weights (log mu0 + 2 log|v0|), needed to
/// assemble modified Laguerre weights without underflow.
void golub_welsch_log(std::vector<double> d, std::vector<double> e,
                      double log_mu0, std::vector<double>& nodes,
                      std::vector<double>& log_weights) {
  const std::size_t m = d.size();
  std::vector<double> z(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) z[i * m + i] = 1.0;
  linalg::tridiag_ql<double>(d, e, z.data(), m);

  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });

  nodes.resize(m);
  log_weights.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    nodes[j] = d[idx[j]];
    const double v0 = std::fabs(z[0 * m + idx[j]]);
    if (v0 == 0.0) {
      throw std::runtime_error(
          "gauss_laguerre_modified: eigenvector component underflowed; "
          "reduce the order");
    }
    log_weights[j] = log_mu0 + 2.0 * std::log(v0);
  }
}

void laguerre_jacobi_matrix(int order, double a, std::vector<double>& d,
                            std::vector<double>& e) {
  d.resize(order);
  e.assign(order > 1 ? order - 1 : 0, 0.0);
  for (int i = 0; i < order; ++i) d[i] = 2.0 * i + a + 1.0;
  for (int i = 0; i + 1 < order; ++i) {
    e[i] = std::sqrt((i + 1.0) * (i + 1.0 + a));
  }
}

}  // namespace

double laguerre(const PolyParams& p, double t) {
  check_poly_params(p);
  if (!std::isfinite(t)) throw std::domain_error("laguerre: t not finite");
  if (p.n == 0) return 1.0;
  double lkm1 = 1.0;
  double lk = 1.0 + p.alpha - t;
  for (int k = 1; k < p.n; ++k) {
    const double lkp1 =
        ((2.0 * k + 1.0 + p.alpha - t) * lk - (k + p.alpha) * lkm1) / (k + 1.0);
    lkm1 = lk;
    lk = lkp1;
  }
  return lk;
}

double jacobi(const PolyParams& p, double t) {
  check_poly_params(p);
  if (!std::isfinite(t)) throw std::domain_error("jacobi: t not finite");
  const double a = p.alpha, b = p.beta;
  if (p.n == 0) return 1.0;
  double pkm1 = 1.0;
  double pk = (a + 1.0) + (a + b + 2.0) * (t - 1.0) / 2.0;
  for (int k = 2; k <= p.n; ++k) {
    const double c1 = 2.0 * k * (k + a + b) * (2.0 * k + a + b - 2.0);
    if (c1 == 0.0) {
      throw std::invalid_argument("jacobi: degenerate recurrence (a+b too negative)");
    }
    const double c2 = (2.0 * k + a + b - 1.0) * (a * a - b * b);
    const double c3 = (2.0 * k + a + b - 2.0) * (2.0 * k + a + b - 1.0) *
                      (2.0 * k + a + b);
    const double c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + a + b);
    const double pkp1 = ((c2 + c3 * t) * pk - c4 * pkm1) / c1;
    pkm1 = pk;
    pk = pkp1;
  }
  return pk;
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("log_gamma: argument must be finite and > 0");
  }
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double binomial_general(double a, int k) {
  if (k < 0) throw std::invalid_argument("binomial_general: k must be >= 0");
  if (k == 0) return 1.0;
  if (!std::isfinite(a)) {
    throw std::domain_error("binomial_general: a not finite");
  }
  if (a + 1.0 > 0.0 && a - k + 1.0 > 0.0) {
    return std::exp(log_gamma(a + 1.0) - log_gamma(static_cast<double>(k) + 1.0) -
                    log_gamma(a - k + 1.0));
  }
  // Some Gamma argument is non-positive: fall back to the finite product,
  // which carries the signs explicitly and yields exact zeros when a is a
  // non-negative integer smaller than k.
  double num = 1.0;
  for (int j = 0; j < k; ++j) num *= (a - j);
  double kfact = 1.0;
  for (int j = 2; j <= k; ++j) kfact *= j;
  return num / kfact;
}

QuadratureRule gauss_laguerre(int order, double a) {
  check_order(order);
  if (!(a > -1.0)) {
    throw std::invalid_argument("gauss_laguerre: exponent must be > -1");
  }
  std::vector<double> d, e;
  laguerre_jacobi_matrix(order, a, d, e);
  QuadratureRule rule;
  rule.kind = QuadratureRule::Kind::GaussLaguerre;
  rule.order = order;
  rule.exponent = a;
  golub_welsch(std::move(d), std::move(e), std::exp(log_gamma(a + 1.0)),
               rule.nodes, rule.weights);
  return rule;
}

QuadratureRule gauss_laguerre_modified(int order, double a) {
  check_order(order);
  if (order > 320) {
    throw std::invalid_argument(
        "gauss_laguerre_modified: order capped at 320");
  }
  if (!(a > -1.0)) {
    throw std::invalid_argument("gauss_laguerre_modified: exponent must be > -1");
  }
  std::vector<double> d, e;
  laguerre_jacobi_matrix(order, a, d, e);
  QuadratureRule rule;
  rule.kind = QuadratureRule::Kind::GaussLaguerre;
  rule.order = order;
  rule.exponent = a;
  std::vector<double> logw;
  golub_welsch_log(std::move(d), std::move(e), log_gamma(a + 1.0), rule.nodes,
                   logw);
  rule.weights.resize(rule.nodes.size());
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double t = rule.nodes[j];
    rule.weights[j] = std::exp(logw[j] + t - a * std::log(t));
  }
  return rule;
}

QuadratureRule gauss_legendre(int order, double lo, double hi) {
  check_order(order);
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("gauss_legendre: need finite lo < hi");
  }
  std::vector<double> d(order, 0.0);
  std::vector<double> e(order > 1 ? order - 1 : 0, 0.0);
  for (int k = 1; k < order; ++k) {
    e[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  }
  QuadratureRule rule;
  rule.kind = QuadratureRule::Kind::GaussLegendre;
  rule.order = order;
  rule.lo = lo;
  rule.hi = hi;
  golub_welsch(std::move(d), std::move(e), 2.0, rule.nodes, rule.weights);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    rule.nodes[j] = mid + half * rule.nodes[j];
    rule.weights[j] *= half;
  }
  return rule;
}

QuadratureRule gauss_power_endpoint(int order, double p, double w) {
  check_order(order);
  if (!(p > -1.0)) {
    throw std::invalid_argument("gauss_power_endpoint: power must be > -1");
  }
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw std::invalid_argument("gauss_power_endpoint: width must be finite > 0");
  }
  // Jacobi weight (1+x)^p on [-1, 1] (the (1-x) exponent is 0).
  std::vector<double> d(order, 0.0);
  std::vector<double> e(order > 1 ? order - 1 : 0, 0.0);
  d[0] = p / (p + 2.0);
  for (int k = 1; k < order; ++k) {
    d[k] = p * p / ((2.0 * k + p) * (2.0 * k + p + 2.0));
  }
  if (order > 1) {
    e[0] = std::sqrt(4.0 * (p + 1.0) / ((p + 2.0) * (p + 2.0) * (p + 3.0)));
    for (int k = 2; k < order; ++k) {
      const double q = 2.0 * k + p;
      e[k - 1] = std::sqrt(4.0 * k * k * (k + p) * (k + p) /
                           (q * q * (q + 1.0) * (q - 1.0)));
    }
  }
  const double mu0 = std::exp((p + 1.0) * std::log(2.0)) / (p + 1.0);
  QuadratureRule rule;
  rule.kind = QuadratureRule::Kind::GaussJacobi;
  rule.order = order;
  rule.exponent = p;
  rule.lo = 0.0;
  rule.hi = w;
  golub_welsch(std::move(d), std::move(e), mu0, rule.nodes, rule.weights);
  const double wscale = w / std::exp((p + 1.0) * std::log(2.0));
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    rule.nodes[j] = w * (1.0 + rule.nodes[j]) / 2.0;
    rule.weights[j] *= wscale;
  }
  return rule;
}

double quad_laguerre_norm(const PolyParams& p, int shift) {
  check_poly_params(p);
  if (shift != 0 && shift != -1) {
    throw std::invalid_argument("quad_laguerre_norm: shift must be 0 or -1");
  }
  const double a = p.alpha + shift;
  if (!(a > -1.0)) {
    throw std::invalid_argument(
        "quad_laguerre_norm: alpha + shift must be > -1");
  }
  const QuadratureRule rule = gauss_laguerre(p.n + 8, a);
  double acc = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double l = laguerre(p, rule.nodes[j]);
    acc += rule.weights[j] * l * l;
  }
  return acc;
}

}  // namespace hypwave
