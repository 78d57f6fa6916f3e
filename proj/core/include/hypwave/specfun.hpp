#pragma once

#include <vector>

namespace hypwave {

/// Parameters of the classical orthogonal polynomials used by the toolkit:
/// degree n >= 0 and weight exponent alpha > -1.  beta is the second Jacobi
/// exponent; every use in this project has beta = 0 but the evaluators accept
/// general values.
struct PolyParams {
  int n = 0;
  double alpha = 1.0;
  double beta = 0.0;
};

/// Generalized Laguerre polynomial L_n^(alpha)(t) by the three-term upward
/// recurrence (k+1)L_{k+1} = (2k+1+alpha-t)L_k - (k+alpha)L_{k-1}.
double laguerre(const PolyParams& p, double t);

/// Jacobi polynomial P_n^(alpha,beta)(t) by the standard three-term
/// recurrence.  Requires alpha, beta > -1.
double jacobi(const PolyParams& p, double t);

/// log(Gamma(x)) for x > 0.  Thin domain-checked wrapper over the C library
/// implementation (which is accurate to ~1 ulp); throws std::domain_error
/// for x <= 0 or non-finite x.
double log_gamma(double x);

/// Generalized binomial coefficient C(a, k) for real a and integer k >= 0,
/// evaluated as exp(log_gamma(a+1) - log_gamma(k+1) - log_gamma(a-k+1)) when
/// all Gamma arguments are positive, and by the explicitly signed product
/// a(a-1)...(a-k+1)/k! otherwise (which also covers the zero cases at
/// integer a < k exactly).
double binomial_general(double a, int k);

/// A one-dimensional Gaussian quadrature rule: integral of f against the
/// rule's weight function equals sum_j weights[j] * f(nodes[j]) exactly for
/// polynomial f of degree <= 2*order - 1.
struct QuadratureRule {
  enum class Kind {
    GaussLaguerre,  ///< weight t^exponent * exp(-t) on (0, inf)
    GaussLegendre,  ///< weight 1 on [lo, hi]
    GaussJacobi,    ///< weight ((t - lo)/(hi - lo))^exponent on [lo, hi]
  };
  Kind kind = Kind::GaussLegendre;
  int order = 0;
  double exponent = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Laguerre rule for weight t^a e^{-t} on (0, inf); a > -1.
/// Nodes ascending.  Built by Golub-Welsch from the Jacobi matrix of the
/// weight (symmetric tridiagonal eigenproblem).
QuadratureRule gauss_laguerre(int order, double a);

/// As gauss_laguerre, but the returned weights are the *modified* weights
/// W_j = w_j * e^{t_j} * t_j^{-a}, so that sum_j W_j h(t_j) approximates
/// integral_0^inf h(t) dt for integrands h that already contain their own
/// t^a e^{-t} decay.  Weights are assembled in log space so no intermediate
/// under/overflows occur; order is capped at 320 for that reason.
QuadratureRule gauss_laguerre_modified(int order, double a);

/// Gauss-Legendre rule on [lo, hi]; nodes ascending.
QuadratureRule gauss_legendre(int order, double lo, double hi);

/// Gauss-Jacobi-type rule on [0, w] for weight (t/w)^p (one-sided power
/// endpoint factor, p > -1).  Used to open integration intervals whose left
/// endpoint carries an algebraic singularity t^p.
QuadratureRule gauss_power_endpoint(int order, double p, double w);

/// integral_0^inf t^(alpha+shift) e^{-t} L_n^alpha(t)^2 dt by Gauss-Laguerre
/// quadrature with the weight matched to the integrand (shift in {-1, 0});
/// exact up to roundoff because the remaining factor is a polynomial.
double quad_laguerre_norm(const PolyParams& p, int shift);

/// Applies a rule to a callable.
template <typename F>
auto integrate(const QuadratureRule& rule, F&& f)
    -> decltype(f(0.0) * 0.0) {
  decltype(f(0.0) * 0.0) acc{};
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    acc += rule.weights[j] * f(rule.nodes[j]);
  }
  return acc;
}

}  // namespace hypwave
