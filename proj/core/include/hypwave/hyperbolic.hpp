#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace hypwave {

/// A point x + i*s of the upper half-plane (s > 0).  Validated on
/// construction so downstream code can assume finiteness.
struct HPoint {
  double x = 0.0;
  double s = 1.0;

  HPoint() = default;
  HPoint(double x_, double s_);

  std::complex<double> z() const { return {x, s}; }
  static HPoint from_complex(std::complex<double> z);
};

/// An element of PSL(2, R), stored as a real 2x2 matrix (a b; c d) that is
/// normalized on construction: determinant rescaled to exactly +1 (inputs
/// whose determinant is not positive are rejected) and the overall sign
/// chosen canonically so that the first entry of (a, b, c, d) exceeding the
/// sign tolerance is positive.  The canonical sign makes equality testing,
/// deduplication, and phase bookkeeping single-valued on PSL(2, R).
struct GroupElement {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  GroupElement() = default;
  GroupElement(double a_, double b_, double c_, double d_);

  static GroupElement identity() { return {}; }

  GroupElement operator*(const GroupElement& rhs) const;
  GroupElement inverse() const;

  double det() const { return a * d - b * c; }
  bool approx_equal(const GroupElement& other, double tol) const;
  bool is_identity(double tol) const;
  std::string str() const;
};

/// Moebius action z -> (a z + b) / (c z + d).  The imaginary part is
/// computed as s / |c z + d|^2, which is positive by construction.
HPoint moebius_apply(const GroupElement& g, const HPoint& z);

/// Derivative cocycle j(g, z) = 1 / (c z + d).
std::complex<double> cocycle_j(const GroupElement& g, const HPoint& z);

/// Geodesic distance for the metric of curvature -1:
/// d(z, w) = 2 asinh(|z - w| / (2 sqrt(Im z Im w))), equivalent to
/// cosh d = 1 + |z - w|^2 / (2 Im z Im w) but stable for nearby points.
double hyp_distance(const HPoint& z, const HPoint& w);

/// Area of a geodesic ball of radius r >= 0: 4 pi sinh^2(r/2).
double ball_area(double r);

/// A discrete measure approximating integration against
/// d mu = dx ds / s^2 over a region of the half-plane.
struct HalfPlaneRule {
  std::vector<HPoint> nodes;
  std::vector<double> weights;
};

/// Tensor rule on the rectangle [x0, x1] x [s0, s1]: Gauss-Legendre in x,
/// and Gauss-Legendre in u = 1/s (which absorbs the 1/s^2 density exactly).
HalfPlaneRule tensor_hyperbolic_rule(double x0, double x1, double s0,
                                     double s1, int nx, int ns);

/// Composite variant: x_panels uniform panels in x and s_panels
/// geometrically spaced panels in s, each panel carrying a (nx x ns) tensor
/// rule.  Used when the integrand needs resolution over several decades
/// of s or oscillates in x.
HalfPlaneRule tensor_hyperbolic_rule_composite(double x0, double x1,
                                               double s0, double s1,
                                               int x_panels, int nx,
                                               int s_panels, int ns);

/// Applies a half-plane rule to a callable f(HPoint) -> T.
template <typename F>
auto mu_integral(const HalfPlaneRule& rule, F&& f) -> decltype(f(HPoint{}) * 0.0) {
  decltype(f(HPoint{}) * 0.0) acc{};
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    acc += rule.weights[j] * f(rule.nodes[j]);
  }
  return acc;
}

/// A region of the half-plane over which areas, traces, and sampling grids
/// are formed.  Four kinds:
///  - rectangle [x0,x1] x [s0,s1];
///  - the standard modular domain |x| <= 1/2, |z| >= 1 (cusped);
///  - the Hecke(q) triangle domain |x| <= cos(pi/q), |z| >= 1 (cusped);
///  - a Dirichlet cell around a center, cut out by a finite list of
///    competing orbit images of the center.
/// Cusped kinds carry an optional truncation height S; operations that
/// need a bounded region (Monte Carlo, discretization grids) reject an
/// untruncated cusped domain as a configuration error.
class DomainSpec {
 public:
  enum class Kind { Rectangle, ModularStandard, Hecke, Dirichlet };

  static DomainSpec rectangle(double x0, double x1, double s0, double s1);
  static DomainSpec modular_standard();
  static DomainSpec hecke(int q);
  /// neighbors: images g(center) for the group elements competing with the
  /// identity; bounding box must enclose the (truncated) cell.
  static DomainSpec dirichlet(const HPoint& center,
                              std::vector<HPoint> neighbors, double x0,
                              double x1, double s0, double s1);

  Kind kind() const { return kind_; }
  bool cusped() const {
    return kind_ == Kind::ModularStandard || kind_ == Kind::Hecke;
  }

  /// Returns a copy with the cusp truncated at height S (cusped kinds only).
  DomainSpec truncated(double S) const;
  double truncation() const { return s_trunc_; }
  bool is_truncated() const {
    return s_trunc_ < std::numeric_limits<double>::infinity();
  }

  /// Membership (closed conditions; the boundary is mu-null).  Truncation
  /// applies when set.
  bool contains(const HPoint& z) const;

  /// Bounding box of the (truncated) domain.  Throws for an untruncated
  /// cusped domain.
  double x_lo() const;
  double x_hi() const;
  double s_lo() const;
  double s_hi() const;

  /// Width of the cusp neck (x-extent at large s); cusped kinds only.
  double cusp_width() const;

  int hecke_q() const { return q_; }
  const HPoint& dirichlet_center() const { return center_; }
  const std::vector<HPoint>& dirichlet_neighbors() const { return neighbors_; }

  std::string describe() const;

 private:
  DomainSpec() = default;
  Kind kind_ = Kind::Rectangle;
  double x0_ = 0.0, x1_ = 1.0, s0_ = 1.0, s1_ = 2.0;  // rectangle / bbox
  int q_ = 0;
  HPoint center_;
  std::vector<HPoint> neighbors_;
  double s_trunc_ = std::numeric_limits<double>::infinity();
};

enum class AreaMethod { GaussBonnet, MonteCarlo };

struct McResult {
  double value = 0.0;
  double stderr_est = 0.0;
};

struct McOptions {
  std::size_t samples = 200000;
  std::uint64_t seed = 1;
};

/// mu-area of a domain.  GaussBonnet returns the closed-form value (angle
/// defect for the triangle kinds, direct integral for rectangles; truncation
/// subtracts the exact cusp-neck tail) with zero standard error; it is a
/// configuration error for Dirichlet cells, which have no closed form here.
/// MonteCarlo estimates the area by rejection sampling of the bounding box
/// under d mu and reports the 1-sigma standard error.
McResult domain_area(const DomainSpec& dom, AreaMethod method,
                     const McOptions& mc = {});

/// Monte Carlo integral of f over the domain against d mu, by rejection
/// sampling of the bounding box (x uniform, s by inverse transform of
/// 1/s^2).  Deterministic for fixed options.
McResult mu_integral_mc(const std::function<double(const HPoint&)>& f,
                        const DomainSpec& dom, const McOptions& mc = {});

}  // namespace hypwave
