#include "hypwave/hyperbolic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hypwave/prng.hpp"
#include "hypwave/specfun.hpp"

namespace hypwave {

namespace {
constexpr double kSignTol = 1e-12;
constexpr double kPi = std::numbers::pi;
}  // namespace

HPoint::HPoint(double x_, double s_) : x(x_), s(s_) {
  if (!std::isfinite(x) || !std::isfinite(s) || !(s > 0.0)) {
    throw std::invalid_argument("HPoint: need finite x and s > 0");
  }
}

HPoint HPoint::from_complex(std::complex<double> z) {
  return HPoint(z.real(), z.imag());
}

GroupElement::GroupElement(double a_, double b_, double c_, double d_)
    : a(a_), b(b_), c(c_), d(d_) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) ||
      !std::isfinite(d)) {
    throw std::invalid_argument("GroupElement: entries must be finite");
  }
  const double det0 = a * d - b * c;
  if (!(det0 > kSignTol)) {
    throw std::invalid_argument(
        "GroupElement: determinant must be positive (orientation preserving)");
  }
  const double scale = 1.0 / std::sqrt(det0);
  a *= scale;
  b *= scale;
  c *= scale;
  d *= scale;
  // Canonical representative of {M, -M}: first entry larger than the sign
  // tolerance is made positive.
  const double entries[4] = {a, b, c, d};
  for (double e : entries) {
    if (std::fabs(e) > kSignTol) {
      if (e < 0.0) {
        a = -a;
        b = -b;
        c = -c;
        d = -d;
      }
      break;
    }
  }
}

GroupElement GroupElement::operator*(const GroupElement& rhs) const {
  return GroupElement(a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d,
                      c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d);
}

GroupElement GroupElement::inverse() const {
  return GroupElement(d, -b, -c, a);
}

bool GroupElement::approx_equal(const GroupElement& other, double tol) const {
  return std::fabs(a - other.a) <= tol && std::fabs(b - other.b) <= tol &&
         std::fabs(c - other.c) <= tol && std::fabs(d - other.d) <= tol;
}

bool GroupElement::is_identity(double tol) const {
  return approx_equal(GroupElement::identity(), tol);
}

std::string GroupElement::str() const {
  std::ostringstream os;
  os.precision(12);
  os << "[" << a << " " << b << "; " << c << " " << d << "]";
  return os.str();
}

HPoint moebius_apply(const GroupElement& g, const HPoint& z) {
  const std::complex<double> zz = z.z();
  const std::complex<double> num = g.a * zz + g.b;
  const std::complex<double> den = g.c * zz + g.d;
  const double den2 = std::norm(den);
  return HPoint((num * std::conj(den)).real() / den2, z.s / den2);
}

std::complex<double> cocycle_j(const GroupElement& g, const HPoint& z) {
  return 1.0 / (g.c * z.z() + g.d);
}

double hyp_distance(const HPoint& z, const HPoint& w) {
  const double dx = z.x - w.x;
  const double ds = z.s - w.s;
  const double chord = std::sqrt(dx * dx + ds * ds);
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(z.s * w.s)));
}

double ball_area(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("ball_area: radius must be finite and >= 0");
  }
  const double sh = std::sinh(0.5 * r);
  return 4.0 * kPi * sh * sh;
}

HalfPlaneRule tensor_hyperbolic_rule(double x0, double x1, double s0,
                                     double s1, int nx, int ns) {
  return tensor_hyperbolic_rule_composite(x0, x1, s0, s1, 1, nx, 1, ns);
}

HalfPlaneRule tensor_hyperbolic_rule_composite(double x0, double x1,
                                               double s0, double s1,
                                               int x_panels, int nx,
                                               int s_panels, int ns) {
  if (!(x0 < x1) || !(0.0 < s0) || !(s0 < s1) || !std::isfinite(x0) ||
      !std::isfinite(x1) || !std::isfinite(s1)) {
    throw std::invalid_argument("tensor rule: need x0 < x1 and 0 < s0 < s1");
  }
  if (x_panels < 1 || s_panels < 1 || nx < 1 || ns < 1) {
    throw std::invalid_argument("tensor rule: panel/order counts must be >= 1");
  }
  HalfPlaneRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(x_panels) * nx * s_panels * ns);
  rule.weights.reserve(rule.nodes.capacity());

  const double rho = std::pow(s1 / s0, 1.0 / s_panels);
  for (int px = 0; px < x_panels; ++px) {
    const double xa = x0 + (x1 - x0) * px / x_panels;
    const double xb = x0 + (x1 - x0) * (px + 1) / x_panels;
    const QuadratureRule xr = gauss_legendre(nx, xa, xb);
    for (int ps = 0; ps < s_panels; ++ps) {
      const double sa = s0 * std::pow(rho, ps);
      const double sb = (ps + 1 == s_panels) ? s1 : s0 * std::pow(rho, ps + 1);
      // In u = 1/s the density dx ds / s^2 becomes plain dx du.
      const QuadratureRule ur = gauss_legendre(ns, 1.0 / sb, 1.0 / sa);
      for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ns; ++j) {
          rule.nodes.emplace_back(xr.nodes[i], 1.0 / ur.nodes[j]);
          rule.weights.push_back(xr.weights[i] * ur.weights[j]);
        }
      }
    }
  }
  return rule;
}

// ---------------------------------------------------------------------------
// DomainSpec

DomainSpec DomainSpec::rectangle(double x0, double x1, double s0, double s1) {
  if (!(x0 < x1) || !(0.0 < s0) || !(s0 < s1) || !std::isfinite(x0) ||
      !std::isfinite(x1) || !std::isfinite(s1)) {
    throw std::invalid_argument("rectangle domain: need x0 < x1, 0 < s0 < s1");
  }
  DomainSpec dom;
  dom.kind_ = Kind::Rectangle;
  dom.x0_ = x0;
  dom.x1_ = x1;
  dom.s0_ = s0;
  dom.s1_ = s1;
  return dom;
}

DomainSpec DomainSpec::modular_standard() {
  DomainSpec dom;
  dom.kind_ = Kind::ModularStandard;
  dom.x0_ = -0.5;
  dom.x1_ = 0.5;
  dom.s0_ = std::sqrt(3.0) / 2.0;
  dom.s1_ = std::numeric_limits<double>::infinity();
  return dom;
}

DomainSpec DomainSpec::hecke(int q) {
  if (q < 3) throw std::invalid_argument("hecke domain: need q >= 3");
  DomainSpec dom;
  dom.kind_ = Kind::Hecke;
  dom.q_ = q;
  const double lambda = 2.0 * std::cos(kPi / q);
  dom.x0_ = -lambda / 2.0;
  dom.x1_ = lambda / 2.0;
  dom.s0_ = std::sin(kPi / q);
  dom.s1_ = std::numeric_limits<double>::infinity();
  return dom;
}

DomainSpec DomainSpec::dirichlet(const HPoint& center,
                                 std::vector<HPoint> neighbors, double x0,
                                 double x1, double s0, double s1) {
  if (neighbors.empty()) {
    throw std::invalid_argument("dirichlet domain: need at least one neighbor");
  }
  if (!(x0 < x1) || !(0.0 < s0) || !(s0 < s1) || !std::isfinite(s1)) {
    throw std::invalid_argument("dirichlet domain: invalid bounding box");
  }
  DomainSpec dom;
  dom.kind_ = Kind::Dirichlet;
  dom.center_ = center;
  dom.neighbors_ = std::move(neighbors);
  dom.x0_ = x0;
  dom.x1_ = x1;
  dom.s0_ = s0;
  dom.s1_ = s1;
  return dom;
}

DomainSpec DomainSpec::truncated(double S) const {
  if (!cusped()) {
    throw std::invalid_argument("truncated: only cusped domains have a cusp");
  }
  if (!(S >= 1.0) || !std::isfinite(S)) {
    throw std::invalid_argument("truncated: need finite height S >= 1");
  }
  DomainSpec dom = *this;
  dom.s_trunc_ = S;
  return dom;
}

bool DomainSpec::contains(const HPoint& z) const {
  switch (kind_) {
    case Kind::Rectangle:
      return z.x >= x0_ && z.x <= x1_ && z.s >= s0_ && z.s <= s1_;
    case Kind::ModularStandard:
    case Kind::Hecke: {
      if (z.s > s_trunc_) return false;
      if (z.x < x0_ || z.x > x1_) return false;
      return z.x * z.x + z.s * z.s >= 1.0;
    }
    case Kind::Dirichlet: {
      if (z.x < x0_ || z.x > x1_ || z.s < s0_ || z.s > s1_) return false;
      const double d0 = hyp_distance(z, center_);
      for (const HPoint& n : neighbors_) {
        if (hyp_distance(z, n) < d0) return false;
      }
      return true;
    }
  }
  return false;
}

double DomainSpec::x_lo() const { return x0_; }
double DomainSpec::x_hi() const { return x1_; }
double DomainSpec::s_lo() const { return s0_; }

double DomainSpec::s_hi() const {
  const double hi = cusped() ? s_trunc_ : s1_;
  if (!std::isfinite(hi)) {
    throw std::invalid_argument(
        "domain is unbounded in s: truncate the cusp before discretizing");
  }
  return hi;
}

double DomainSpec::cusp_width() const {
  if (kind_ == Kind::ModularStandard) return 1.0;
  if (kind_ == Kind::Hecke) return 2.0 * std::cos(kPi / q_);
  throw std::invalid_argument("cusp_width: domain has no cusp");
}

std::string DomainSpec::describe() const {
  std::ostringstream os;
  os.precision(12);
  switch (kind_) {
    case Kind::Rectangle:
      os << "rectangle [" << x0_ << "," << x1_ << "]x[" << s0_ << "," << s1_
         << "]";
      break;
    case Kind::ModularStandard:
      os << "modular-standard";
      break;
    case Kind::Hecke:
      os << "hecke(q=" << q_ << ")";
      break;
    case Kind::Dirichlet:
      os << "dirichlet(center=" << center_.x << "+" << center_.s << "i, "
         << neighbors_.size() << " neighbors)";
      break;
  }
  if (cusped() && is_truncated()) os << " truncated at s=" << s_trunc_;
  return os.str();
}

McResult domain_area(const DomainSpec& dom, AreaMethod method,
                     const McOptions& mc) {
  if (method == AreaMethod::MonteCarlo) {
    return mu_integral_mc([](const HPoint&) { return 1.0; }, dom, mc);
  }
  // Closed forms: angle defect pi - sum(vertex angles) for the triangle
  // kinds, direct integral for rectangles.
  switch (dom.kind()) {
    case DomainSpec::Kind::Rectangle: {
      const double area = (dom.x_hi() - dom.x_lo()) *
                          (1.0 / dom.s_lo() - 1.0 / dom.s_hi());
      return {area, 0.0};
    }
    case DomainSpec::Kind::ModularStandard:
    case DomainSpec::Kind::Hecke: {
      // Vertex angles: pi/q at the two elliptic corners, 0 at the cusp
      // (q = 3 for the modular domain).
      const int q = (dom.kind() == DomainSpec::Kind::Hecke) ? dom.hecke_q() : 3;
      double area = kPi - 2.0 * kPi / q;
      if (dom.is_truncated()) {
        // The neck above height S is an exact rectangle in (x, s).
        area -= dom.cusp_width() / dom.truncation();
      }
      return {area, 0.0};
    }
    case DomainSpec::Kind::Dirichlet:
      throw std::invalid_argument(
          "domain_area: no closed form for dirichlet cells; use monte-carlo");
  }
  throw std::logic_error("domain_area: unreachable");
}

McResult mu_integral_mc(const std::function<double(const HPoint&)>& f,
                        const DomainSpec& dom, const McOptions& mc) {
  if (mc.samples < 2) {
    throw std::invalid_argument("mu_integral_mc: need at least 2 samples");
  }
  const double x0 = dom.x_lo(), x1 = dom.x_hi();
  const double s0 = dom.s_lo(), s1 = dom.s_hi();  // throws if unbounded
  const double u_hi = 1.0 / s0, u_lo = 1.0 / s1;
  const double box_mu = (x1 - x0) * (u_hi - u_lo);

  Prng rng(mc.seed);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < mc.samples; ++i) {
    const double x = rng.uniform(x0, x1);
    const double u = rng.uniform(u_lo, u_hi);
    const HPoint z(x, 1.0 / u);
    const double val = dom.contains(z) ? f(z) : 0.0;
    sum += val;
    sum_sq += val * val;
  }
  const double n = static_cast<double>(mc.samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean) / (n - 1.0);
  return {box_mu * mean, box_mu * std::sqrt(var)};
}

}  // namespace hypwave
