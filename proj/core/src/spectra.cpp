#include "hypwave/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hypwave/specfun.hpp"
#include "hypwave/tridiag.hpp"

namespace hypwave {

namespace {

using cplx = std::complex<double>;

constexpr double kCollisionTol = 1e-9;   // hyperbolic distance for duplicates
constexpr double kHermitianTol = 1e-10;  // relative input-symmetry gate
constexpr double kResidualTol = 1e-9;    // extremal eigenpair residual gate

/// Unitary reduction of a Hermitian matrix to real symmetric tridiagonal
/// form by Householder reflections, accumulating the (complex) basis change
/// Q so that Q^H A Q = tridiag(d, e).  A final diagonal phase twist makes
/// the subdiagonal real and non-negative.
void householder_tridiag(const HermitianMatrix& M, std::vector<double>& d,
                         std::vector<double>& e, std::vector<cplx>& q) {
  const std::size_t n = M.dim();
  std::vector<cplx> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // Exact symmetrization removes rounding-level skew from assembly.
      a[i * n + j] = 0.5 * (M.at(i, j) + std::conj(M.at(j, i)));
    }
  }
  q.assign(n * n, cplx(0.0));
  for (std::size_t i = 0; i < n; ++i) q[i * n + i] = 1.0;
  d.assign(n, 0.0);
  e.assign(n > 1 ? n - 1 : 0, 0.0);
  if (n == 1) {
    d[0] = a[0].real();
    return;
  }

  std::vector<cplx> u(n), p(n), qv(n);
  for (std::size_t k = 0; k + 2 <= n; ++k) {
    // Annihilate column k below the first subdiagonal.
    double colnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) colnorm += std::norm(a[i * n + k]);
    colnorm = std::sqrt(colnorm);
    const cplx head = a[(k + 1) * n + k];
    if (colnorm > 0.0) {
      const cplx phase =
          (std::abs(head) > 0.0) ? head / std::abs(head) : cplx(1.0);
      // Householder direction u = x + phase*|x|*e1, normalized.
      double unorm_sq = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) {
        u[i] = a[i * n + k];
        if (i == k + 1) u[i] += phase * colnorm;
        unorm_sq += std::norm(u[i]);
      }
      if (unorm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(unorm_sq);
        for (std::size_t i = k + 1; i < n; ++i) u[i] *= inv;
        // Two-sided update of the trailing block:
        // A <- A - 2 u q^H - 2 q u^H with q = A u - (u^H A u) u.
        cplx kappa = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
          cplx acc = 0.0;
          for (std::size_t j = k + 1; j < n; ++j) acc += a[i * n + j] * u[j];
          p[i] = acc;
          kappa += std::conj(u[i]) * acc;
        }
        for (std::size_t i = k + 1; i < n; ++i) qv[i] = p[i] - kappa * u[i];
        for (std::size_t i = k + 1; i < n; ++i) {
          for (std::size_t j = k + 1; j < n; ++j) {
            a[i * n + j] -= 2.0 * (u[i] * std::conj(qv[j]) +
                                   qv[i] * std::conj(u[j]));
          }
        }
        // Column/row k of the reflected matrix.
        const cplx sub = -phase * colnorm;
        a[(k + 1) * n + k] = sub;
        a[k * n + (k + 1)] = std::conj(sub);
        for (std::size_t i = k + 2; i < n; ++i) {
          a[i * n + k] = 0.0;
          a[k * n + i] = 0.0;
        }
        // Accumulate Q <- Q (I - 2 u u^H).
        for (std::size_t r = 0; r < n; ++r) {
          cplx acc = 0.0;
          for (std::size_t j = k + 1; j < n; ++j) acc += q[r * n + j] * u[j];
          acc *= 2.0;
          for (std::size_t j = k + 1; j < n; ++j) {
            q[r * n + j] -= acc * std::conj(u[j]);
          }
        }
      }
    }
  }

  // Phase-twist the basis so the subdiagonal becomes |t_j| >= 0.
  cplx running(1.0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    d[j] = a[j * n + j].real();
    const cplx t = a[(j + 1) * n + j];
    const double mag = std::abs(t);
    e[j] = mag;
    const cplx step = (mag > 0.0) ? t / mag : cplx(1.0);
    running *= step;
    for (std::size_t r = 0; r < n; ++r) q[r * n + (j + 1)] *= running;
  }
  d[n - 1] = a[(n - 1) * n + (n - 1)].real();
}

std::vector<std::size_t> collision_flags(const std::vector<HPoint>& pts) {
  std::vector<std::size_t> flagged;
  for (std::size_t j = 1; j < pts.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (hyp_distance(pts[i], pts[j]) < kCollisionTol) {
        flagged.push_back(j);
        break;
      }
    }
  }
  return flagged;
}

std::vector<HPoint> orbit_images(const OrbitSet& orbit) {
  std::vector<HPoint> pts;
  pts.reserve(orbit.elements.size());
  for (const auto& e : orbit.elements) pts.push_back(e.image);
  return pts;
}

/// Per-column quadrature over a domain: Gauss-Legendre in x, and
/// Gauss-Legendre in u = 1/s over the column's s-interval, which
/// integrates dx ds / s^2 exactly on each column.
void column_exact_grid(const DomainSpec& dom, int res,
                       std::vector<HPoint>& nodes,
                       std::vector<double>& weights) {
  const auto gx = gauss_legendre(res, dom.x_lo(), dom.x_hi());
  const bool circular_floor = dom.cusped();
  for (int ix = 0; ix < res; ++ix) {
    const double x = gx.nodes[ix];
    const double s_lo =
        circular_floor ? std::sqrt(std::max(1.0 - x * x, 0.0)) : dom.s_lo();
    const double s_hi = dom.s_hi();
    const auto gu = gauss_legendre(res, 1.0 / s_hi, 1.0 / s_lo);
    for (int iu = 0; iu < res; ++iu) {
      nodes.push_back(HPoint{x, 1.0 / gu.nodes[iu]});
      weights.push_back(gx.weights[ix] * gu.weights[iu]);
    }
  }
}

/// Masked bounding-box grid for domains with no per-column closed form.
void masked_grid(const DomainSpec& dom, int res, std::vector<HPoint>& nodes,
                 std::vector<double>& weights) {
  const auto gx = gauss_legendre(res, dom.x_lo(), dom.x_hi());
  const auto gu = gauss_legendre(res, 1.0 / dom.s_hi(), 1.0 / dom.s_lo());
  for (int ix = 0; ix < res; ++ix) {
    for (int iu = 0; iu < res; ++iu) {
      const HPoint z{gx.nodes[ix], 1.0 / gu.nodes[iu]};
      if (dom.contains(z)) {
        nodes.push_back(z);
        weights.push_back(gx.weights[ix] * gu.weights[iu]);
      }
    }
  }
}

McResult report_area(const DomainSpec& dom, const McOptions& mc) {
  if (dom.kind() == DomainSpec::Kind::Dirichlet) {
    return domain_area(dom, AreaMethod::MonteCarlo, mc);
  }
  return domain_area(dom, AreaMethod::GaussBonnet);
}

}  // namespace

std::string density_verdict(double ratio) {
  if (ratio > 1.0) {
    return "frame impossible: the domain area exceeds the critical area "
           "(ratio > 1); the Riesz-side necessary condition holds, which "
           "does not imply existence";
  }
  if (ratio < 1.0) {
    return "Riesz sequence impossible: the domain area is below the "
           "critical area (ratio < 1); the frame-side necessary condition "
           "holds, which does not imply existence";
  }
  return "critical density: both necessary conditions hold with equality; "
         "existence is not implied in either direction";
}

double HermitianMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      worst = std::max(worst,
                       std::abs(a_[i * n_ + j] - std::conj(a_[j * n_ + i])));
    }
  }
  return worst;
}

double HermitianMatrix::max_abs() const {
  double worst = 0.0;
  for (const cplx& v : a_) worst = std::max(worst, std::abs(v));
  return worst;
}

double HermitianMatrix::frobenius() const {
  double acc = 0.0;
  for (const cplx& v : a_) acc += std::norm(v);
  return std::sqrt(acc);
}

HermitianMatrix HermitianMatrix::principal(std::size_t k) const {
  if (k > n_) {
    throw std::invalid_argument(
        "principal submatrix larger than the matrix itself");
  }
  HermitianMatrix sub(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) sub.at(i, j) = a_[i * n_ + j];
  }
  return sub;
}

std::vector<cplx> HermitianMatrix::apply(const std::vector<cplx>& v) const {
  if (v.size() != n_) {
    throw std::invalid_argument("matrix-vector size mismatch");
  }
  std::vector<cplx> out(n_, cplx(0.0));
  for (std::size_t i = 0; i < n_; ++i) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) acc += a_[i * n_ + j] * v[j];
    out[i] = acc;
  }
  return out;
}

GramMatrix gram_assemble(const WaveletParams& p,
                         const std::vector<HPoint>& points) {
  validate(p);
  if (points.empty()) {
    throw std::invalid_argument("gram_assemble: empty point set");
  }
  const double c_psi = admissibility(p);
  GramMatrix g;
  g.points = points;
  g.diagonal = norm_sq(p);
  g.flagged = collision_flags(points);
  const std::size_t n = points.size();
  g.entries = HermitianMatrix(n);
  for (std::size_t j = 0; j < n; ++j) {
    g.entries.at(j, j) = g.diagonal;
    for (std::size_t k = j + 1; k < n; ++k) {
      const cplx v = c_psi * kernel_eval(p, points[j], points[k]);
      g.entries.at(j, k) = v;
      g.entries.at(k, j) = std::conj(v);
    }
  }
  return g;
}

GramMatrix gram_assemble(const WaveletParams& p, const OrbitSet& orbit) {
  return gram_assemble(p, orbit_images(orbit));
}

GramMatrix gram_assemble(const SuperParams& sp,
                         const std::vector<HPoint>& points) {
  validate(sp);
  if (points.empty()) {
    throw std::invalid_argument("gram_assemble: empty point set");
  }
  std::vector<WaveletParams> bands;
  std::vector<double> c_band;
  double diag = 0.0;
  for (int n = 0; n < sp.N; ++n) {
    bands.push_back({n, band_alpha(sp.B, n)});
    c_band.push_back(admissibility(bands.back()));
    diag += norm_sq(bands.back());
  }
  GramMatrix g;
  g.points = points;
  g.diagonal = diag;
  g.flagged = collision_flags(points);
  const std::size_t m = points.size();
  g.entries = HermitianMatrix(m);
  for (std::size_t j = 0; j < m; ++j) {
    g.entries.at(j, j) = diag;
    for (std::size_t k = j + 1; k < m; ++k) {
      cplx v = 0.0;
      for (std::size_t b = 0; b < bands.size(); ++b) {
        v += c_band[b] * kernel_eval(bands[b], points[j], points[k]);
      }
      g.entries.at(j, k) = v;
      g.entries.at(k, j) = std::conj(v);
    }
  }
  return g;
}

std::vector<cplx> HermitianSpectrum::eigenvector(std::size_t j) const {
  const std::size_t n = eigenvalues.size();
  if (j >= n || vectors.size() != n * n) {
    throw std::invalid_argument("eigenvector index out of range");
  }
  std::vector<cplx> v(n);
  for (std::size_t r = 0; r < n; ++r) v[r] = vectors[r * n + j];
  return v;
}

HermitianSpectrum hermitian_eig(const HermitianMatrix& M) {
  const std::size_t n = M.dim();
  if (n == 0) throw std::invalid_argument("hermitian_eig: empty matrix");
  if (n > 2000) {
    throw std::invalid_argument(
        "hermitian_eig: dimension exceeds the in-core limit of 2000");
  }
  const double scale = M.max_abs();
  if (M.hermiticity_defect() > kHermitianTol * std::max(1.0, scale)) {
    throw std::invalid_argument(
        "hermitian_eig: input is not Hermitian within tolerance");
  }

  std::vector<double> d, e;
  std::vector<cplx> q;
  householder_tridiag(M, d, e, q);
  linalg::tridiag_ql(d, e, q.data(), n);

  // Sort descending, carrying the vector columns along.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
  HermitianSpectrum spec;
  spec.eigenvalues.resize(n);
  spec.vectors.assign(n * n, cplx(0.0));
  for (std::size_t j = 0; j < n; ++j) {
    spec.eigenvalues[j] = d[order[j]];
    for (std::size_t r = 0; r < n; ++r) {
      spec.vectors[r * n + j] = q[r * n + order[j]];
    }
  }

  // Verify the extremal pairs against the input matrix.
  const double fro = M.frobenius();
  if (fro > 0.0) {
    for (std::size_t j : {std::size_t{0}, n - 1}) {
      const auto v = spec.eigenvector(j);
      const auto mv = M.apply(v);
      double res_sq = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        res_sq += std::norm(mv[r] - spec.eigenvalues[j] * v[r]);
      }
      spec.extremal_residual =
          std::max(spec.extremal_residual, std::sqrt(res_sq) / fro);
    }
    if (spec.extremal_residual > kResidualTol) {
      throw std::runtime_error(
          "hermitian_eig: extremal eigenpair residual exceeds tolerance");
    }
  }
  return spec;
}

std::vector<RieszRow> riesz_diagnostic(const WaveletParams& p,
                                       const GroupPresentation& group,
                                       const HPoint& z,
                                       std::vector<double> radii) {
  validate(p);
  if (radii.empty()) {
    throw std::invalid_argument("riesz_diagnostic: no radii given");
  }
  for (double r : radii) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw std::invalid_argument("riesz_diagnostic: radii must be > 0");
    }
  }
  std::sort(radii.begin(), radii.end());
  const OrbitSet orbit = enumerate_ball(group, z, radii.back());
  if (orbit.truncated) {
    throw TruncatedEnumeration(orbit.elements.size(), radii.back());
  }
  const GramMatrix gram = gram_assemble(p, orbit);

  std::vector<RieszRow> rows;
  double prev_min = 0.0, prev_max = 0.0;
  const double slack = 1e-12 * std::max(1.0, gram.diagonal);
  for (double r : radii) {
    std::size_t count = 0;
    while (count < orbit.elements.size() &&
           orbit.elements[count].distance < r) {
      ++count;
    }
    RieszRow row;
    row.radius = r;
    row.count = count;
    if (count == 0) {
      // r > 0 always captures the identity (distance 0); defensive only.
      rows.push_back(row);
      continue;
    }
    const auto spec = hermitian_eig(gram.entries.principal(count));
    row.lambda_max = spec.eigenvalues.front();
    row.lambda_min = spec.eigenvalues.back();
    if (row.lambda_min < -1e-9 * gram.diagonal) {
      throw std::logic_error(
          "riesz_diagnostic: Gram matrix lost positive semidefiniteness");
    }
    if (!rows.empty() && rows.back().count > 0) {
      // Nested principal submatrices: the extremal eigenvalues interlace.
      if (row.lambda_min > prev_min + slack ||
          row.lambda_max < prev_max - slack) {
        throw std::logic_error(
            "riesz_diagnostic: interlacing violated across nested orbits");
      }
    }
    prev_min = row.lambda_min;
    prev_max = row.lambda_max;
    rows.push_back(row);
  }
  return rows;
}

NystromOperator nystrom_assemble(const WaveletParams& p,
                                 const DomainSpec& dom, int resolution) {
  validate(p);
  if (resolution < 8) {
    throw std::invalid_argument(
        "nystrom_assemble: resolution must be at least 8 per axis");
  }
  if (dom.cusped() && !dom.is_truncated()) {
    throw std::invalid_argument(
        "nystrom_assemble: cusped domain has infinite extent; truncate it "
        "to a finite height first");
  }

  NystromOperator op;
  op.resolution = resolution;
  if (dom.kind() == DomainSpec::Kind::Dirichlet) {
    masked_grid(dom, resolution, op.nodes, op.weights);
  } else {
    column_exact_grid(dom, resolution, op.nodes, op.weights);
  }
  if (op.nodes.empty()) {
    throw std::invalid_argument(
        "nystrom_assemble: no quadrature nodes fall inside the domain");
  }
  if (dom.cusped()) {
    op.cusp_deficit = dom.cusp_width() / dom.truncation();
  }
  op.quadrature_area =
      std::accumulate(op.weights.begin(), op.weights.end(), 0.0);

  const std::size_t n = op.nodes.size();
  op.matrix = HermitianMatrix(n);
  std::vector<double> root_w(n);
  for (std::size_t j = 0; j < n; ++j) root_w[j] = std::sqrt(op.weights[j]);
  for (std::size_t j = 0; j < n; ++j) {
    op.matrix.at(j, j) = root_w[j] * root_w[j] * (p.alpha / 2.0);
    for (std::size_t k = j + 1; k < n; ++k) {
      const cplx v =
          root_w[j] * root_w[k] * kernel_eval(p, op.nodes[j], op.nodes[k]);
      op.matrix.at(j, k) = v;
      op.matrix.at(k, j) = std::conj(v);
    }
  }
  return op;
}

TraceMoments nystrom_trace_moments(const NystromOperator& op) {
  TraceMoments m;
  const std::size_t n = op.matrix.dim();
  for (std::size_t j = 0; j < n; ++j) {
    m.trace += op.matrix.at(j, j).real();
    for (std::size_t k = 0; k < n; ++k) {
      m.second += std::norm(op.matrix.at(j, k));
    }
  }
  return m;
}

double frame_area_threshold(double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("frame threshold: alpha must be > 0");
  }
  return 2.0 / alpha;
}

double band_area_threshold(double B, int n) {
  if (!(B - n - 0.5 > 0.0)) {
    throw std::invalid_argument(
        "band threshold: need B - n - 1/2 > 0 for a genuine band");
  }
  return 1.0 / (B - n - 0.5);
}

double super_area_threshold(double B, int N) {
  validate(SuperParams{B, N});
  return 2.0 / (N * (2.0 * B - N));
}

NyquistReport nyquist_report(const WaveletParams& p, const DomainSpec& dom,
                             const McOptions& mc) {
  validate(p);
  const McResult area = report_area(dom, mc);
  NyquistReport rep;
  std::ostringstream sys;
  sys << "single profile n=" << p.n << " alpha=" << p.alpha;
  rep.system = sys.str();
  rep.domain = dom.describe();
  rep.area = area.value;
  rep.area_stderr = area.stderr_est;
  rep.threshold = frame_area_threshold(p.alpha);
  rep.ratio = rep.area / rep.threshold;
  rep.verdict = density_verdict(rep.ratio);
  return rep;
}

NyquistReport nyquist_report(const SuperParams& sp, const DomainSpec& dom,
                             const McOptions& mc) {
  validate(sp);
  const McResult area = report_area(dom, mc);
  NyquistReport rep;
  std::ostringstream sys;
  sys << "multi-band profile B=" << sp.B << " N=" << sp.N;
  rep.system = sys.str();
  rep.domain = dom.describe();
  rep.area = area.value;
  rep.area_stderr = area.stderr_est;
  rep.threshold = super_area_threshold(sp.B, sp.N);
  rep.ratio = rep.area / rep.threshold;
  for (int n = 0; n < sp.N; ++n) {
    rep.band_thresholds.push_back(band_area_threshold(sp.B, n));
  }
  rep.verdict = density_verdict(rep.ratio);
  return rep;
}

VanishingWitness vanishing_witness(const WaveletParams& p,
                                   const std::vector<HPoint>& points) {
  if (points.size() < 2) {
    throw std::invalid_argument(
        "vanishing_witness: need at least two sample points");
  }
  bool distinct = false;
  for (std::size_t j = 1; j < points.size() && !distinct; ++j) {
    distinct = hyp_distance(points[0], points[j]) >= kCollisionTol;
  }
  if (!distinct) {
    throw std::invalid_argument(
        "vanishing_witness: all sample points coincide, the Gram matrix is "
        "degenerate");
  }

  const GramMatrix gram = gram_assemble(p, points);
  const HermitianSpectrum spec = hermitian_eig(gram.entries);
  const std::size_t n = points.size();

  VanishingWitness w;
  w.norm_sq = gram.diagonal;
  w.lambda_min = spec.eigenvalues.back();
  w.coefficients = spec.eigenvector(n - 1);
  w.eigen_residual = spec.extremal_residual;

  // Deterministic phase: rotate so the largest coefficient is real > 0.
  std::size_t arg_max = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (std::abs(w.coefficients[j]) > std::abs(w.coefficients[arg_max])) {
      arg_max = j;
    }
  }
  const double mag = std::abs(w.coefficients[arg_max]);
  if (mag > 0.0) {
    const cplx rot = std::conj(w.coefficients[arg_max]) / mag;
    for (cplx& c : w.coefficients) c *= rot;
  }
  return w;
}

VanishingWitness vanishing_witness(const WaveletParams& p,
                                   const OrbitSet& orbit) {
  return vanishing_witness(p, orbit_images(orbit));
}

}  // namespace hypwave
