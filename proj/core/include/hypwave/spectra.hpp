#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "hypwave/fuchsian.hpp"
#include "hypwave/hyperbolic.hpp"
#include "hypwave/kernel.hpp"
#include "hypwave/wavelet.hpp"

namespace hypwave {

/// Dense Hermitian matrix, row-major.  Assembly routines fill both
/// triangles so `at` is plain storage access; `hermiticity_defect`
/// measures how far the stored entries are from exact Hermitian symmetry.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t n) : n_(n), a_(n * n) {}

  std::size_t dim() const { return n_; }

  std::complex<double>& at(std::size_t i, std::size_t j) {
    return a_[i * n_ + j];
  }
  const std::complex<double>& at(std::size_t i, std::size_t j) const {
    return a_[i * n_ + j];
  }

  const std::complex<double>* data() const { return a_.data(); }

  /// max_{ij} |M[i][j] - conj(M[j][i])|.
  double hermiticity_defect() const;
  /// max_{ij} |M[i][j]|.
  double max_abs() const;
  /// Frobenius norm.
  double frobenius() const;
  /// Leading k-by-k principal submatrix.
  HermitianMatrix principal(std::size_t k) const;
  /// y = M v.
  std::vector<std::complex<double>> apply(
      const std::vector<std::complex<double>>& v) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::complex<double>> a_;
};

/// Gram matrix of a sampled coherent system: entries are the pairwise
/// inner products of the transported analyzing profiles, evaluated through
/// the closed-form kernel (no quadrature).  The common diagonal value is
/// the squared norm of one system element.
struct GramMatrix {
  HermitianMatrix entries;
  std::vector<HPoint> points;
  double diagonal = 0.0;
  /// Indices of sample points that collide with an earlier point (within
  /// hyperbolic distance 1e-9).  The matrix keeps the duplicate columns;
  /// callers decide whether to merge or keep them.
  std::vector<std::size_t> flagged;
};

GramMatrix gram_assemble(const WaveletParams& p,
                         const std::vector<HPoint>& points);
GramMatrix gram_assemble(const WaveletParams& p, const OrbitSet& orbit);
/// Multi-band system: entries are sums of per-band weighted kernels.
GramMatrix gram_assemble(const SuperParams& sp,
                         const std::vector<HPoint>& points);

/// Full spectrum of a Hermitian matrix: eigenvalues descending, vectors as
/// a row-major matrix whose column j pairs with eigenvalues[j].
/// The extremal eigenpairs are verified against the matrix before
/// returning; their worst residual |Mv - lambda v| / |M|_F is recorded.
struct HermitianSpectrum {
  std::vector<double> eigenvalues;
  std::vector<std::complex<double>> vectors;  // dim x dim, row-major
  double extremal_residual = 0.0;

  std::vector<std::complex<double>> eigenvector(std::size_t j) const;
};

/// Dense Hermitian eigensolver: unitary reduction to a real symmetric
/// tridiagonal form followed by implicit-shift QL iteration.  Dimensions
/// up to 2000 are supported in-core.  Inputs whose Hermitian defect
/// exceeds 1e-10 relative to the largest entry are rejected.
HermitianSpectrum hermitian_eig(const HermitianMatrix& M);

/// One radius step of a Riesz-sequence diagnostic scan.
struct RieszRow {
  double radius = 0.0;
  std::size_t count = 0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Extremal Gram eigenvalues over nested orbit prefixes.  The orbit of z
/// is enumerated out to the largest radius; each row covers the elements
/// closer than its radius, so the point sets are nested and the extremal
/// eigenvalues must interlace (lambda_min non-increasing, lambda_max
/// non-decreasing); the scan checks this on every run.  If the orbit
/// system were a Riesz sequence, lambda_min would stay bounded away from
/// zero as the radius grows; a decaying lambda_min is evidence against.
std::vector<RieszRow> riesz_diagnostic(const WaveletParams& p,
                                       const GroupPresentation& group,
                                       const HPoint& z,
                                       std::vector<double> radii);

/// Discretization of the domain-localized projection: nodes and positive
/// weights of a measure-exact quadrature over the domain, and the
/// symmetrized kernel matrix M[j][k] = sqrt(w_j w_k) k(z_j, z_k).
struct NystromOperator {
  HermitianMatrix matrix;
  std::vector<HPoint> nodes;
  std::vector<double> weights;
  double quadrature_area = 0.0;  ///< sum of weights
  double cusp_deficit = 0.0;     ///< exact mu-area cut off above the
                                 ///< truncation height (cusped kinds)
  int resolution = 0;
};

/// Builds the Nystrom matrix on a tensor quadrature grid: Gauss-Legendre
/// in x and Gauss-Legendre in u = 1/s (exact for the invariant measure),
/// with per-column s-intervals that follow the circular floor of the
/// triangle kinds.  Cusped domains must be truncated first (configuration
/// error otherwise); the area deficit of the truncation is reported on the
/// result.  Dirichlet cells use a masked bounding-box grid, so their
/// quadrature area converges only at the grid rate.
NystromOperator nystrom_assemble(const WaveletParams& p,
                                 const DomainSpec& dom, int resolution);

struct TraceMoments {
  double trace = 0.0;   ///< sum of diagonal entries
  double second = 0.0;  ///< sum of squared moduli of all entries
};

/// First two moments of the discretized operator.  The trace approximates
/// (domain area) * alpha / 2; the second moment approximates the squared
/// Hilbert-Schmidt norm, and never exceeds the trace when the operator
/// norm is at most 1.
TraceMoments nystrom_trace_moments(const NystromOperator& op);

/// Critical domain areas of the density conditions.  Each returns the
/// area at which the corresponding necessary condition changes sign.
double frame_area_threshold(double alpha);         // 2 / alpha
double band_area_threshold(double B, int n);       // 1 / (B - n - 1/2)
double super_area_threshold(double B, int N);      // 2 / (N (2B - N))

/// Density report for a sampling domain: the domain area, the critical
/// area, their ratio, and the one-directional implications.  The verdict
/// never asserts existence -- the underlying statements are necessary
/// conditions only.
struct NyquistReport {
  std::string system;
  std::string domain;
  double area = 0.0;
  double area_stderr = 0.0;  ///< nonzero when the area was estimated
  double threshold = 0.0;
  double ratio = 0.0;
  std::vector<double> band_thresholds;  ///< per-band critical areas
  std::string verdict;
};

NyquistReport nyquist_report(const WaveletParams& p, const DomainSpec& dom,
                             const McOptions& mc = {});
NyquistReport nyquist_report(const SuperParams& sp, const DomainSpec& dom,
                             const McOptions& mc = {});

/// The one-directional implication sentence for an area/threshold ratio,
/// as used in NyquistReport::verdict.
std::string density_verdict(double ratio);

/// Finite vanishing proxy: the coefficient vector on the sampled system
/// whose combination has the smallest norm.  lambda_min is that squared
/// norm (the minimal Gram eigenvalue); values much smaller than norm_sq
/// witness a near-linear-dependence, i.e. a combination whose transform
/// nearly vanishes on the whole sample set.
struct VanishingWitness {
  std::vector<std::complex<double>> coefficients;  ///< unit norm
  double lambda_min = 0.0;
  double norm_sq = 0.0;         ///< squared norm of one system element
  double eigen_residual = 0.0;  ///< |G c - lambda c| relative to |G|_F
};

VanishingWitness vanishing_witness(const WaveletParams& p,
                                   const std::vector<HPoint>& points);
VanishingWitness vanishing_witness(const WaveletParams& p,
                                   const OrbitSet& orbit);

}  // namespace hypwave
