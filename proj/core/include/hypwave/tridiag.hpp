#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hypwave::linalg {

/// QL iteration with implicit Wilkinson shifts on a real symmetric
/// tridiagonal matrix.  On return d holds the eigenvalues (unordered) and e
/// is destroyed.  If z is non-null it must point to a row-major n-by-n
/// accumulation matrix whose column j is rotated alongside eigenvalue j;
/// pass the identity to get tridiagonal eigenvectors, or a basis-change
/// matrix to get back-transformed eigenvectors.  The scalar type of the
/// accumulation matrix may be real or complex: the Givens rotations applied
/// to it are real either way.
///
/// Deflation is triggered when a subdiagonal entry is negligible relative
/// to its diagonal neighbours, or negligible relative to the norm of the
/// whole matrix.  The second test splits off blocks whose entries sit at
/// rounding level of the overall scale (as happens for kernel matrices
/// with super-exponentially decaying spectra, where the trailing entries
/// are pure noise near eps * |T| and the neighbour-relative test can never
/// fire); forcing such an entry to zero perturbs eigenvalues by at most
/// that entry's magnitude, i.e. by O(eps * |T|).
///
/// Throws std::runtime_error if any eigenvalue fails to converge within 50
/// sweeps (does not happen for matrices formed from finite input).
template <typename T>
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, T* z,
                std::size_t n) {
  if (n == 0) return;
  if (d.size() < n || (n > 1 && e.size() < n - 1)) {
    throw std::invalid_argument("tridiag_ql: array sizes do not match n");
  }
  if (n == 1) return;
  e.resize(n, 0.0);
  e[n - 1] = 0.0;

  constexpr double kEps = 2.22e-16;
  double anorm = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double row = std::fabs(d[j]);
    if (j > 0) row += std::fabs(e[j - 1]);
    if (j + 1 < n) row += std::fabs(e[j]);
    anorm = std::max(anorm, row);
  }
  const double floor_tol = kEps * anorm;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= kEps * dd || std::fabs(e[m]) <= floor_tol) {
          break;
        }
      }
      if (m != l) {
        if (iter++ == 50) {
          throw std::runtime_error("tridiag_ql: QL sweep did not converge");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t ii = m; ii-- > l;) {
          double f = s * e[ii];
          const double b = c * e[ii];
          r = std::hypot(f, g);
          e[ii + 1] = r;
          if (r == 0.0) {
            // Deflate: a rotation annihilated prematurely.
            d[ii + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[ii + 1] - p;
          r = (d[ii] - g) * s + 2.0 * c * b;
          p = s * r;
          d[ii + 1] = g + p;
          g = c * r - b;
          if (z != nullptr) {
            for (std::size_t k = 0; k < n; ++k) {
              T fk = z[k * n + ii + 1];
              z[k * n + ii + 1] = s * z[k * n + ii] + c * fk;
              z[k * n + ii] = c * z[k * n + ii] - s * fk;
            }
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

/// Eigenvalues of a real symmetric tridiagonal matrix, ascending.
std::vector<double> tridiag_eigenvalues(std::vector<double> d,
                                        std::vector<double> e);

}  // namespace hypwave::linalg
