#include "hypwave/tridiag.hpp"

#include <algorithm>

namespace hypwave::linalg {

std::vector<double> tridiag_eigenvalues(std::vector<double> d,
                                        std::vector<double> e) {
  tridiag_ql<double>(d, e, nullptr, d.size());
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace hypwave::linalg
