#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypwave/hyperbolic.hpp"

namespace hypwave {

/// A finitely generated discrete subgroup of PSL(2, R), given by its
/// generators.  Built-in families:
///  - psl2z: generated by S = (0 -1; 1 0) and T = (1 1; 0 1);
///  - hecke(q), q >= 3: S and T_lambda = (1 lambda; 0 1) with
///    lambda = 2 cos(pi/q) (q = 3 reproduces psl2z);
///  - custom: caller-supplied generators.
/// Deduplication of products uses exact integer keys when the family is
/// known to have integer matrix entries, and a tolerance-based spatial hash
/// (dedup_tol) otherwise.
struct GroupPresentation {
  enum class Family { Psl2z, Hecke, Custom };

  Family family = Family::Psl2z;
  int hecke_q = 0;
  double dedup_tol = 1e-9;
  std::vector<GroupElement> generators;
  std::vector<std::string> generator_names;

  static GroupPresentation psl2z();
  static GroupPresentation hecke(int q);
  static GroupPresentation custom(std::vector<GroupElement> gens,
                                  std::vector<std::string> names,
                                  double dedup_tol = 1e-9);

  /// True when all group elements have exactly integer entries.
  bool integer_entries() const {
    return family == Family::Psl2z ||
           (family == Family::Hecke && hecke_q == 3);
  }

  std::string describe() const;
};

/// One enumerated group element with its orbit data.
struct OrbitElement {
  GroupElement g;
  HPoint image;            ///< g(base)
  double distance = 0.0;   ///< d(center, g(base))
  std::string word;        ///< shortest generator word found ("e" = identity)
  bool image_collision = false;  ///< another element lands on the same image
};

/// Result of a ball enumeration: every group element g with
/// d(center, g(base)) < radius, sorted by (distance, word length, word).
/// `truncated` is set when the word budget ran out while the search
/// frontier was still inside the pruning radius, i.e. the listing may be
/// incomplete.
struct OrbitSet {
  HPoint center;
  HPoint base;
  double radius = 0.0;
  bool truncated = false;
  std::size_t explored = 0;  ///< distinct group elements visited by the search
  std::vector<OrbitElement> elements;
};

struct EnumerationOptions {
  std::size_t max_words = 2000000;  ///< cap on distinct elements visited
  /// Extra search depth beyond the target radius.  Elements are collected
  /// when closer than r but the breadth-first search keeps expanding
  /// through elements up to r + margin, because shortest generator words
  /// can pass through orbit points slightly farther than their endpoint.
  /// Non-positive: use max(3.0, 2 * max generator step + 0.25).
  double margin = 0.0;
};

class TruncatedEnumeration : public std::runtime_error {
 public:
  TruncatedEnumeration(std::size_t partial_count, double radius)
      : std::runtime_error(
            "orbit enumeration truncated by the word budget; counts at this "
            "radius would be unreliable"),
        partial_count(partial_count),
        radius(radius) {}
  std::size_t partial_count;
  double radius;
};

/// Enumerates {g in Gamma : d(z, g(z)) < r} by breadth-first search over
/// generator words with distance pruning and deduplication.  Deterministic:
/// the result ordering depends only on the inputs.
OrbitSet enumerate_ball(const GroupPresentation& group, const HPoint& z,
                        double r, const EnumerationOptions& opt = {});

/// Two-point variant: elements with d(center, g(base)) < r.
OrbitSet enumerate_ball_two_point(const GroupPresentation& group,
                                  const HPoint& center, const HPoint& base,
                                  double r,
                                  const EnumerationOptions& opt = {});

/// Orbit counting ratio n_r(z, w) / ball_area(r), the quantity whose
/// r -> inf limit is 1 / mu(fundamental domain) for cofinite groups.
/// Throws TruncatedEnumeration if the enumeration hit its word budget.
double counting_ratio(const GroupPresentation& group, const HPoint& z,
                      const HPoint& w, double r,
                      const EnumerationOptions& opt = {});

}  // namespace hypwave
