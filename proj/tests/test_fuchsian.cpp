#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "hypwave/fuchsian.hpp"
#include "hypwave/hyperbolic.hpp"

using namespace hypwave;

namespace {

constexpr double kPi = std::numbers::pi;

/// Unpruned brute force: all backtrack-free generator words up to length L,
/// deduplicated exactly, filtered to d(center, g(base)) < r.  Independent of
/// the BFS pruning logic under test.  Only valid when L is large enough to
/// reach every element of the ball; callers pick (L, r) accordingly.
std::set<std::array<long long, 4>> brute_force_ball(const HPoint& center,
                                                    const HPoint& base,
                                                    double r, int max_len) {
  const GroupElement s(0.0, -1.0, 1.0, 0.0);
  const GroupElement t(1.0, 1.0, 0.0, 1.0);
  const GroupElement tinv = t.inverse();
  struct Item {
    GroupElement g;
    int last;  // 0 S, 1 T, 2 T^-1, -1 none
  };
  auto key = [](const GroupElement& g) {
    return std::array<long long, 4>{
        std::llround(g.a), std::llround(g.b), std::llround(g.c),
        std::llround(g.d)};
  };
  std::set<std::array<long long, 4>> seen;
  std::set<std::array<long long, 4>> hits;
  std::vector<Item> level = {{GroupElement::identity(), -1}};
  seen.insert(key(level[0].g));
  if (hyp_distance(center, moebius_apply(level[0].g, base)) < r) {
    hits.insert(key(level[0].g));
  }
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Item> next;
    for (const Item& item : level) {
      for (int li = 0; li < 3; ++li) {
        if ((item.last == 0 && li == 0) ||   // S S cancels
            (item.last == 1 && li == 2) ||   // T T^-1 cancels
            (item.last == 2 && li == 1)) {
          continue;
        }
        const GroupElement child =
            item.g * (li == 0 ? s : (li == 1 ? t : tinv));
        if (!seen.insert(key(child)).second) continue;
        next.push_back({child, li});
        if (hyp_distance(center, moebius_apply(child, base)) < r) {
          hits.insert(key(child));
        }
      }
    }
    level.swap(next);
  }
  return hits;
}

std::set<std::array<long long, 4>> orbit_keys(const OrbitSet& orbit) {
  std::set<std::array<long long, 4>> keys;
  for (const OrbitElement& el : orbit.elements) {
    keys.insert(std::array<long long, 4>{
        std::llround(el.g.a), std::llround(el.g.b), std::llround(el.g.c),
        std::llround(el.g.d)});
  }
  return keys;
}

}  // namespace

TEST_CASE("presentation relations") {
  const GroupPresentation g = GroupPresentation::psl2z();
  REQUIRE(g.generators.size() == 2);
  const GroupElement s = g.generators[0], t = g.generators[1];
  CHECK((s * s).is_identity(1e-14));
  CHECK((s * t * s * t * s * t).is_identity(1e-12));
  CHECK(g.integer_entries());
  CHECK(GroupPresentation::hecke(3).integer_entries());
  CHECK(!GroupPresentation::hecke(5).integer_entries());
  CHECK_THROWS_AS(GroupPresentation::hecke(2), std::invalid_argument);
  CHECK_THROWS_AS(GroupPresentation::custom({}, {}), std::invalid_argument);
}

TEST_CASE("enumerate_ball equals unpruned brute force on small balls") {
  const GroupPresentation g = GroupPresentation::psl2z();
  const HPoint z(0.0, 2.0);
  for (double r : {1.0, 2.0, 2.5}) {
    const OrbitSet orbit = enumerate_ball(g, z, r);
    CHECK(!orbit.truncated);
    const auto got = orbit_keys(orbit);
    const auto want = brute_force_ball(z, z, r, 16);
    CHECK(got == want);
  }
}

TEST_CASE("enumeration count is insensitive to a larger search margin") {
  const GroupPresentation g = GroupPresentation::psl2z();
  const HPoint z(0.0, 2.0);
  EnumerationOptions wide;
  wide.margin = 6.0;
  for (double r : {3.0, 4.0, 5.0}) {
    const OrbitSet a = enumerate_ball(g, z, r);
    const OrbitSet b = enumerate_ball(g, z, r, wide);
    CHECK(a.elements.size() == b.elements.size());
    CHECK(orbit_keys(a) == orbit_keys(b));
  }
}

TEST_CASE("orbit sets are inverse-closed and sorted by distance") {
  const GroupPresentation g = GroupPresentation::psl2z();
  const HPoint z(0.0, 2.0);
  const OrbitSet orbit = enumerate_ball(g, z, 5.0);
  CHECK(!orbit.truncated);
  const auto keys = orbit_keys(orbit);
  for (const OrbitElement& el : orbit.elements) {
    const GroupElement inv = el.g.inverse();
    CHECK(keys.count(std::array<long long, 4>{
        std::llround(inv.a), std::llround(inv.b), std::llround(inv.c),
        std::llround(inv.d)}) == 1);
    // d(z, g^-1 z) = d(g z, z): the inverse is in the same ball.
  }
  for (std::size_t i = 1; i < orbit.elements.size(); ++i) {
    CHECK(orbit.elements[i - 1].distance <= orbit.elements[i].distance);
  }
  // Identity comes first at distance 0.
  CHECK(orbit.elements[0].word == "e");
  CHECK(orbit.elements[0].distance == doctest::Approx(0.0));
}

TEST_CASE("hecke(3) enumerates the same orbit as psl2z") {
  const HPoint z(0.0, 2.0);
  const OrbitSet a = enumerate_ball(GroupPresentation::psl2z(), z, 4.0);
  const OrbitSet b = enumerate_ball(GroupPresentation::hecke(3), z, 4.0);
  CHECK(orbit_keys(a) == orbit_keys(b));
}

TEST_CASE("hecke(5) enumeration: fuzzy dedup does not merge distinct elements") {
  const GroupPresentation g = GroupPresentation::hecke(5);
  const HPoint z(0.0, 2.0);
  const OrbitSet orbit = enumerate_ball(g, z, 4.0);
  CHECK(!orbit.truncated);
  CHECK(orbit.elements.size() > 10);
  // All collected elements are pairwise distinct well beyond the dedup
  // tolerance, and the set is inverse closed.
  for (std::size_t i = 0; i < orbit.elements.size(); ++i) {
    bool has_inverse = false;
    const GroupElement inv = orbit.elements[i].g.inverse();
    for (std::size_t j = 0; j < orbit.elements.size(); ++j) {
      if (i != j &&
          orbit.elements[i].g.approx_equal(orbit.elements[j].g, 1e-6)) {
        FAIL_CHECK("duplicate group elements in orbit set");
      }
      if (orbit.elements[j].g.approx_equal(inv, 1e-9)) has_inverse = true;
    }
    CHECK(has_inverse);
  }
}

TEST_CASE("stabilized base point flags image collisions") {
  // S fixes i, so the identity and S both map i to i.
  const GroupPresentation g = GroupPresentation::psl2z();
  const OrbitSet orbit = enumerate_ball(g, HPoint(0.0, 1.0), 0.5);
  int zero_dist = 0;
  for (const OrbitElement& el : orbit.elements) {
    if (el.distance < 1e-12) {
      ++zero_dist;
      CHECK(el.image_collision);
    }
  }
  CHECK(zero_dist == 2);
}

TEST_CASE("word budget truncation is reported") {
  const GroupPresentation g = GroupPresentation::psl2z();
  EnumerationOptions opt;
  opt.max_words = 50;
  const OrbitSet orbit = enumerate_ball(g, HPoint(0.0, 2.0), 6.0, opt);
  CHECK(orbit.truncated);
  CHECK_THROWS_AS(counting_ratio(g, HPoint(0.0, 2.0), HPoint(0.0, 2.0), 6.0,
                                 opt),
                  TruncatedEnumeration);
}

TEST_CASE("counting ratio approaches 1/area(fundamental domain)") {
  const GroupPresentation g = GroupPresentation::psl2z();
  const HPoint z(0.0, 2.0);
  const double ratio = counting_ratio(g, z, z, 5.0);
  const double limit = 3.0 / kPi;  // 1 / (pi/3)
  CHECK(std::fabs(ratio / limit - 1.0) < 0.15);
}

TEST_CASE("two-point counting matches brute force") {
  const GroupPresentation g = GroupPresentation::psl2z();
  const HPoint z(0.0, 2.0), w(0.0, 1.0);
  const OrbitSet orbit = enumerate_ball_two_point(g, z, w, 3.0);
  CHECK(orbit_keys(orbit) == brute_force_ball(z, w, 3.0, 16));
}

TEST_CASE("dirichlet cell around 2i recovers the fundamental area") {
  // The Dirichlet cell of psl2z about 2i is the standard domain; cut at
  // s = 40 its mu-area is pi/3 - 1/40.
  const GroupPresentation g = GroupPresentation::psl2z();
  const OrbitSet orbit = enumerate_ball(g, HPoint(0.0, 2.0), 5.0);
  std::vector<HPoint> neighbors;
  for (const OrbitElement& el : orbit.elements) {
    if (el.distance > 1e-9) neighbors.push_back(el.image);
  }
  const DomainSpec cell = DomainSpec::dirichlet(
      HPoint(0.0, 2.0), neighbors, -0.6, 0.6, 0.8, 40.0);
  const McResult est = domain_area(cell, AreaMethod::MonteCarlo, {200000, 5});
  const double want = kPi / 3.0 - 1.0 / 40.0;
  CHECK(std::fabs(est.value - want) <= 4.0 * est.stderr_est);
}
