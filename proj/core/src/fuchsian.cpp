#include "hypwave/fuchsian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>
#include <unordered_map>

namespace hypwave {

namespace {

/// Exact dedup key for integer-entry groups.
struct IntKey {
  std::array<std::int64_t, 4> v;
  bool operator==(const IntKey&) const = default;
};

struct IntKeyHash {
  std::size_t operator()(const IntKey& k) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (std::int64_t x : k.v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) +
           (h >> 2);
    }
    return h;
  }
};

IntKey int_key(const GroupElement& g) {
  auto snap = [](double x) {
    const double r = std::nearbyint(x);
    if (std::fabs(x - r) > 1e-6) {
      throw std::logic_error(
          "integer-entry group produced a non-integer matrix entry");
    }
    return static_cast<std::int64_t>(r);
  };
  return IntKey{{snap(g.a), snap(g.b), snap(g.c), snap(g.d)}};
}

/// Tolerance-based dedup for non-integer groups: a spatial hash over matrix
/// entries at a cell size much coarser than accumulated roundoff, with
/// neighbor-cell probing so near-boundary values cannot split into two
/// cells silently.
class FuzzyDedup {
 public:
  explicit FuzzyDedup(double tol) : tol_(tol), cell_(std::max(tol * 1000.0, 1e-6)) {}

  /// Returns true (and records g) if g was not seen before.
  bool insert(const GroupElement& g) {
    const std::array<double, 4> e = {g.a, g.b, g.c, g.d};
    std::array<std::int64_t, 4> base;
    for (int i = 0; i < 4; ++i) {
      base[i] = static_cast<std::int64_t>(std::floor(e[i] / cell_));
    }
    // Probe the 2^4 cells adjacent toward each entry's fractional side.
    for (int mask = 0; mask < 16; ++mask) {
      IntKey key{base};
      for (int i = 0; i < 4; ++i) {
        if (mask & (1 << i)) {
          const double frac = e[i] / cell_ - static_cast<double>(base[i]);
          key.v[i] += (frac >= 0.5) ? 1 : -1;
        }
      }
      auto it = map_.find(key);
      if (it != map_.end()) {
        for (std::size_t idx : it->second) {
          if (stored_[idx].approx_equal(g, tol_)) return false;
        }
      }
    }
    stored_.push_back(g);
    map_[IntKey{base}].push_back(stored_.size() - 1);
    return true;
  }

 private:
  double tol_;
  double cell_;
  std::vector<GroupElement> stored_;
  std::unordered_map<IntKey, std::vector<std::size_t>, IntKeyHash> map_;
};

struct Letter {
  GroupElement g;
  std::string token;
};

std::vector<Letter> expansion_alphabet(const GroupPresentation& group) {
  std::vector<Letter> letters;
  for (std::size_t i = 0; i < group.generators.size(); ++i) {
    const GroupElement& g = group.generators[i];
    const std::string& name = group.generator_names[i];
    letters.push_back({g, name});
    // Involutions (g^2 = identity in PSL) need no separate inverse letter.
    if (!(g * g).is_identity(1e-9)) {
      std::string inv_name;
      if (name.size() == 1 && std::isupper(static_cast<unsigned char>(name[0]))) {
        inv_name = std::string(1, std::tolower(static_cast<unsigned char>(name[0])));
      } else {
        inv_name = name + "'";
      }
      letters.push_back({g.inverse(), inv_name});
    }
  }
  return letters;
}

std::string append_word(const std::string& w, const std::string& token,
                        bool single_char_alphabet) {
  if (w == "e") return token;
  if (single_char_alphabet) return w + token;
  return w + "." + token;
}

}  // namespace

GroupPresentation GroupPresentation::psl2z() {
  GroupPresentation g;
  g.family = Family::Psl2z;
  g.generators = {GroupElement(0, -1, 1, 0), GroupElement(1, 1, 0, 1)};
  g.generator_names = {"S", "T"};
  return g;
}

GroupPresentation GroupPresentation::hecke(int q) {
  if (q < 3) throw std::invalid_argument("hecke: need q >= 3");
  GroupPresentation g;
  g.family = Family::Hecke;
  g.hecke_q = q;
  const double lambda = 2.0 * std::cos(std::numbers::pi / q);
  g.generators = {GroupElement(0, -1, 1, 0), GroupElement(1, lambda, 0, 1)};
  g.generator_names = {"S", "T"};
  return g;
}

GroupPresentation GroupPresentation::custom(std::vector<GroupElement> gens,
                                            std::vector<std::string> names,
                                            double dedup_tol) {
  if (gens.empty()) {
    throw std::invalid_argument("custom group: need at least one generator");
  }
  if (names.size() != gens.size()) {
    throw std::invalid_argument("custom group: one name per generator");
  }
  if (!(dedup_tol > 0.0) || dedup_tol > 1e-3) {
    throw std::invalid_argument("custom group: dedup_tol must be in (0, 1e-3]");
  }
  GroupPresentation g;
  g.family = Family::Custom;
  g.dedup_tol = dedup_tol;
  g.generators = std::move(gens);
  g.generator_names = std::move(names);
  return g;
}

std::string GroupPresentation::describe() const {
  switch (family) {
    case Family::Psl2z:
      return "psl2z";
    case Family::Hecke: {
      std::ostringstream os;
      os << "hecke(q=" << hecke_q << ")";
      return os.str();
    }
    case Family::Custom: {
      std::ostringstream os;
      os << "custom(" << generators.size() << " generators)";
      return os.str();
    }
  }
  return "?";
}

OrbitSet enumerate_ball_two_point(const GroupPresentation& group,
                                  const HPoint& center, const HPoint& base,
                                  double r, const EnumerationOptions& opt) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("enumerate_ball: radius must be finite > 0");
  }
  const std::vector<Letter> letters = expansion_alphabet(group);
  bool single_char = true;
  for (const Letter& l : letters) single_char &= (l.token.size() == 1);

  double margin = opt.margin;
  if (!(margin > 0.0)) {
    double max_step = 0.0;
    for (const Letter& l : letters) {
      max_step = std::max(max_step,
                          hyp_distance(base, moebius_apply(l.g, base)));
    }
    margin = std::max(3.0, 2.0 * max_step + 0.25);
  }
  const double expand_limit = r + margin;

  struct Node {
    GroupElement g;
    HPoint image;
    double dist;
    std::string word;
  };

  const bool exact = group.integer_entries();
  std::unordered_map<IntKey, char, IntKeyHash> int_seen;
  FuzzyDedup fuzzy(group.dedup_tol);
  auto try_mark = [&](const GroupElement& g) -> bool {
    if (exact) return int_seen.emplace(int_key(g), 1).second;
    return fuzzy.insert(g);
  };

  OrbitSet result;
  result.center = center;
  result.base = base;
  result.radius = r;

  std::vector<Node> visited;
  std::deque<std::size_t> frontier;  // indices into visited, FIFO = level order

  const GroupElement id = GroupElement::identity();
  try_mark(id);
  visited.push_back({id, base, hyp_distance(center, base), "e"});
  frontier.push_back(0);

  bool budget_hit = false;
  while (!frontier.empty()) {
    const std::size_t ni = frontier.front();
    frontier.pop_front();
    if (visited[ni].dist > expand_limit) continue;
    if (visited.size() >= opt.max_words) {
      frontier.push_front(ni);  // ni itself is unexpanded work
      budget_hit = true;
      break;
    }
    // Copy, not reference: visited reallocates below.
    const Node node = visited[ni];
    for (const Letter& l : letters) {
      const GroupElement child = node.g * l.g;
      if (!try_mark(child)) continue;
      const HPoint image = moebius_apply(child, base);
      visited.push_back({child, image, hyp_distance(center, image),
                         append_word(node.word, l.token, single_char)});
      frontier.push_back(visited.size() - 1);
    }
  }
  result.explored = visited.size();
  // The enumeration is incomplete only if we stopped while some unexpanded
  // node was still inside the pruning radius.
  if (budget_hit) {
    for (std::size_t ni : frontier) {
      if (visited[ni].dist <= expand_limit) {
        result.truncated = true;
        break;
      }
    }
  }

  for (const Node& node : visited) {
    if (node.dist < r) {
      result.elements.push_back(
          {node.g, node.image, node.dist, node.word, false});
    }
  }
  std::sort(result.elements.begin(), result.elements.end(),
            [](const OrbitElement& lhs, const OrbitElement& rhs) {
              if (lhs.distance != rhs.distance) {
                return lhs.distance < rhs.distance;
              }
              if (lhs.word.size() != rhs.word.size()) {
                return lhs.word.size() < rhs.word.size();
              }
              return lhs.word < rhs.word;
            });

  // Flag image collisions (distinct group elements, numerically identical
  // orbit point).  Collisions have equal distance, so scanning a small
  // distance window suffices.
  for (std::size_t i = 0; i < result.elements.size(); ++i) {
    for (std::size_t j = i + 1; j < result.elements.size(); ++j) {
      if (result.elements[j].distance - result.elements[i].distance > 1e-8) {
        break;
      }
      if (hyp_distance(result.elements[i].image, result.elements[j].image) <
          1e-9) {
        result.elements[i].image_collision = true;
        result.elements[j].image_collision = true;
      }
    }
  }
  return result;
}

OrbitSet enumerate_ball(const GroupPresentation& group, const HPoint& z,
                        double r, const EnumerationOptions& opt) {
  return enumerate_ball_two_point(group, z, z, r, opt);
}

double counting_ratio(const GroupPresentation& group, const HPoint& z,
                      const HPoint& w, double r,
                      const EnumerationOptions& opt) {
  const OrbitSet orbit = enumerate_ball_two_point(group, z, w, r, opt);
  if (orbit.truncated) {
    throw TruncatedEnumeration(orbit.elements.size(), r);
  }
  return static_cast<double>(orbit.elements.size()) / ball_area(r);
}

}  // namespace hypwave
