#pragma once

// Combinatorial Heegner points on X_0(N). A point is a pair (root, cls):
// root is a residue b mod 2N with b^2 = d (mod 4N), standing for the ideal n
// with O/n = Z/NZ, and cls indexes an ideal class of the order.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"
#include "quadforms.hpp"

namespace heegnerlab {

/// gcd(d, N) = 1 and every prime p | N splits, i.e. (d|p) = 1.
inline bool heegner_condition(Discriminant d, std::uint64_t level) {
  if (level == 0) throw std::invalid_argument("level must be positive");
  if (std::gcd(d.magnitude(), level) != 1) return false;
  for (const auto& f : factorize(level))
    if (kronecker(d.value(), static_cast<std::int64_t>(f.p)) != 1) return false;
  return true;
}

struct HeegnerIndex {
  std::uint64_t root;
  std::size_t cls;
  bool operator==(const HeegnerIndex&) const = default;
  auto operator<=>(const HeegnerIndex&) const = default;
};

class HeegnerSystem {
 public:
  HeegnerSystem(Discriminant d, std::uint64_t level) : disc_(d), level_(level), pic_(d) {
    if (!heegner_condition(d, level))
      throw std::invalid_argument("Heegner condition fails for disc " + std::to_string(d.value()) +
                                  ", level " + std::to_string(level));
    const std::uint64_t modulus = 4 * level;
    const std::uint64_t target = static_cast<std::uint64_t>(mod_floor<i128>(d.value(), modulus));
    for (std::uint64_t b = 0; b < 2 * level; ++b)
      if (mulmod(b, b, modulus) == target) roots_.push_back(b);
  }

  Discriminant disc() const { return disc_; }
  std::uint64_t level() const { return level_; }
  const ClassGroup& pic() const { return pic_; }
  const std::vector<std::uint64_t>& roots() const { return roots_; }
  std::size_t h() const { return pic_.h(); }

  bool contains(const HeegnerIndex& y) const {
    return y.cls < pic_.h() && std::find(roots_.begin(), roots_.end(), y.root) != roots_.end();
  }

  /// All (root, cls) pairs, roots outer.
  std::vector<HeegnerIndex> indices() const {
    std::vector<HeegnerIndex> out;
    for (auto r : roots_)
      for (std::size_t c = 0; c < pic_.h(); ++c) out.push_back({r, c});
    return out;
  }

 private:
  Discriminant disc_;
  std::uint64_t level_;
  ClassGroup pic_;
  std::vector<std::uint64_t> roots_;
};

inline HeegnerSystem build_system(Discriminant d, std::uint64_t level) { return HeegnerSystem(d, level); }

namespace detail {

inline void check_indices(const HeegnerSystem& sys, std::size_t cls, const HeegnerIndex& y) {
  if (cls >= sys.h()) throw std::out_of_range("class index " + std::to_string(cls) + " out of range");
  if (!sys.contains(y))
    throw std::out_of_range("Heegner index (" + std::to_string(y.root) + "," + std::to_string(y.cls) +
                            ") is not in the system");
}

}  // namespace detail

/// b * (n, a) = (n, a b): the root is untouched.
inline HeegnerIndex star_act(const HeegnerSystem& sys, std::size_t cls, const HeegnerIndex& y) {
  detail::check_indices(sys, cls, y);
  return {y.root, sys.pic().multiply(y.cls, cls)};
}

/// Artin symbol of b acting on y: star action by b^{-1}.
inline HeegnerIndex galois_act(const HeegnerSystem& sys, std::size_t cls, const HeegnerIndex& y) {
  detail::check_indices(sys, cls, y);
  return star_act(sys, sys.pic().inverse_of(cls), y);
}

/// Orbits of Pic(O) acting through galois_act, in order of first appearance
/// among indices(); each orbit is listed in discovery order.
inline std::vector<std::vector<HeegnerIndex>> galois_orbits(const HeegnerSystem& sys) {
  std::vector<std::vector<HeegnerIndex>> orbits;
  std::vector<HeegnerIndex> seen;
  for (const auto& y : sys.indices()) {
    if (std::find(seen.begin(), seen.end(), y) != seen.end()) continue;
    std::vector<HeegnerIndex> orbit;
    for (std::size_t c = 0; c < sys.h(); ++c) {
      auto z = galois_act(sys, c, y);
      if (std::find(orbit.begin(), orbit.end(), z) == orbit.end()) orbit.push_back(z);
    }
    seen.insert(seen.end(), orbit.begin(), orbit.end());
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

/// Generalized dihedral group A <rho>, with rho sigma = sigma^{-1} rho.
/// Element k < h is sigma_k, element h + k is rho sigma_k. The explicit
/// multiplication table is kept so that dihedral_check can audit it.
struct DihedralGroup {
  std::size_t base_order = 0;
  std::vector<std::vector<std::size_t>> table;

  std::size_t size() const { return table.size(); }
  std::size_t rho() const { return base_order; }
};

inline DihedralGroup make_dihedral(const ClassGroup& base) {
  const std::size_t h = base.h();
  DihedralGroup g;
  g.base_order = h;
  g.table.assign(2 * h, std::vector<std::size_t>(2 * h));
  // (rho^i s)(rho^j t) = rho^(i+j) s^((-1)^j) t
  for (std::size_t x = 0; x < 2 * h; ++x) {
    for (std::size_t y = 0; y < 2 * h; ++y) {
      const std::size_t i = x / h, s = x % h, j = y / h, t = y % h;
      const std::size_t s_twisted = j ? base.inverse_of(s) : s;
      g.table[x][y] = ((i + j) % 2) * h + base.multiply(s_twisted, t);
    }
  }
  return g;
}

struct DihedralVerdict {
  bool ok = true;
  std::string counterexample;
};

/// Audits a dihedral table: closure, identity, associativity, rho^2 = 1,
/// commutativity of the base and rho sigma rho^{-1} = sigma^{-1}.
inline DihedralVerdict dihedral_check(const DihedralGroup& g) {
  const std::size_t n = g.size(), h = g.base_order;
  auto fail = [](std::string why) { return DihedralVerdict{false, std::move(why)}; };
  if (n != 2 * h || h == 0) return fail("table has " + std::to_string(n) + " rows for base order " + std::to_string(h));
  for (const auto& row : g.table) {
    if (row.size() != n) return fail("ragged table");
    for (auto v : row)
      if (v >= n) return fail("entry " + std::to_string(v) + " outside the group");
  }
  for (std::size_t x = 0; x < n; ++x)
    if (g.table[0][x] != x || g.table[x][0] != x) return fail("element 0 is not the identity at " + std::to_string(x));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (g.table[g.table[x][y]][z] != g.table[x][g.table[y][z]])
          return fail("associativity fails at (" + std::to_string(x) + "," + std::to_string(y) + "," +
                      std::to_string(z) + ")");
  const std::size_t rho = g.rho();
  if (g.table[rho][rho] != 0) return fail("rho^2 != 1");
  for (std::size_t s = 0; s < h; ++s) {
    for (std::size_t t = 0; t < h; ++t) {
      if (g.table[s][t] >= h) return fail("base is not closed");
      if (g.table[s][t] != g.table[t][s])
        return fail("base not abelian at (" + std::to_string(s) + "," + std::to_string(t) + ")");
    }
    // rho^{-1} = rho
    const std::size_t conj = g.table[g.table[rho][s]][rho];
    if (g.table[conj][s] != 0)
      return fail("rho sigma rho^-1 != sigma^-1 for sigma = " + std::to_string(s));
  }
  return {};
}

/// ceil(h / deg Phi): the guaranteed minimum of [k(P_y):k] when [K_O:k] = h.
inline std::uint64_t degree_lower_bound(std::uint64_t h, std::uint64_t deg_phi) {
  if (h == 0 || deg_phi == 0) throw std::invalid_argument("degree_lower_bound needs h, deg >= 1");
  return (h + deg_phi - 1) / deg_phi;
}

}  // namespace heegnerlab
