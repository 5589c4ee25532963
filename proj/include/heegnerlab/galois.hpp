#pragma once

// Degree identities for Galois extensions, checked on subgroup lattices via
// the Galois correspondence: a field K_i is its fixing subgroup H_i,
// [K_i:k] = [G:H_i], a compositum is an intersection of subgroups and an
// intersection of fields is the product (join) of subgroups.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "arith.hpp"

namespace heegnerlab {

/// Subset of a group of order <= 64, one bit per element.
using SubgroupMask = std::uint64_t;

/// Finite group of order <= 64 given by its Cayley table; element 0 is the identity.
class FiniteGroup {
 public:
  explicit FiniteGroup(std::vector<std::vector<std::uint8_t>> table) : table_(std::move(table)) {
    const std::size_t n = table_.size();
    if (n == 0 || n > 64) throw std::invalid_argument("group order must be in [1, 64]");
    inverse_.assign(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
      if (table_[x].size() != n) throw std::invalid_argument("Cayley table is not square");
      if (table_[0][x] != x || table_[x][0] != x) throw std::invalid_argument("element 0 is not the identity");
      bool found = false;
      for (std::size_t y = 0; y < n; ++y) {
        if (table_[x][y] >= n) throw std::invalid_argument("Cayley table entry out of range");
        if (table_[x][y] == 0) {
          inverse_[x] = static_cast<std::uint8_t>(y);
          found = true;
        }
      }
      if (!found) throw std::invalid_argument("element without inverse");
    }
    abelian_ = true;
    for (std::size_t x = 0; x < n && abelian_; ++x)
      for (std::size_t y = 0; y < x; ++y)
        if (table_[x][y] != table_[y][x]) {
          abelian_ = false;
          break;
        }
  }

  /// Z/n_1 x ... x Z/n_k, elements coded in mixed radix.
  static FiniteGroup abelian(const std::vector<std::uint64_t>& cyclic_orders) {
    std::uint64_t n = 1;
    for (auto c : cyclic_orders) {
      if (c == 0) throw std::invalid_argument("cyclic factor of order 0");
      n *= c;
      if (n > 64) throw std::invalid_argument("group order must be <= 64");
    }
    auto decode = [&](std::uint64_t x) {
      std::vector<std::uint64_t> v;
      for (auto c : cyclic_orders) {
        v.push_back(x % c);
        x /= c;
      }
      return v;
    };
    std::vector<std::vector<std::uint8_t>> t(n, std::vector<std::uint8_t>(n));
    for (std::uint64_t x = 0; x < n; ++x) {
      for (std::uint64_t y = 0; y < n; ++y) {
        auto a = decode(x), b = decode(y);
        std::uint64_t z = 0;
        for (std::size_t i = cyclic_orders.size(); i-- > 0;) z = z * cyclic_orders[i] + (a[i] + b[i]) % cyclic_orders[i];
        t[x][y] = static_cast<std::uint8_t>(z);
      }
    }
    return FiniteGroup(std::move(t));
  }

  std::size_t order() const { return table_.size(); }
  std::uint8_t mul(std::size_t x, std::size_t y) const { return table_[x][y]; }
  std::uint8_t inv(std::size_t x) const { return inverse_[x]; }
  SubgroupMask full() const { return order() == 64 ? ~SubgroupMask{0} : (SubgroupMask{1} << order()) - 1; }

  bool is_abelian() const { return abelian_; }

 private:
  std::vector<std::vector<std::uint8_t>> table_;
  std::vector<std::uint8_t> inverse_;
  bool abelian_ = true;
};

inline std::size_t subgroup_order(SubgroupMask h) { return static_cast<std::size_t>(std::popcount(h)); }

/// Smallest subgroup containing the subset.
inline SubgroupMask closure(const FiniteGroup& g, SubgroupMask subset) {
  SubgroupMask h = subset | 1;
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t x = 0; x < g.order(); ++x) {
      if (!(h >> x & 1)) continue;
      for (std::size_t y = 0; y < g.order(); ++y) {
        if (!(h >> y & 1)) continue;
        const auto z = g.mul(x, y);
        if (!(h >> z & 1)) {
          h |= SubgroupMask{1} << z;
          grew = true;
        }
      }
    }
  }
  return h;
}

/// AB for a normal subgroup A and a subgroup B, as the union of cosets A b.
inline SubgroupMask join_normal(const FiniteGroup& g, SubgroupMask a, SubgroupMask b) {
  SubgroupMask out = a;
  for (std::size_t y = 0; y < g.order(); ++y) {
    if (!(b >> y & 1) || (out >> y & 1)) continue;
    for (std::size_t x = 0; x < g.order(); ++x)
      if (a >> x & 1) out |= SubgroupMask{1} << g.mul(x, y);
  }
  return out;
}

inline bool is_normal(const FiniteGroup& g, SubgroupMask h) {
  if (g.is_abelian()) return true;
  for (std::size_t x = 0; x < g.order(); ++x)
    for (std::size_t y = 0; y < g.order(); ++y)
      if ((h >> y & 1) && !(h >> g.mul(g.mul(x, y), g.inv(x)) & 1)) return false;
  return true;
}

struct SubgroupLattice {
  FiniteGroup group;
  std::vector<SubgroupMask> subgroups;  // sorted by (order, mask)
};

/// All subgroups, as joins of cyclic subgroups.
inline SubgroupLattice subgroup_lattice(const FiniteGroup& g) {
  std::vector<SubgroupMask> cyclic;
  for (std::size_t x = 0; x < g.order(); ++x) cyclic.push_back(closure(g, SubgroupMask{1} << x));
  std::sort(cyclic.begin(), cyclic.end());
  cyclic.erase(std::unique(cyclic.begin(), cyclic.end()), cyclic.end());

  std::unordered_set<SubgroupMask> seen(cyclic.begin(), cyclic.end());
  std::vector<SubgroupMask> frontier(cyclic.begin(), cyclic.end());
  const bool abelian = g.is_abelian();
  while (!frontier.empty()) {
    std::vector<SubgroupMask> next;
    for (auto h : frontier) {
      for (auto c : cyclic) {
        if ((c & ~h) == 0) continue;
        const auto j = abelian ? join_normal(g, h, c) : closure(g, h | c);
        if (seen.insert(j).second) next.push_back(j);
      }
    }
    frontier = std::move(next);
  }
  std::vector<SubgroupMask> all(seen.begin(), seen.end());
  std::sort(all.begin(), all.end(), [](SubgroupMask a, SubgroupMask b) {
    return std::pair(subgroup_order(a), a) < std::pair(subgroup_order(b), b);
  });
  return {g, std::move(all)};
}

struct DegreeVerdict {
  bool holds = true;
  std::string counterexample;
};

/// prod [K_i:k] = [K_1...K_r:k] prod_{i>=2} [K_i':k] with K_i' = K_i cap (K_1...K_{i-1}),
/// and [E_1E_2:k][E_1 cap E_2:k] = [E_1:k][E_2:k] for every pair of the chain.
/// Every subgroup in the chain must be normal.
inline DegreeVerdict verify_degree_product(const SubgroupLattice& lat, std::span<const SubgroupMask> chain) {
  const auto& g = lat.group;
  for (auto h : chain)
    if (!is_normal(g, h)) throw std::invalid_argument("subgroup is not normal: no Galois correspondence for it");
  DegreeVerdict v;
  if (chain.empty()) return v;
  const std::uint64_t n = g.order();
  auto degree = [&](SubgroupMask h) { return n / subgroup_order(h); };

  std::uint64_t lhs = 1, rhs_tail = 1;
  SubgroupMask compositum = chain[0];  // subgroup fixing K_1...K_i
  lhs *= degree(chain[0]);
  for (std::size_t i = 1; i < chain.size(); ++i) {
    lhs *= degree(chain[i]);
    rhs_tail *= degree(join_normal(g, chain[i], compositum));
    compositum &= chain[i];
  }
  const std::uint64_t rhs = degree(compositum) * rhs_tail;
  if (lhs != rhs) {
    v.holds = false;
    v.counterexample = "chain product " + std::to_string(lhs) + " != " + std::to_string(rhs);
    return v;
  }
  for (std::size_t i = 0; i < chain.size(); ++i) {
    for (std::size_t j = i + 1; j < chain.size(); ++j) {
      const auto a = chain[i], b = chain[j];
      if (degree(a & b) * degree(join_normal(g, a, b)) != degree(a) * degree(b)) {
        v.holds = false;
        v.counterexample = "pair identity fails for subgroups " + std::to_string(a) + ", " + std::to_string(b);
        return v;
      }
    }
  }
  return v;
}

/// Invariant-factor-free description of every abelian group of order n:
/// lists of prime-power cyclic orders, one list per isomorphism type.
inline std::vector<std::vector<std::uint64_t>> abelian_group_types(std::uint64_t n) {
  std::vector<std::vector<std::uint64_t>> types{{}};
  for (const auto& [p, e] : factorize(n)) {
    // partitions of e
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int remaining, int max_part) -> void {
      if (remaining == 0) {
        parts.push_back(cur);
        return;
      }
      for (int k = std::min(remaining, max_part); k >= 1; --k) {
        cur.push_back(k);
        self(self, remaining - k, k);
        cur.pop_back();
      }
    };
    rec(rec, e, e);
    std::vector<std::vector<std::uint64_t>> next;
    for (const auto& t : types) {
      for (const auto& part : parts) {
        auto u = t;
        for (int k : part) {
          std::uint64_t q = 1;
          for (int i = 0; i < k; ++i) q *= p;
          u.push_back(q);
        }
        next.push_back(std::move(u));
      }
    }
    types = std::move(next);
  }
  return types;
}

struct DegreeSweepReport {
  std::uint64_t groups = 0;
  std::uint64_t chains_checked = 0;
  std::uint64_t exhaustive_lengths = 0;  // (group, length) pairs covered exhaustively
  std::uint64_t sampled_lengths = 0;     // (group, length) pairs covered by sampling
  std::uint64_t failures = 0;
  std::string first_counterexample;
};

/// Checks verify_degree_product on every abelian group of order <= max_order
/// for chains of length 1..max_length. Chains of length <= 2 are always
/// enumerated exhaustively; longer ones when (#subgroups)^length <= budget,
/// otherwise `trials` seeded random chains are drawn and each is checked in
/// every ordering. Since the chain identity telescopes into the pair identity
/// applied to (H_1 cap ... cap H_{i-1}, H_i), the exhaustive pair pass covers
/// every chain of every length.
inline DegreeSweepReport sweep_degree_identity(std::uint64_t max_order, std::size_t max_length, std::uint64_t trials,
                                               std::uint64_t seed, std::uint64_t budget = 2'000'000) {
  if (max_order > 64) throw std::invalid_argument("max order is 64");
  DegreeSweepReport rep;
  std::mt19937_64 rng(seed);
  std::vector<SubgroupMask> chain;
  auto check = [&](const SubgroupLattice& lat, const std::string& label) {
    ++rep.chains_checked;
    auto v = verify_degree_product(lat, chain);
    if (!v.holds && rep.failures++ == 0) rep.first_counterexample = label + ": " + v.counterexample;
  };
  for (std::uint64_t n = 1; n <= max_order; ++n) {
    for (const auto& type : abelian_group_types(n)) {
      ++rep.groups;
      const auto lat = subgroup_lattice(FiniteGroup::abelian(type));
      const std::uint64_t s = lat.subgroups.size();
      std::string label = "Z/";
      for (std::size_t i = 0; i < type.size(); ++i) label += (i ? " x Z/" : "") + std::to_string(type[i]);
      if (type.empty()) label = "trivial";
      for (std::size_t len = 1; len <= max_length; ++len) {
        std::uint64_t total = 1;
        bool fits = true;
        for (std::size_t i = 0; i < len && fits; ++i) {
          total *= s;
          fits = len <= 2 || total <= budget;
        }
        chain.assign(len, 0);
        if (fits) {
          ++rep.exhaustive_lengths;
          std::vector<std::size_t> idx(len, 0);
          while (true) {
            for (std::size_t i = 0; i < len; ++i) chain[i] = lat.subgroups[idx[i]];
            check(lat, label);
            std::size_t i = 0;
            while (i < len && ++idx[i] == s) idx[i++] = 0;
            if (i == len) break;
          }
        } else {
          ++rep.sampled_lengths;
          std::uniform_int_distribution<std::size_t> pick(0, s - 1);
          for (std::uint64_t t = 0; t < trials; ++t) {
            std::vector<std::size_t> idx(len);
            for (auto& i : idx) i = pick(rng);
            std::sort(idx.begin(), idx.end());
            do {
              for (std::size_t i = 0; i < len; ++i) chain[i] = lat.subgroups[idx[i]];
              check(lat, label);
            } while (std::next_permutation(idx.begin(), idx.end()));
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace heegnerlab
