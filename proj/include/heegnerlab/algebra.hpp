#pragma once

// Idempotents in Q[G] for G = F_p^r, and their action on finite G-modules of
// order prime to p.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "arith.hpp"

namespace heegnerlab {

using Rational = boost::multiprecision::cpp_rational;

/// G = F_p^r. Elements are coded as integers in [0, p^r) by their base-p digits.
class ElementaryAbelianGroup {
 public:
  ElementaryAbelianGroup(std::uint32_t p, std::uint32_t r) : p_(p), r_(r) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime, got " + std::to_string(p));
    if (r < 1) throw std::invalid_argument("rank must be >= 1");
    std::uint64_t n = 1;
    for (std::uint32_t i = 0; i < r; ++i) {
      n *= p;
      if (n > (1u << 20)) throw std::range_error("F_p^r too large to enumerate");
    }
    order_ = static_cast<std::uint32_t>(n);
  }

  std::uint32_t p() const { return p_; }
  std::uint32_t r() const { return r_; }
  std::uint32_t order() const { return order_; }
  std::uint32_t identity() const { return 0; }

  std::vector<std::uint32_t> digits(std::uint32_t x) const {
    std::vector<std::uint32_t> v(r_);
    for (std::uint32_t i = 0; i < r_; ++i) {
      v[i] = x % p_;
      x /= p_;
    }
    return v;
  }

  std::uint32_t from_digits(const std::vector<std::uint32_t>& v) const {
    std::uint32_t x = 0;
    for (std::uint32_t i = r_; i-- > 0;) x = x * p_ + (v[i] % p_);
    return x;
  }

  std::uint32_t add(std::uint32_t x, std::uint32_t y) const {
    std::uint32_t out = 0, scale = 1;
    for (std::uint32_t i = 0; i < r_; ++i) {
      out += ((x % p_ + y % p_) % p_) * scale;
      x /= p_;
      y /= p_;
      scale *= p_;
    }
    return out;
  }

  std::uint32_t neg(std::uint32_t x) const {
    std::uint32_t out = 0, scale = 1;
    for (std::uint32_t i = 0; i < r_; ++i) {
      out += ((p_ - x % p_) % p_) * scale;
      x /= p_;
      scale *= p_;
    }
    return out;
  }

  /// Standard basis vector e_k.
  std::uint32_t basis(std::uint32_t k) const {
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i < k; ++i) x *= p_;
    return x;
  }

  /// sum_i phi_i x_i mod p for a functional given by its digits.
  std::uint32_t pair(std::uint32_t phi, std::uint32_t x) const {
    std::uint64_t s = 0;
    for (std::uint32_t i = 0; i < r_; ++i) {
      s += static_cast<std::uint64_t>(phi % p_) * (x % p_);
      phi /= p_;
      x /= p_;
    }
    return static_cast<std::uint32_t>(s % p_);
  }

  /// Subgroup generated by the given elements (sorted codes).
  std::vector<std::uint32_t> span(const std::vector<std::uint32_t>& gens) const {
    std::vector<bool> in(order_, false);
    std::vector<std::uint32_t> members{0};
    in[0] = true;
    for (auto g : gens) {
      if (in[g]) continue;
      // members is a subgroup; add the cosets members + j g.
      const std::size_t base = members.size();
      std::uint32_t shift = g;
      while (!in[shift]) {
        for (std::size_t i = 0; i < base; ++i) {
          auto y = add(members[i], shift);
          in[y] = true;
          members.push_back(y);
        }
        shift = add(shift, g);
      }
    }
    std::sort(members.begin(), members.end());
    return members;
  }

  bool is_subgroup(const std::vector<std::uint32_t>& h) const {
    if (h.empty()) return false;
    std::vector<bool> in(order_, false);
    for (auto x : h) {
      if (x >= order_ || in[x]) return false;
      in[x] = true;
    }
    if (!in[0]) return false;
    for (auto x : h)
      for (auto y : h)
        if (!in[add(x, y)]) return false;
    return true;
  }

  bool operator==(const ElementaryAbelianGroup& o) const { return p_ == o.p_ && r_ == o.r_; }

 private:
  std::uint32_t p_, r_, order_ = 1;
};

/// Exact element of Q[G]; absent entries are zero.
class GroupRingElement {
 public:
  explicit GroupRingElement(const ElementaryAbelianGroup& g) : group_(g) {}

  static GroupRingElement basis(const ElementaryAbelianGroup& g, std::uint32_t x) {
    GroupRingElement e(g);
    e.coeffs_[x] = 1;
    return e;
  }

  const ElementaryAbelianGroup& group() const { return group_; }
  const std::map<std::uint32_t, Rational>& coeffs() const { return coeffs_; }

  Rational coefficient(std::uint32_t x) const {
    auto it = coeffs_.find(x);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }

  GroupRingElement& operator+=(const GroupRingElement& o) {
    for (const auto& [x, c] : o.coeffs_) coeffs_[x] += c;
    prune();
    return *this;
  }

  friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }

  friend GroupRingElement operator*(const Rational& s, GroupRingElement a) {
    for (auto& [x, c] : a.coeffs_) c *= s;
    a.prune();
    return a;
  }

  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
    const auto& g = a.group_;
    std::vector<Rational> acc(g.order());
    for (const auto& [x, cx] : a.coeffs_)
      for (const auto& [y, cy] : b.coeffs_) acc[g.add(x, y)] += cx * cy;
    GroupRingElement out(g);
    for (std::uint32_t z = 0; z < g.order(); ++z)
      if (acc[z] != 0) out.coeffs_[z] = acc[z];
    return out;
  }

  bool operator==(const GroupRingElement& o) const { return group_ == o.group_ && coeffs_ == o.coeffs_; }

  std::string to_string() const {
    std::string s;
    for (const auto& [x, c] : coeffs_) {
      if (!s.empty()) s += " + ";
      s += c.str() + "*g" + std::to_string(x);
    }
    return s.empty() ? "0" : s;
  }

 private:
  void prune() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) it = it->second == 0 ? coeffs_.erase(it) : std::next(it);
  }

  ElementaryAbelianGroup group_;
  std::map<std::uint32_t, Rational> coeffs_;
};

/// epsilon_H = (1/|H|) sum_{s in H} s.
inline GroupRingElement idempotent(const ElementaryAbelianGroup& g, const std::vector<std::uint32_t>& h) {
  if (!g.is_subgroup(h)) throw std::invalid_argument("idempotent: H is not a subgroup of G");
  GroupRingElement e(g);
  const Rational w(1, static_cast<long>(h.size()));
  for (auto x : h) e += w * GroupRingElement::basis(g, x);
  return e;
}

struct IndexPSubgroup {
  std::uint32_t functional;              // normalized: first nonzero digit is 1
  std::vector<std::uint32_t> elements;   // kernel, sorted
};

/// Kernels of the nonzero functionals up to F_p^* scaling.
inline std::vector<IndexPSubgroup> index_p_subgroups(const ElementaryAbelianGroup& g) {
  std::vector<IndexPSubgroup> out;
  for (std::uint32_t phi = 1; phi < g.order(); ++phi) {
    auto d = g.digits(phi);
    auto lead = std::find_if(d.begin(), d.end(), [](std::uint32_t v) { return v != 0; });
    if (*lead != 1) continue;
    IndexPSubgroup s{phi, {}};
    for (std::uint32_t x = 0; x < g.order(); ++x)
      if (g.pair(phi, x) == 0) s.elements.push_back(x);
    out.push_back(std::move(s));
  }
  return out;
}

/// Number of index-p subgroups, (p^r - 1)/(p - 1).
inline std::uint64_t index_p_subgroup_count(std::uint32_t p, std::uint32_t r) {
  std::uint64_t n = 1;
  for (std::uint32_t i = 0; i < r; ++i) n *= p;
  return (n - 1) / (p - 1);
}

/// (p^(r-1) - 1)/(p - 1): the count that is sometimes quoted for the same
/// family. It undercounts; the erratum report contrasts the two.
inline std::uint64_t misquoted_subgroup_count(std::uint32_t p, std::uint32_t r) {
  return r == 0 ? 0 : index_p_subgroup_count(p, r - 1);
}

struct IdempotentSumReport {
  bool holds = false;
  std::uint64_t subgroup_count = 0;   // enumerated
  std::uint64_t expected_count = 0;   // (p^r-1)/(p-1)
  std::uint64_t misquoted_count = 0;  // (p^(r-1)-1)/(p-1)
  Rational coefficient;               // (p^r - p)/(p - 1)
  std::string counterexample;
};

/// sum_i epsilon_{G_i} = ((p^r - p)/(p - 1)) epsilon_G + e, checked exactly.
inline IdempotentSumReport verify_idempotent_sum(const ElementaryAbelianGroup& g) {
  IdempotentSumReport rep;
  const auto subs = index_p_subgroups(g);
  rep.subgroup_count = subs.size();
  rep.expected_count = index_p_subgroup_count(g.p(), g.r());
  rep.misquoted_count = misquoted_subgroup_count(g.p(), g.r());
  rep.coefficient = Rational(static_cast<long>(g.order()) - static_cast<long>(g.p()), static_cast<long>(g.p()) - 1);

  GroupRingElement lhs(g);
  for (const auto& s : subs) lhs += idempotent(g, s.elements);

  std::vector<std::uint32_t> all(g.order());
  std::iota(all.begin(), all.end(), 0u);
  const GroupRingElement rhs = rep.coefficient * idempotent(g, all) + GroupRingElement::basis(g, 0);

  rep.holds = lhs == rhs && rep.subgroup_count == rep.expected_count;
  if (!rep.holds) {
    for (std::uint32_t x = 0; x < g.order(); ++x) {
      if (lhs.coefficient(x) != rhs.coefficient(x)) {
        rep.counterexample = "coefficient of g" + std::to_string(x) + ": lhs " + lhs.coefficient(x).str() +
                             ", rhs " + rhs.coefficient(x).str();
        break;
      }
    }
    if (rep.counterexample.empty())
      rep.counterexample = "enumerated " + std::to_string(rep.subgroup_count) + " subgroups, expected " +
                           std::to_string(rep.expected_count);
  }
  return rep;
}

struct IdempotentProductReport {
  bool holds = false;
  std::uint64_t pairs_checked = 0;
  bool transversal_count_holds = false;  // each (c1, c2) system has p^(r-2) solutions
  std::string counterexample;
};

/// epsilon_{G_i} epsilon_{G_j} = epsilon_G for all ordered pairs i != j, plus
/// the hyperplane-intersection count used to derive it.
inline IdempotentProductReport verify_idempotent_product(const ElementaryAbelianGroup& g) {
  IdempotentProductReport rep;
  const auto subs = index_p_subgroups(g);
  std::vector<std::uint32_t> all(g.order());
  std::iota(all.begin(), all.end(), 0u);
  const auto eps_g = idempotent(g, all);

  std::vector<GroupRingElement> eps;
  for (const auto& s : subs) eps.push_back(idempotent(g, s.elements));

  rep.holds = true;
  rep.transversal_count_holds = true;
  const std::uint32_t p = g.p();
  const std::uint64_t expected_solutions = g.r() >= 2 ? g.order() / (p * p) : 0;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    for (std::size_t j = 0; j < subs.size(); ++j) {
      if (i == j) continue;
      ++rep.pairs_checked;
      if (rep.holds && !(eps[i] * eps[j] == eps_g)) {
        rep.holds = false;
        rep.counterexample = "eps_" + std::to_string(i) + " * eps_" + std::to_string(j) + " != eps_G";
      }
      if (i < j && rep.transversal_count_holds) {
        std::vector<std::uint64_t> count(static_cast<std::size_t>(p) * p, 0);
        for (std::uint32_t x = 0; x < g.order(); ++x)
          ++count[g.pair(subs[i].functional, x) * p + g.pair(subs[j].functional, x)];
        for (auto c : count) {
          if (c != expected_solutions) {
            rep.transversal_count_holds = false;
            if (rep.counterexample.empty())
              rep.counterexample = "hyperplane pair " + std::to_string(i) + "," + std::to_string(j) + " has " +
                                   std::to_string(c) + " solutions";
            break;
          }
        }
      }
    }
  }
  rep.holds = rep.holds && rep.transversal_count_holds;
  return rep;
}

/// Integer matrix, row-major.
using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// A finite G-module M = Z/q_1 x ... x Z/q_s with gcd(|M|, p) = 1. Generator
/// e_k of G acts by action[k]; entry (i, j) is the image of the j-th
/// coordinate generator in the i-th coordinate.
class FiniteGModule {
 public:
  FiniteGModule(ElementaryAbelianGroup g, std::vector<std::uint64_t> moduli, std::vector<IntMatrix> action)
      : group_(g), moduli_(std::move(moduli)), action_(std::move(action)) {
    if (moduli_.empty()) throw std::invalid_argument("module needs at least one cyclic factor");
    std::uint64_t size = 1;
    exponent_ = 1;
    for (auto q : moduli_) {
      if (q < 1) throw std::invalid_argument("cyclic factor orders must be >= 1");
      size *= q;
      exponent_ = std::lcm(exponent_, q);
      if (size > 1'000'000) throw std::range_error("module too large to enumerate");
    }
    if (std::gcd(size, static_cast<std::uint64_t>(g.p())) != 1)
      throw std::invalid_argument("|M| = " + std::to_string(size) + " is not coprime to p = " + std::to_string(g.p()));
    size_ = static_cast<std::uint32_t>(size);
    if (action_.size() != g.r()) throw std::invalid_argument("need one action matrix per generator of G");
    const std::size_t s = moduli_.size();
    for (auto& m : action_) {
      if (m.size() != s) throw std::invalid_argument("action matrix has wrong shape");
      for (std::size_t i = 0; i < s; ++i) {
        if (m[i].size() != s) throw std::invalid_argument("action matrix has wrong shape");
        for (std::size_t j = 0; j < s; ++j) {
          const auto q_i = static_cast<std::int64_t>(moduli_[i]);
          m[i][j] = mod_floor<std::int64_t>(m[i][j], q_i);
          if (static_cast<i128>(m[i][j]) * static_cast<i128>(moduli_[j]) % q_i != 0)
            throw std::invalid_argument("action entry does not define a homomorphism Z/q_j -> Z/q_i");
        }
      }
    }
    build_tables();
  }

  const ElementaryAbelianGroup& group() const { return group_; }
  const std::vector<std::uint64_t>& moduli() const { return moduli_; }
  const std::vector<IntMatrix>& action() const { return action_; }
  std::uint32_t size() const { return size_; }
  std::uint64_t exponent() const { return exponent_; }

  std::vector<std::uint64_t> decode(std::uint32_t m) const {
    std::vector<std::uint64_t> v(moduli_.size());
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      v[i] = m % moduli_[i];
      m = static_cast<std::uint32_t>(m / moduli_[i]);
    }
    return v;
  }

  std::uint32_t encode(const std::vector<std::uint64_t>& v) const {
    std::uint64_t m = 0;
    for (std::size_t i = moduli_.size(); i-- > 0;) m = m * moduli_[i] + v[i] % moduli_[i];
    return static_cast<std::uint32_t>(m);
  }

  std::uint32_t add(std::uint32_t x, std::uint32_t y) const {
    auto a = decode(x), b = decode(y);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = (a[i] + b[i]) % moduli_[i];
    return encode(a);
  }

  std::uint32_t scale(std::uint32_t x, std::uint64_t k) const {
    auto a = decode(x);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = mulmod(a[i], k % moduli_[i], moduli_[i]);
    return encode(a);
  }

  /// g . m for a group element code g.
  std::uint32_t act(std::uint32_t g, std::uint32_t m) const { return table_[static_cast<std::size_t>(g) * size_ + m]; }

 private:
  std::uint32_t apply_generator(std::size_t k, std::uint32_t m) const {
    const auto v = decode(m);
    std::vector<std::uint64_t> out(v.size(), 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      u128 acc = 0;
      for (std::size_t j = 0; j < v.size(); ++j) acc += static_cast<u128>(action_[k][i][j]) * v[j];
      out[i] = static_cast<std::uint64_t>(acc % moduli_[i]);
    }
    return encode(out);
  }

  void build_tables() {
    const std::uint32_t p = group_.p();
    std::vector<std::vector<std::uint32_t>> gen(group_.r(), std::vector<std::uint32_t>(size_));
    for (std::size_t k = 0; k < group_.r(); ++k)
      for (std::uint32_t m = 0; m < size_; ++m) gen[k][m] = apply_generator(k, m);

    for (std::size_t k = 0; k < group_.r(); ++k) {
      std::vector<bool> hit(size_, false);
      for (std::uint32_t m = 0; m < size_; ++m) {
        if (hit[gen[k][m]]) throw std::invalid_argument("generator " + std::to_string(k) + " does not act invertibly");
        hit[gen[k][m]] = true;
        std::uint32_t y = m;
        for (std::uint32_t i = 0; i < p; ++i) y = gen[k][y];
        if (y != m) throw std::invalid_argument("generator " + std::to_string(k) + " does not have order dividing p");
      }
      for (std::size_t l = 0; l < k; ++l)
        for (std::uint32_t m = 0; m < size_; ++m)
          if (gen[k][gen[l][m]] != gen[l][gen[k][m]])
            throw std::invalid_argument("generators " + std::to_string(l) + " and " + std::to_string(k) + " do not commute");
    }

    table_.assign(static_cast<std::size_t>(group_.order()) * size_, 0);
    for (std::uint32_t g = 0; g < group_.order(); ++g) {
      const auto d = group_.digits(g);
      for (std::uint32_t m = 0; m < size_; ++m) {
        std::uint32_t y = m;
        for (std::size_t k = 0; k < d.size(); ++k)
          for (std::uint32_t t = 0; t < d[k]; ++t) y = gen[k][y];
        table_[static_cast<std::size_t>(g) * size_ + m] = y;
      }
    }
  }

  ElementaryAbelianGroup group_;
  std::vector<std::uint64_t> moduli_;
  std::vector<IntMatrix> action_;
  std::uint32_t size_ = 1;
  std::uint64_t exponent_ = 1;
  std::vector<std::uint32_t> table_;
};

/// Sorted element codes of a submodule.
using ModuleSubset = std::vector<std::uint32_t>;

/// M^H by scanning for common fixed points.
inline ModuleSubset fixed_points(const FiniteGModule& m, const std::vector<std::uint32_t>& h) {
  ModuleSubset out;
  for (std::uint32_t x = 0; x < m.size(); ++x) {
    bool fixed = true;
    for (auto g : h)
      if (m.act(g, x) != x) { fixed = false; break; }
    if (fixed) out.push_back(x);
  }
  return out;
}

/// epsilon_H m, with 1/|H| realized as the inverse of |H| modulo exp(M).
inline std::uint32_t apply_idempotent(const FiniteGModule& m, const std::vector<std::uint32_t>& h, std::uint32_t x) {
  std::uint32_t sum = 0;
  for (auto g : h) sum = m.add(sum, m.act(g, x));
  const auto inv = static_cast<std::uint64_t>(inverse_mod(static_cast<std::int64_t>(h.size() % m.exponent()),
                                                          static_cast<std::int64_t>(m.exponent())));
  return m.scale(sum, inv);
}

/// epsilon_H M as a set.
inline ModuleSubset idempotent_image(const FiniteGModule& m, const std::vector<std::uint32_t>& h) {
  std::vector<bool> in(m.size(), false);
  for (std::uint32_t x = 0; x < m.size(); ++x) in[apply_idempotent(m, h, x)] = true;
  ModuleSubset out;
  for (std::uint32_t x = 0; x < m.size(); ++x)
    if (in[x]) out.push_back(x);
  return out;
}

/// M^H, computed both as fixed points and as epsilon_H M; throws
/// std::logic_error if the two routes disagree.
inline ModuleSubset fixed_submodule(const FiniteGModule& m, const std::vector<std::uint32_t>& h) {
  if (!m.group().is_subgroup(h)) throw std::invalid_argument("fixed_submodule: H is not a subgroup");
  auto scan = fixed_points(m, h);
  auto image = idempotent_image(m, h);
  if (scan != image)
    throw std::logic_error("fixed points (" + std::to_string(scan.size()) + ") differ from epsilon_H M (" +
                           std::to_string(image.size()) + ")");
  return scan;
}

struct NormDecompositionReport {
  bool bijective = false;
  bool summation_inverts = false;
  std::uint64_t quotient_size = 0;  // |M / M^G|
  std::uint64_t target_size = 0;    // prod |M^{G_i} / M^G|
  std::string counterexample;

  bool holds() const { return bijective && summation_inverts; }
};

/// Exhaustively checks that m -> (epsilon_{G_i} m)_i induces an isomorphism
/// M/M^G -> (+)_i M^{G_i}/M^G whose inverse is summation.
inline NormDecompositionReport verify_norm_decomposition(const FiniteGModule& m) {
  if (m.size() > 10'000) throw std::range_error("norm decomposition check limited to |M| <= 10^4");
  const auto& g = m.group();
  NormDecompositionReport rep;

  std::vector<std::uint32_t> all(g.order());
  std::iota(all.begin(), all.end(), 0u);
  const auto fixed_g = fixed_submodule(m, all);

  // coset_rep[x] = smallest element of x + M^G
  constexpr std::uint32_t unset = ~0u;
  std::vector<std::uint32_t> coset_rep(m.size(), unset);
  std::vector<std::uint32_t> reps;
  for (std::uint32_t x = 0; x < m.size(); ++x) {
    if (coset_rep[x] != unset) continue;
    reps.push_back(x);
    for (auto f : fixed_g) coset_rep[m.add(x, f)] = x;
  }
  rep.quotient_size = reps.size();

  const auto subs = index_p_subgroups(g);
  std::vector<std::vector<std::uint32_t>> component_reps;  // reps of M^{G_i}/M^G
  rep.target_size = 1;
  for (const auto& s : subs) {
    const auto fixed_i = fixed_submodule(m, s.elements);
    std::set<std::uint32_t> r;
    for (auto x : fixed_i) r.insert(coset_rep[x]);
    component_reps.emplace_back(r.begin(), r.end());
    rep.target_size *= r.size();
    if (rep.target_size > 10'000'000) break;
  }

  auto phi = [&](std::uint32_t x) {
    std::vector<std::uint32_t> t;
    t.reserve(subs.size());
    for (const auto& s : subs) t.push_back(coset_rep[apply_idempotent(m, s.elements, x)]);
    return t;
  };

  // Well defined on M/M^G and injective.
  std::map<std::vector<std::uint32_t>, std::uint32_t> image;
  bool injective = true;
  for (auto x : reps) {
    auto t = phi(x);
    for (auto f : fixed_g) {
      if (phi(m.add(x, f)) != t) {
        rep.counterexample = "norm map not constant on coset of " + std::to_string(x);
        return rep;
      }
    }
    if (!image.emplace(t, x).second) {
      injective = false;
      rep.counterexample = "cosets of " + std::to_string(x) + " and " + std::to_string(image[t]) + " collide";
      break;
    }
  }
  rep.bijective = injective && rep.quotient_size == rep.target_size;
  if (injective && !rep.bijective)
    rep.counterexample = "|M/M^G| = " + std::to_string(rep.quotient_size) + " but target has " +
                         std::to_string(rep.target_size) + " elements";
  if (!rep.bijective) return rep;

  // Summation inverse: every tuple of component representatives sums to a
  // preimage of itself.
  std::vector<std::size_t> odometer(component_reps.size(), 0);
  rep.summation_inverts = true;
  while (true) {
    std::uint32_t sum = 0;
    std::vector<std::uint32_t> tuple;
    for (std::size_t i = 0; i < odometer.size(); ++i) {
      tuple.push_back(component_reps[i][odometer[i]]);
      sum = m.add(sum, tuple.back());
    }
    if (phi(sum) != tuple) {
      rep.summation_inverts = false;
      rep.counterexample = "summation of a component tuple does not map back to it (sum = " + std::to_string(sum) + ")";
      break;
    }
    std::size_t i = 0;
    while (i < odometer.size() && ++odometer[i] == component_reps[i].size()) odometer[i++] = 0;
    if (i == odometer.size()) break;
  }
  return rep;
}

/// Seeded random G-module with |M| <= max_size: a direct sum of character
/// blocks Z/q (generators act by p-th roots of unity) and permutation blocks
/// (Z/q)^p (generators act by cyclic shifts through a functional). When all
/// cyclic factors share one modulus the action is conjugated by a random
/// unimodular change of basis.
template <class Rng>
FiniteGModule random_gmodule(const ElementaryAbelianGroup& g, Rng& rng, std::uint64_t max_size = 10'000) {
  const std::uint32_t p = g.p(), r = g.r();
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  };
  std::vector<std::uint64_t> candidates;  // moduli coprime to p
  for (std::uint64_t q = 2; q <= 31; ++q)
    if (q % p != 0) candidates.push_back(q);

  std::vector<std::uint64_t> moduli;
  std::vector<std::vector<std::vector<std::int64_t>>> blocks_per_gen(r);  // blocks of each generator
  std::vector<std::size_t> block_sizes;
  std::uint64_t size = 1;
  const bool uniform = pick(0, 1) == 0;
  const std::uint64_t uniform_q = candidates[pick(0, std::min<std::size_t>(candidates.size(), 6) - 1)];
  for (int attempt = 0; attempt < 6; ++attempt) {
    const std::uint64_t q = uniform ? uniform_q : candidates[pick(0, candidates.size() - 1)];
    const bool permutation = pick(0, 2) == 0;
    const std::uint64_t block_size = permutation ? p : 1;
    std::uint64_t grow = 1;
    for (std::uint64_t i = 0; i < block_size; ++i) grow *= q;
    if (size * grow > max_size) continue;
    size *= grow;
    if (permutation) {
      const auto phi = static_cast<std::uint32_t>(pick(0, g.order() - 1));
      for (std::uint32_t k = 0; k < r; ++k) {
        const std::uint32_t shift = g.pair(phi, g.basis(k));
        std::vector<std::int64_t> perm(p);
        for (std::uint32_t i = 0; i < p; ++i) perm[i] = (i + shift) % p;
        blocks_per_gen[k].push_back(perm);
      }
      for (std::uint32_t i = 0; i < p; ++i) moduli.push_back(q);
      block_sizes.push_back(p);
    } else {
      std::vector<std::int64_t> roots;
      for (std::uint64_t u = 1; u < q; ++u)
        if (std::gcd(u, q) == 1 && powmod(u, p, q) == 1) roots.push_back(static_cast<std::int64_t>(u));
      for (std::uint32_t k = 0; k < r; ++k) blocks_per_gen[k].push_back({roots[pick(0, roots.size() - 1)]});
      moduli.push_back(q);
      block_sizes.push_back(1);
    }
  }
  if (moduli.empty()) {
    moduli.push_back(candidates.front());
    block_sizes.push_back(1);
    for (std::uint32_t k = 0; k < r; ++k) blocks_per_gen[k].push_back({1});
  }

  const std::size_t s = moduli.size();
  std::vector<IntMatrix> action(r, IntMatrix(s, std::vector<std::int64_t>(s, 0)));
  for (std::uint32_t k = 0; k < r; ++k) {
    std::size_t offset = 0;
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
      const auto& blk = blocks_per_gen[k][b];
      if (block_sizes[b] == 1) {
        action[k][offset][offset] = blk[0];
      } else {
        // permutation block: basis vector i goes to basis vector perm[i]
        for (std::size_t i = 0; i < block_sizes[b]; ++i)
          action[k][offset + static_cast<std::size_t>(blk[i])][offset + i] = 1;
      }
      offset += block_sizes[b];
    }
  }

  const bool same_modulus = std::all_of(moduli.begin(), moduli.end(), [&](auto q) { return q == moduli[0]; });
  if (same_modulus && s > 1) {
    // Conjugate by a product of elementary matrices P = E_1...E_t.
    const auto q = static_cast<std::int64_t>(moduli[0]);
    IntMatrix pm(s, std::vector<std::int64_t>(s, 0)), pinv(s, std::vector<std::int64_t>(s, 0));
    for (std::size_t i = 0; i < s; ++i) pm[i][i] = pinv[i][i] = 1;
    for (int t = 0; t < 4; ++t) {
      const std::size_t i = pick(0, s - 1), j = pick(0, s - 1);
      if (i == j) continue;
      const auto c = static_cast<std::int64_t>(pick(1, static_cast<std::uint64_t>(q) - 1));
      // P <- P (I + c E_ij); P^{-1} <- (I - c E_ij) P^{-1}
      for (std::size_t row = 0; row < s; ++row) pm[row][j] = mod_floor<std::int64_t>(pm[row][j] + c * pm[row][i], q);
      for (std::size_t col = 0; col < s; ++col)
        pinv[i][col] = mod_floor<std::int64_t>(pinv[i][col] - c * pinv[j][col], q);
    }
    auto mul = [&](const IntMatrix& a, const IntMatrix& b) {
      IntMatrix c(s, std::vector<std::int64_t>(s, 0));
      for (std::size_t i = 0; i < s; ++i)
        for (std::size_t l = 0; l < s; ++l)
          for (std::size_t j = 0; j < s; ++j) c[i][j] = mod_floor<std::int64_t>(c[i][j] + a[i][l] * b[l][j], q);
      return c;
    };
    for (auto& a : action) a = mul(mul(pinv, a), pm);
  }
  return FiniteGModule(g, std::move(moduli), std::move(action));
}

}  // namespace heegnerlab
