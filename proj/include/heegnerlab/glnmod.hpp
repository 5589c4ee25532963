#pragma once

// Subgroups of GL2(Z/nZ), invariant submodules of V = (Z/nZ)^2, and the
// abelian-action bound |W| <= I(Gamma)^3.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "arith.hpp"
#include "parallel.hpp"

namespace heegnerlab {

/// 2x2 matrix over Z/nZ, entries in [0, n): [[a, b], [c, d]].
struct Mat2 {
  std::uint32_t a = 1, b = 0, c = 0, d = 1;
  bool operator==(const Mat2&) const = default;
  auto operator<=>(const Mat2&) const = default;
};

using Vec2 = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t max_modulus = 65535;

inline Mat2 mat_mul(const Mat2& x, const Mat2& y, std::uint32_t n) {
  auto f = [n](std::uint64_t p, std::uint64_t q, std::uint64_t r, std::uint64_t s) {
    return static_cast<std::uint32_t>((p * q + r * s) % n);
  };
  return {f(x.a, y.a, x.b, y.c), f(x.a, y.b, x.b, y.d), f(x.c, y.a, x.d, y.c), f(x.c, y.b, x.d, y.d)};
}

inline Vec2 mat_apply(const Mat2& m, const Vec2& v, std::uint32_t n) {
  return {static_cast<std::uint32_t>((static_cast<std::uint64_t>(m.a) * v[0] + static_cast<std::uint64_t>(m.b) * v[1]) % n),
          static_cast<std::uint32_t>((static_cast<std::uint64_t>(m.c) * v[0] + static_cast<std::uint64_t>(m.d) * v[1]) % n)};
}

inline std::uint32_t mat_det(const Mat2& m, std::uint32_t n) {
  const std::int64_t det = static_cast<std::int64_t>(m.a) * m.d - static_cast<std::int64_t>(m.b) * m.c;
  return static_cast<std::uint32_t>(mod_floor<std::int64_t>(det, n));
}

inline bool mat_invertible(const Mat2& m, std::uint32_t n) { return std::gcd(mat_det(m, n), n) == 1; }

inline Mat2 mat_inverse(const Mat2& m, std::uint32_t n) {
  const auto inv = static_cast<std::uint64_t>(inverse_mod(mat_det(m, n), n));
  auto s = [&](std::uint64_t v) { return static_cast<std::uint32_t>(v * inv % n); };
  return {s(m.d), s((n - m.b) % n), s((n - m.c) % n), s(m.a)};
}

inline Mat2 mat_reduce(Mat2 m, std::uint32_t n) { return {m.a % n, m.b % n, m.c % n, m.d % n}; }

/// |GL2(Z/nZ)| = n^4 prod_{p | n} (1 - 1/p)(1 - 1/p^2).
inline std::uint64_t gl2_order(std::uint32_t n) {
  if (n < 1) throw std::invalid_argument("modulus must be >= 1");
  std::uint64_t order = 1;
  for (const auto& [p, e] : factorize(n)) {
    std::uint64_t pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    // |GL2(Z/p^e)| = p^(4(e-1)) (p^2 - 1)(p^2 - p)
    std::uint64_t lift = 1;
    for (int i = 0; i < 4 * (e - 1); ++i) lift *= p;
    order *= lift * (p * p - 1) * (p * p - p);
  }
  return order;
}

/// Explicit subgroup of GL2(Z/nZ): generators plus breadth-first closure.
class GL2Subgroup {
 public:
  GL2Subgroup(std::uint32_t n, std::vector<Mat2> generators, std::vector<Mat2> elements)
      : n_(n), generators_(std::move(generators)), elements_(std::move(elements)) {}

  std::uint32_t modulus() const { return n_; }
  const std::vector<Mat2>& generators() const { return generators_; }
  const std::vector<Mat2>& elements() const { return elements_; }
  std::uint64_t order() const { return elements_.size(); }
  std::uint64_t index() const { return gl2_order(n_) / order(); }

 private:
  std::uint32_t n_;
  std::vector<Mat2> generators_;
  std::vector<Mat2> elements_;
};

/// Breadth-first closure of the generators; elements are listed in discovery
/// order starting from the identity.
inline GL2Subgroup close_subgroup(std::uint32_t n, std::vector<Mat2> generators, std::uint64_t cap = 10'000'000) {
  if (n < 2 || n > max_modulus) throw std::invalid_argument("modulus must be in [2, 65535]");
  for (auto& g : generators) {
    g = mat_reduce(g, n);
    if (!mat_invertible(g, n)) throw std::invalid_argument("generator is not invertible mod " + std::to_string(n));
  }
  const std::uint64_t n64 = n;
  auto key = [n64](const Mat2& m) { return ((m.a * n64 + m.b) * n64 + m.c) * n64 + m.d; };
  const std::uint64_t space = n64 * n64 * n64 * n64;

  std::vector<Mat2> elements{Mat2{}};
  std::vector<bool> dense;
  std::unordered_set<std::uint64_t> sparse;
  const bool use_dense = space <= (std::uint64_t{1} << 27);
  auto insert = [&](const Mat2& m) {
    const auto k = key(m);
    if (use_dense) {
      if (dense[k]) return false;
      dense[k] = true;
      return true;
    }
    return sparse.insert(k).second;
  };
  if (use_dense) dense.assign(space, false);
  insert(elements[0]);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const auto& g : generators) {
      const Mat2 y = mat_mul(elements[i], g, n);
      if (insert(y)) {
        elements.push_back(y);
        if (elements.size() > cap)
          throw std::length_error("subgroup closure exceeds cap of " + std::to_string(cap) + " elements");
      }
    }
  }
  return GL2Subgroup(n, std::move(generators), std::move(elements));
}

/// Image of Gamma under reduction mod a divisor d of n.
inline GL2Subgroup project(const GL2Subgroup& g, std::uint32_t d) {
  if (d < 2 || g.modulus() % d != 0) throw std::invalid_argument("projection modulus must divide n");
  std::vector<Mat2> gens;
  for (const auto& m : g.generators()) gens.push_back(mat_reduce(m, d));
  return close_subgroup(d, std::move(gens));
}

/// W = P (m1 Z/nZ x m2 Z/nZ) with m1 | m2 | n and P invertible mod n.
class Submodule {
 public:
  Submodule(std::uint32_t n, std::uint32_t m1, std::uint32_t m2, Mat2 basis = {})
      : n_(n), m1_(m1), m2_(m2), basis_(mat_reduce(basis, n)) {
    if (n < 2 || m1 == 0 || m2 == 0 || m2 % m1 != 0 || n % m2 != 0)
      throw std::invalid_argument("submodule needs m1 | m2 | n");
    if (!mat_invertible(basis_, n)) throw std::invalid_argument("submodule basis is not invertible mod n");
    basis_inverse_ = mat_inverse(basis_, n);
  }

  /// The whole of V.
  static Submodule whole(std::uint32_t n) { return Submodule(n, 1, 1); }

  std::uint32_t modulus() const { return n_; }
  std::uint32_t m1() const { return m1_; }
  std::uint32_t m2() const { return m2_; }
  const Mat2& basis() const { return basis_; }
  std::uint64_t size() const { return static_cast<std::uint64_t>(n_ / m1_) * (n_ / m2_); }

  std::array<Vec2, 2> generators() const {
    return {mat_apply(basis_, {m1_ % n_, 0}, n_), mat_apply(basis_, {0, m2_ % n_}, n_)};
  }

  bool contains(const Vec2& v) const {
    const auto w = mat_apply(basis_inverse_, v, n_);
    return w[0] % m1_ == 0 && w[1] % m2_ == 0;
  }

  std::vector<Vec2> elements() const {
    std::vector<Vec2> out;
    for (std::uint32_t x = 0; x < n_; x += m1_)
      for (std::uint32_t y = 0; y < n_; y += m2_) out.push_back(mat_apply(basis_, {x, y}, n_));
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::uint32_t n_, m1_, m2_;
  Mat2 basis_, basis_inverse_;
};

inline bool is_invariant(const GL2Subgroup& g, const Submodule& w) {
  if (g.modulus() != w.modulus()) throw std::invalid_argument("modulus mismatch between Gamma and W");
  for (const auto& m : g.generators())
    for (const auto& v : w.generators())
      if (!w.contains(mat_apply(m, v, g.modulus()))) return false;
  return true;
}

/// (BA - AB) kills a basis of W for all generator pairs A, B.
inline bool acts_abelian(const GL2Subgroup& g, const Submodule& w) {
  if (!is_invariant(g, w)) throw std::invalid_argument("W is not Gamma-invariant");
  const auto n = g.modulus();
  const auto& gens = g.generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const Mat2 ab = mat_mul(gens[i], gens[j], n), ba = mat_mul(gens[j], gens[i], n);
      for (const auto& v : w.generators())
        if (mat_apply(ab, v, n) != mat_apply(ba, v, n)) return false;
    }
  return true;
}

struct BoundReport {
  std::uint32_t n = 0;
  std::uint64_t gamma_order = 0;
  std::uint64_t index = 0;
  std::uint64_t w_size = 0;
  bool holds = false;
  double exponent = 0;  // log|W| / log I, 0 when undefined
};

inline BoundReport verify_bound(const GL2Subgroup& g, const Submodule& w) {
  if (!acts_abelian(g, w)) throw std::invalid_argument("Gamma does not act abelianly on W");
  BoundReport r;
  r.n = g.modulus();
  r.gamma_order = g.order();
  r.index = g.index();
  r.w_size = w.size();
  const u128 cube = static_cast<u128>(r.index) * r.index * r.index;
  r.holds = static_cast<u128>(r.w_size) <= cube;
  if (r.index > 1 && r.w_size > 1) r.exponent = std::log(static_cast<double>(r.w_size)) / std::log(static_cast<double>(r.index));
  return r;
}

struct FamilyReport {
  GL2Subgroup gamma;
  Submodule w;
  std::uint64_t order;
  std::uint64_t index;
  double exponent;  // log|W| / log I
};

namespace detail {

inline std::uint32_t ipow(std::uint32_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    r *= b;
    if (r > max_modulus) throw std::length_error("modulus exceeds cap");
  }
  return static_cast<std::uint32_t>(r);
}

// Generators of {A in GL2(Z/l^2k) : A mod l^k is scalar (or diagonal)}.
inline std::vector<Mat2> congruence_family_generators(std::uint32_t ell, std::uint32_t k, bool diagonal) {
  const std::uint32_t lk = ipow(ell, k), n = lk * lk;
  std::vector<Mat2> gens;
  for (std::uint32_t u = 1; u < n; ++u) {
    if (std::gcd(u, n) != 1) continue;
    if (diagonal) {
      gens.push_back({u, 0, 0, 1});
      gens.push_back({1, 0, 0, u});
    } else {
      gens.push_back({u, 0, 0, u});
    }
  }
  gens.push_back({1 + lk, 0, 0, 1});
  gens.push_back({1, lk, 0, 1});
  gens.push_back({1, 0, lk, 1});
  gens.push_back({1, 0, 0, 1 + lk});
  return gens;
}

inline FamilyReport family_report(GL2Subgroup gamma) {
  Submodule w = Submodule::whole(gamma.modulus());
  const auto order = gamma.order(), index = gamma.index();
  const double exponent = std::log(static_cast<double>(w.size())) / std::log(static_cast<double>(index));
  return {std::move(gamma), w, order, index, exponent};
}

}  // namespace detail

/// n = l^2k, Gamma = {A : A = scalar mod l^k}, W = V.
inline FamilyReport example_family(std::uint32_t ell, std::uint32_t k, std::uint32_t modulus_cap = 81) {
  if (!is_prime(ell) || k < 1) throw std::invalid_argument("example family needs a prime l and k >= 1");
  const auto n = detail::ipow(ell, 2 * k);
  if (n > modulus_cap) throw std::length_error("l^2k = " + std::to_string(n) + " exceeds the modulus cap");
  return detail::family_report(close_subgroup(n, detail::congruence_family_generators(ell, k, false)));
}

/// The variant where A mod l^k is only required to be diagonal.
inline FamilyReport diagonal_family(std::uint32_t ell, std::uint32_t k, std::uint32_t modulus_cap = 81) {
  if (!is_prime(ell) || k < 1) throw std::invalid_argument("diagonal family needs a prime l and k >= 1");
  const auto n = detail::ipow(ell, 2 * k);
  if (n > modulus_cap) throw std::length_error("l^2k = " + std::to_string(n) + " exceeds the modulus cap");
  return detail::family_report(close_subgroup(n, detail::congruence_family_generators(ell, k, true)));
}

/// Largest J <= e with every lower-left entry = 0 mod l^J, for n = l^e.
inline std::uint32_t compute_J(const GL2Subgroup& g, std::uint32_t ell, std::uint32_t e) {
  if (!is_prime(ell) || e < 1) throw std::invalid_argument("compute_J needs a prime power modulus");
  std::uint64_t n = 1;
  for (std::uint32_t i = 0; i < e; ++i) n *= ell;
  if (n != g.modulus()) throw std::invalid_argument("modulus is not l^e");
  std::uint32_t j = e;
  for (const auto& m : g.elements()) {
    std::uint32_t v = 0;
    std::uint32_t c = m.c;
    if (c == 0) continue;
    while (c % ell == 0 && v < e) {
      c /= ell;
      ++v;
    }
    j = std::min(j, v);
  }
  return j;
}

/// Every submodule of (Z/nZ)^2 once, each with a (m1, m2, basis) description.
inline std::vector<Submodule> all_submodules(std::uint32_t n) {
  std::vector<std::uint32_t> divisors;
  for (std::uint32_t d = 1; d <= n; ++d)
    if (n % d == 0) divisors.push_back(d);
  std::vector<Mat2> gl;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::uint32_t c = 0; c < n; ++c)
        for (std::uint32_t d = 0; d < n; ++d)
          if (mat_invertible({a, b, c, d}, n)) gl.push_back({a, b, c, d});
  std::map<std::vector<Vec2>, Submodule> seen;
  for (auto m1 : divisors)
    for (auto m2 : divisors) {
      if (m2 % m1 != 0) continue;
      for (const auto& p : gl) {
        Submodule w(n, m1, m2, p);
        seen.try_emplace(w.elements(), w);
      }
    }
  std::vector<Submodule> out;
  for (auto& [k, w] : seen) out.push_back(w);
  std::stable_sort(out.begin(), out.end(), [](const Submodule& x, const Submodule& y) { return x.size() < y.size(); });
  return out;
}

/// Seeded random generating set (1 to 3 matrices) drawn from one of several
/// families: uniform, Borel mod a divisor, scalar mod a divisor, diagonal.
template <class Rng>
std::vector<Mat2> random_generators(std::uint32_t n, Rng& rng) {
  auto uni = [&](std::uint32_t lo, std::uint32_t hi) { return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng); };
  std::vector<std::uint32_t> divisors;
  for (std::uint32_t d = 2; d <= n; ++d)
    if (n % d == 0) divisors.push_back(d);
  const std::uint32_t family = uni(0, 3);
  const std::uint32_t d = divisors[uni(0, static_cast<std::uint32_t>(divisors.size() - 1))];
  const std::uint32_t count = uni(1, 3);
  std::vector<Mat2> gens;
  while (gens.size() < count) {
    Mat2 m;
    switch (family) {
      case 0: m = {uni(0, n - 1), uni(0, n - 1), uni(0, n - 1), uni(0, n - 1)}; break;
      case 1: m = {uni(0, n - 1), uni(0, n - 1), (d * uni(0, n - 1)) % n, uni(0, n - 1)}; break;
      case 2: {
        const std::uint32_t s = uni(0, n - 1);
        m = {(s + d * uni(0, n - 1)) % n, (d * uni(0, n - 1)) % n, (d * uni(0, n - 1)) % n, (s + d * uni(0, n - 1)) % n};
        break;
      }
      default: m = {uni(0, n - 1), 0, 0, uni(0, n - 1)}; break;
    }
    if (mat_invertible(m, n)) gens.push_back(m);
  }
  return gens;
}

struct BoundSweepRow {
  std::uint32_t n;
  std::uint64_t trial;
  BoundReport report;
  std::uint32_t m1, m2;
};

struct BoundSweepReport {
  std::vector<BoundSweepRow> rows;  // every invariant W with abelian action, ordered by (n, trial, W)
  std::uint64_t subgroups = 0;
  std::uint64_t instances = 0;
  std::uint64_t nontrivial_instances = 0;  // |W| > 1
  std::uint64_t violations = 0;
  double max_exponent = 0;
};

/// For n in [2, max_n] and `trials` seeded random Gamma per n, checks every
/// Gamma-invariant W on which Gamma acts abelianly.
inline BoundSweepReport sweep_gl2_bound(std::uint32_t max_n, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
  if (max_n < 2 || max_n > 24) throw std::invalid_argument("sweep modulus must be in [2, 24]");
  std::vector<std::vector<Submodule>> subs(max_n + 1);
  for (std::uint32_t n = 2; n <= max_n; ++n) subs[n] = all_submodules(n);

  const std::uint64_t total = static_cast<std::uint64_t>(max_n - 1) * trials;
  std::vector<std::vector<BoundSweepRow>> results(total);
  parallel_for(total, workers, [&](std::size_t id) {
    const auto n = static_cast<std::uint32_t>(2 + id / trials);
    const std::uint64_t trial = id % trials;
    std::mt19937_64 rng(mix_seed(seed ^ mix_seed(n * 1'000'003ULL + trial)));
    const auto gamma = close_subgroup(n, random_generators(n, rng));
    for (const auto& w : subs[n]) {
      if (!is_invariant(gamma, w) || !acts_abelian(gamma, w)) continue;
      results[id].push_back({n, trial, verify_bound(gamma, w), w.m1(), w.m2()});
    }
  }, 8);

  BoundSweepReport rep;
  rep.subgroups = total;
  for (auto& r : results)
    for (auto& row : r) {
      ++rep.instances;
      if (row.report.w_size > 1) ++rep.nontrivial_instances;
      if (!row.report.holds) ++rep.violations;
      rep.max_exponent = std::max(rep.max_exponent, row.report.exponent);
      rep.rows.push_back(row);
    }
  return rep;
}

}  // namespace heegnerlab
