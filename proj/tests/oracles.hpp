#pragma once

// Brute-force reference implementations used only by the tests. They avoid
// the library's own algorithms so that agreement is meaningful.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

namespace oracle {

inline bool squarefree_by_trial(std::uint64_t n) {
  if (n == 0) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % (p * p) == 0) return false;
  return true;
}

inline int distinct_primes(std::uint64_t n) {
  int t = 0;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    ++t;
    while (n % p == 0) n /= p;
  }
  return t + (n > 1);
}

/// Fundamental test on D = |d| straight from the definition.
inline bool fundamental(std::uint64_t D) {
  if (D % 2 == 1) return D % 4 == 3 && squarefree_by_trial(D);  // -D = 1 mod 4
  if (D % 4 != 0) return false;
  const std::uint64_t m = D / 4;  // -D/4 = -m must be 2 or 3 mod 4
  return (m % 4 == 2 || m % 4 == 1) && squarefree_by_trial(m);
}

/// Reduced primitive forms of discriminant -D found by scanning (a, c) pairs
/// and testing whether 4ac - D is a perfect square.
inline std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t>> reduced_forms_by_square_test(std::int64_t D) {
  std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t>> out;
  for (std::int64_t a = 1; 3 * a * a <= D; ++a) {
    for (std::int64_t c = a; 4 * a * c - D <= a * a; ++c) {
      const std::int64_t sq = 4 * a * c - D;
      if (sq < 0) continue;
      auto b = static_cast<std::int64_t>(std::sqrt(static_cast<double>(sq)));
      while (b * b > sq) --b;
      while ((b + 1) * (b + 1) <= sq) ++b;
      if (b * b != sq) continue;
      for (std::int64_t s : {b, -b}) {
        if (s < 0 && (-s == a || a == c)) continue;
        if (std::gcd(std::gcd(a, s < 0 ? -s : s), c) != 1) continue;
        out.insert({a, s, c});
      }
    }
  }
  return out;
}

/// Legendre symbol (a | p) for an odd prime p by searching for a square root.
inline int legendre_by_search(std::int64_t a, std::int64_t p) {
  const std::int64_t r = ((a % p) + p) % p;
  if (r == 0) return 0;
  for (std::int64_t x = 1; x < p; ++x)
    if (x * x % p == r) return 1;
  return -1;
}

/// Number of affine points of y^2 = x^3 + a x + b over F_p, by a double loop.
inline std::uint64_t affine_points(std::uint64_t p, std::uint64_t a, std::uint64_t b) {
  std::uint64_t n = 0;
  for (std::uint64_t x = 0; x < p; ++x)
    for (std::uint64_t y = 0; y < p; ++y)
      if ((y * y) % p == (((x * x) % p * x) % p + a * x % p + b) % p) ++n;
  return n;
}

}  // namespace oracle
