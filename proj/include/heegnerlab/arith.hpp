#pragma once

// Integer helpers shared by every module: overflow-checked operations,
// gcd / extended gcd, integer square roots, small factorizations and the
// Kronecker symbol.

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace heegnerlab {

using i128 = __int128;
using u128 = unsigned __int128;

namespace detail {

[[noreturn]] inline void throw_overflow(const char* what) {
  throw std::overflow_error(std::string("integer overflow in ") + what);
}

}  // namespace detail

template <class T>
T checked_add(T a, T b) {
  T r;
  if (__builtin_add_overflow(a, b, &r)) detail::throw_overflow("add");
  return r;
}

template <class T>
T checked_sub(T a, T b) {
  T r;
  if (__builtin_sub_overflow(a, b, &r)) detail::throw_overflow("sub");
  return r;
}

template <class T>
T checked_mul(T a, T b) {
  T r;
  if (__builtin_mul_overflow(a, b, &r)) detail::throw_overflow("mul");
  return r;
}

/// Narrow a 128-bit intermediate back to int64, throwing instead of wrapping.
inline std::int64_t narrow64(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min())
    detail::throw_overflow("narrowing to int64");
  return static_cast<std::int64_t>(v);
}

template <class T>
constexpr T abs_value(T v) {
  return v < 0 ? -v : v;
}

/// Mathematical (non-negative) residue.
template <class T>
constexpr T mod_floor(T a, T m) {
  T r = a % m;
  return r < 0 ? r + m : r;
}

template <class T>
constexpr T floor_div(T a, T b) {
  T q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

template <class T>
constexpr T gcd_value(T a, T b) {
  a = abs_value(a);
  b = abs_value(b);
  while (b != 0) {
    T t = a % b;
    a = b;
    b = t;
  }
  return a;
}

template <class T>
struct xgcd_result {
  T g;  // gcd, non-negative
  T u;  // u*a + v*b = g
  T v;
};

template <class T>
constexpr xgcd_result<T> xgcd(T a, T b) {
  T old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    T q = old_r / r;
    T tmp = old_r - q * r; old_r = r; r = tmp;
    tmp = old_s - q * s; old_s = s; s = tmp;
    tmp = old_t - q * t; old_t = t; t = tmp;
  }
  if (old_r < 0) { old_r = -old_r; old_s = -old_s; old_t = -old_t; }
  return {old_r, old_s, old_t};
}

/// Inverse of a modulo m (m >= 1); throws if gcd(a, m) != 1.
inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  if (m == 1) return 0;
  auto [g, u, v] = xgcd<i128>(mod_floor<i128>(a, m), m);
  (void)v;
  if (g != 1) throw std::domain_error("element is not invertible modulo " + std::to_string(m));
  return static_cast<std::int64_t>(mod_floor<i128>(u, m));
}

inline std::uint64_t isqrt(std::uint64_t n) {
  if (n == 0) return 0;
  std::uint64_t x = static_cast<std::uint64_t>(__builtin_sqrt(static_cast<double>(n)));
  while (static_cast<u128>(x) * x > n) --x;
  while (static_cast<u128>(x + 1) * (x + 1) <= n) ++x;
  return x;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

struct prime_power {
  std::uint64_t p;
  int e;
  bool operator==(const prime_power&) const = default;
};

/// Trial-division factorization. Intended for the moderate sizes used by the
/// verifiers and the census (n up to ~10^12 stays fast).
inline std::vector<prime_power> factorize(std::uint64_t n) {
  std::vector<prime_power> out;
  if (n < 2) return out;
  auto strip = [&](std::uint64_t p) {
    if (n % p != 0) return;
    int e = 0;
    while (n % p == 0) { n /= p; ++e; }
    out.push_back({p, e});
  };
  strip(2);
  strip(3);
  for (std::uint64_t p = 5; p * p <= n; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline int omega(std::uint64_t n) { return static_cast<int>(factorize(n).size()); }

inline bool is_squarefree(std::uint64_t n) {
  for (const auto& f : factorize(n))
    if (f.e > 1) return false;
  return true;
}

/// True when every prime factor of n is at most bound (1 is smooth).
inline bool is_smooth(std::uint64_t n, std::uint64_t bound) {
  for (const auto& f : factorize(n))
    if (f.p > bound) return false;
  return true;
}

inline std::vector<std::uint32_t> primes_up_to(std::uint32_t n) {
  std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return primes;
}

/// Kronecker symbol (a|n), extended to n = 0, n < 0 and even n in the usual way.
inline int kronecker(std::int64_t a, std::int64_t n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int sign = 1;
  i128 aa = a;
  i128 nn = n;
  if (nn < 0) {
    nn = -nn;
    if (aa < 0) sign = -sign;
  }
  // Factor out powers of two from n: (a|2) = 0 if a even, else +1 for a = ±1 mod 8.
  int v = 0;
  while ((nn & 1) == 0) { nn >>= 1; ++v; }
  if (v > 0) {
    if ((aa & 1) == 0) return 0;
    if (v & 1) {
      int r = static_cast<int>(mod_floor<i128>(aa, 8));
      if (r == 3 || r == 5) sign = -sign;
    }
  }
  // Jacobi symbol (aa | nn) with nn odd positive.
  aa = mod_floor<i128>(aa, nn);
  while (aa != 0) {
    while ((aa & 1) == 0) {
      aa >>= 1;
      int r = static_cast<int>(nn & 7);
      if (r == 3 || r == 5) sign = -sign;
    }
    std::swap(aa, nn);
    if ((aa & 3) == 3 && (nn & 3) == 3) sign = -sign;
    aa %= nn;
  }
  return nn == 1 ? sign : 0;
}

/// Largest odd divisor of h.
inline std::uint64_t odd_part(std::uint64_t h) {
  if (h == 0) throw std::invalid_argument("odd_part requires h >= 1");
  return h >> __builtin_ctzll(h);
}

}  // namespace heegnerlab
