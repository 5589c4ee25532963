#pragma once

// Point counts of y^2 = x^3 + a x + b over small prime fields, the Frobenius
// discriminant a^2 - 4p, and the fundamental/smooth filter on it.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"
#include "quadforms.hpp"

namespace heegnerlab {

inline constexpr std::uint64_t naive_count_limit = 1'000'000;

class CurveOverFp {
 public:
  CurveOverFp(std::uint64_t p, std::int64_t a, std::int64_t b)
      : p_(p), a_(static_cast<std::uint64_t>(mod_floor<std::int64_t>(a, static_cast<std::int64_t>(p)))),
        b_(static_cast<std::uint64_t>(mod_floor<std::int64_t>(b, static_cast<std::int64_t>(p)))) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime, got " + std::to_string(p));
    const std::uint64_t disc = (4 * powmod(a_, 3, p) + 27 * mulmod(b_, b_, p)) % p;
    if (disc == 0) throw std::invalid_argument("singular curve: 4a^3 + 27b^2 = 0 mod p");
  }

  std::uint64_t p() const { return p_; }
  std::uint64_t a() const { return a_; }
  std::uint64_t b() const { return b_; }

  std::uint64_t rhs(std::uint64_t x) const { return (powmod(x, 3, p_) + mulmod(a_, x, p_) + b_) % p_; }

  /// Quadratic twist by a non-residue u: y^2 = x^3 + a u^2 x + b u^3.
  CurveOverFp twist() const {
    std::uint64_t u = 2;
    while (powmod(u, (p_ - 1) / 2, p_) != p_ - 1) ++u;
    return CurveOverFp(p_, static_cast<std::int64_t>(mulmod(a_, mulmod(u, u, p_), p_)),
                       static_cast<std::int64_t>(mulmod(b_, powmod(u, 3, p_), p_)));
  }

 private:
  std::uint64_t p_, a_, b_;
};

/// #E(F_p) = 1 + sum_x (1 + chi(x^3 + a x + b)). The Hasse bound
/// |p + 1 - n| <= 2 sqrt(p) is asserted on every call.
inline std::uint64_t naive_count(const CurveOverFp& e) {
  const std::uint64_t p = e.p();
  if (p > naive_count_limit) throw std::range_error("naive point counting limited to p <= 10^6");
  std::vector<signed char> chi(p, -1);
  chi[0] = 0;
  for (std::uint64_t y = 1; y <= p / 2; ++y) chi[mulmod(y, y, p)] = 1;
  std::int64_t n = 1;
  for (std::uint64_t x = 0; x < p; ++x) n += 1 + chi[e.rhs(x)];
  const std::int64_t t = static_cast<std::int64_t>(p) + 1 - n;
  if (static_cast<std::uint64_t>(t * t) > 4 * p)
    throw std::logic_error("Hasse bound violated for p = " + std::to_string(p));
  return static_cast<std::uint64_t>(n);
}

inline std::int64_t frobenius_trace(const CurveOverFp& e) {
  return static_cast<std::int64_t>(e.p()) + 1 - static_cast<std::int64_t>(naive_count(e));
}

class supersingular_curve : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// a^2 - 4p for an ordinary curve; throws supersingular_curve when a = 0.
inline std::int64_t frobenius_disc(const CurveOverFp& e) {
  const std::int64_t t = frobenius_trace(e);
  if (t == 0) throw supersingular_curve("trace of Frobenius is 0 (supersingular) for p = " + std::to_string(e.p()));
  return t * t - 4 * static_cast<std::int64_t>(e.p());
}

struct LiftVerdict {
  bool accept = false;
  std::optional<Discriminant> field_disc;
};

/// Accept when delta is a fundamental discriminant and |delta| is B-smooth.
inline LiftVerdict liftable_filter(std::int64_t delta, std::uint64_t smooth_bound) {
  if (delta >= 0) throw std::invalid_argument("liftable_filter needs delta < 0");
  const auto r = mod_floor<std::int64_t>(delta, 4);
  if (r != 0 && r != 1) return {};
  const Discriminant d(delta);
  if (!is_fundamental(d) || !is_smooth(d.magnitude(), smooth_bound)) return {};
  return {true, d};
}

}  // namespace heegnerlab
