#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "arith.hpp"

namespace heegnerlab {

/// Largest supported discriminant magnitude.
inline constexpr std::int64_t max_disc_magnitude = std::int64_t{1} << 62;

/// Negative discriminant, value = 0 or 1 mod 4.
class Discriminant {
 public:
  explicit Discriminant(std::int64_t value) : value_(value) {
    if (value >= 0) throw std::invalid_argument("discriminant must be negative: " + std::to_string(value));
    if (value < -max_disc_magnitude)
      throw std::range_error("discriminant magnitude exceeds 2^62: " + std::to_string(value));
    auto r = mod_floor<std::int64_t>(value, 4);
    if (r != 0 && r != 1)
      throw std::invalid_argument("discriminant must be 0 or 1 mod 4: " + std::to_string(value));
  }

  std::int64_t value() const { return value_; }
  std::uint64_t magnitude() const { return static_cast<std::uint64_t>(-value_); }

  bool operator==(const Discriminant&) const = default;
  auto operator<=>(const Discriminant&) const = default;

 private:
  std::int64_t value_;
};

/// Fundamental discriminant test, applied to the signed value d < 0:
/// d odd, squarefree, d = 1 mod 4; or 4 | d with d/4 squarefree and
/// d/4 = 2 or 3 mod 4.
inline bool is_fundamental(Discriminant d) {
  const std::int64_t v = d.value();
  if (v & 1) return mod_floor<std::int64_t>(v, 4) == 1 && is_squarefree(d.magnitude());
  if (mod_floor<std::int64_t>(v, 4) != 0) return false;
  const std::int64_t m = v / 4;
  const auto r = mod_floor<std::int64_t>(m, 4);
  return (r == 2 || r == 3) && is_squarefree(static_cast<std::uint64_t>(-m));
}

/// Positive-definite primitive binary quadratic form a x^2 + b xy + c y^2.
/// Not necessarily reduced; see reduce().
class BinaryQuadraticForm {
 public:
  BinaryQuadraticForm(std::int64_t a, std::int64_t b, std::int64_t c) : a_(a), b_(b), c_(c) {
    if (a <= 0 || c <= 0)
      throw std::invalid_argument("form is not positive definite: " + to_string());
    const i128 disc = discriminant128();
    if (disc >= 0) throw std::invalid_argument("form is not positive definite: " + to_string());
    if (-disc > max_disc_magnitude) throw std::range_error("form discriminant exceeds 2^62: " + to_string());
    if (gcd_value(gcd_value(a, b), c) != 1) throw std::invalid_argument("form is not primitive: " + to_string());
  }

  std::int64_t a() const { return a_; }
  std::int64_t b() const { return b_; }
  std::int64_t c() const { return c_; }

  Discriminant discriminant() const { return Discriminant(static_cast<std::int64_t>(discriminant128())); }

  bool is_reduced() const {
    if (abs_value(b_) > a_ || a_ > c_) return false;
    if ((abs_value(b_) == a_ || a_ == c_) && b_ < 0) return false;
    return true;
  }

  bool operator==(const BinaryQuadraticForm&) const = default;
  auto operator<=>(const BinaryQuadraticForm&) const = default;

  std::string to_string() const {
    return "(" + std::to_string(a_) + "," + std::to_string(b_) + "," + std::to_string(c_) + ")";
  }

  friend std::ostream& operator<<(std::ostream& os, const BinaryQuadraticForm& f) {
    return os << f.to_string();
  }

 private:
  i128 discriminant128() const {
    i128 bb = checked_mul<i128>(b_, b_);
    i128 ac4 = checked_mul<i128>(checked_mul<i128>(4, a_), c_);
    return checked_sub(bb, ac4);
  }

  std::int64_t a_, b_, c_;
};

namespace detail {

struct form128 {
  i128 a, b, c;
};

// Gauss reduction on 128-bit coefficients. disc is passed in so that c can be
// recomputed exactly after every normalization step.
inline form128 reduce128(form128 f, i128 disc) {
  auto normalize = [&](form128& g) {
    // Move b into (-a, a].
    const i128 two_a = 2 * g.a;
    i128 r = mod_floor<i128>(g.b, two_a);
    if (r > g.a) r -= two_a;
    g.b = r;
    g.c = (g.b * g.b - disc) / (4 * g.a);
  };
  normalize(f);
  while (f.a > f.c) {
    f = {f.c, -f.b, f.a};
    normalize(f);
  }
  if (f.a == f.c && f.b < 0) f.b = -f.b;
  return f;
}

inline BinaryQuadraticForm to_form(const form128& f) {
  return BinaryQuadraticForm(narrow64(f.a), narrow64(f.b), narrow64(f.c));
}

}  // namespace detail

/// Unique reduced representative of the SL2(Z)-class of f:
/// |b| <= a <= c, and b >= 0 when |b| = a or a = c.
inline BinaryQuadraticForm reduce(const BinaryQuadraticForm& f) {
  const i128 disc = f.discriminant().value();
  return detail::to_form(detail::reduce128({f.a(), f.b(), f.c()}, disc));
}

inline BinaryQuadraticForm principal_form(Discriminant d) {
  const std::int64_t b = d.value() & 1;
  return BinaryQuadraticForm(1, b, (b - d.value()) / 4);
}

/// Inverse class: (a, -b, c), reduced.
inline BinaryQuadraticForm inverse(const BinaryQuadraticForm& f) {
  return reduce(BinaryQuadraticForm(f.a(), -f.b(), f.c()));
}

/// Dirichlet composition (Shanks' formulation); returns the reduced product.
inline BinaryQuadraticForm compose(const BinaryQuadraticForm& f, const BinaryQuadraticForm& g) {
  const Discriminant d = f.discriminant();
  if (g.discriminant() != d)
    throw std::invalid_argument("compose: discriminants differ: " + f.to_string() + " vs " + g.to_string());
  const i128 disc = d.value();

  BinaryQuadraticForm f1 = reduce(f), f2 = reduce(g);
  if (f1.a() > f2.a()) std::swap(f1, f2);
  const i128 a1 = f1.a(), b1 = f1.b();
  const i128 a2 = f2.a(), b2 = f2.b(), c2 = f2.c();

  const i128 s = (b1 + b2) / 2;
  const i128 n = b2 - s;

  i128 y1, dd;
  if (a2 % a1 == 0) {
    y1 = 0;
    dd = a1;
  } else {
    auto r = xgcd<i128>(a2, a1);
    dd = r.g;
    y1 = r.u;
  }

  i128 x2, y2, d1;
  if (s % dd == 0) {
    y2 = -1;
    x2 = 0;
    d1 = dd;
  } else {
    auto r = xgcd<i128>(s, dd);
    d1 = r.g;
    x2 = r.u;
    y2 = -r.v;
  }

  const i128 v1 = a1 / d1;
  const i128 v2 = a2 / d1;
  const i128 r = mod_floor<i128>(y1 * y2 * n - x2 * c2, v1);
  const i128 b3 = b2 + 2 * v2 * r;
  const i128 a3 = v1 * v2;
  const i128 num = b3 * b3 - disc;
  if (num % (4 * a3) != 0) throw std::logic_error("compose: non-integral result (internal error)");
  return detail::to_form(detail::reduce128({a3, b3, num / (4 * a3)}, disc));
}

/// f^e for e >= 0 by square-and-multiply.
inline BinaryQuadraticForm power(const BinaryQuadraticForm& f, std::uint64_t e) {
  BinaryQuadraticForm result = principal_form(f.discriminant());
  BinaryQuadraticForm base = reduce(f);
  while (e > 0) {
    if (e & 1) result = compose(result, base);
    e >>= 1;
    if (e > 0) base = compose(base, base);
  }
  return result;
}

/// The finite abelian group of reduced primitive forms of a discriminant.
/// elements are sorted lexicographically by (a, b, c); index 0 is the
/// principal form.
class ClassGroup {
 public:
  explicit ClassGroup(Discriminant d);

  Discriminant disc() const { return disc_; }
  std::size_t h() const { return elements_.size(); }
  const std::vector<BinaryQuadraticForm>& elements() const { return elements_; }
  const std::vector<std::uint64_t>& elementary_divisors() const { return divisors_; }

  const BinaryQuadraticForm& operator[](std::size_t i) const { return elements_.at(i); }
  std::size_t identity() const { return 0; }

  /// Index of a (not necessarily reduced) form of this discriminant.
  std::size_t index_of(const BinaryQuadraticForm& f) const {
    const auto r = reduce(f);
    auto it = index_.find({r.a(), r.b()});
    if (it == index_.end()) throw std::invalid_argument("form " + f.to_string() + " is not in the class group");
    return it->second;
  }

  std::size_t multiply(std::size_t i, std::size_t j) const {
    return index_of(compose(elements_.at(i), elements_.at(j)));
  }

  std::size_t inverse_of(std::size_t i) const { return index_of(inverse(elements_.at(i))); }

  std::size_t order_of(std::size_t i) const {
    std::size_t k = 1;
    BinaryQuadraticForm x = elements_.at(i);
    while (x.a() != 1) {
      x = compose(x, elements_[i]);
      ++k;
    }
    return k;
  }

 private:
  Discriminant disc_;
  std::vector<BinaryQuadraticForm> elements_;
  std::vector<std::uint64_t> divisors_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> index_;
};

/// Reduced primitive forms of discriminant d by the bounded scan
/// a <= sqrt(|d|/3), |b| <= a, c = (b^2 - d)/(4a) >= a.
inline std::vector<BinaryQuadraticForm> reduced_forms(Discriminant d) {
  std::vector<BinaryQuadraticForm> out;
  const i128 disc = d.value();
  const std::int64_t a_max = static_cast<std::int64_t>(isqrt(d.magnitude() / 3));
  for (std::int64_t a = 1; a <= a_max; ++a) {
    const i128 four_a = 4 * static_cast<i128>(a);
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      if (((b - disc) & 1) != 0) continue;
      const i128 num = static_cast<i128>(b) * b - disc;
      if (num % four_a != 0) continue;
      const i128 c = num / four_a;
      if (c < a) continue;
      if (c == a && b < 0) continue;
      if (gcd_value<i128>(gcd_value<i128>(a, b), c) != 1) continue;
      out.emplace_back(a, b, static_cast<std::int64_t>(c));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline ClassGroup::ClassGroup(Discriminant d) : disc_(d), elements_(reduced_forms(d)) {
  for (std::size_t i = 0; i < elements_.size(); ++i) index_[{elements_[i].a(), elements_[i].b()}] = i;

  // Elementary divisors from the p-power torsion counts:
  // #{x : x^(p^k) = 1} = p^(sum_i min(k, e_i)) for the p-primary exponents e_i.
  const std::uint64_t h = elements_.size();
  std::vector<std::vector<int>> exponents;  // per prime, descending
  std::vector<std::uint64_t> primes;
  for (const auto& [p, v] : factorize(h)) {
    std::vector<std::uint64_t> torsion(static_cast<std::size_t>(v) + 1, 0);
    for (const auto& x : elements_) {
      BinaryQuadraticForm y = x;
      for (int k = 0; k <= v; ++k) {
        if (y.a() == 1) {
          for (int j = k; j <= v; ++j) ++torsion[static_cast<std::size_t>(j)];
          break;
        }
        y = power(y, p);
      }
    }
    // rank_at[k] = #{i : e_i >= k} = log_p(torsion[k] / torsion[k-1]).
    std::vector<int> rank_at(static_cast<std::size_t>(v) + 2, 0);
    for (int k = 1; k <= v; ++k) {
      std::uint64_t q = torsion[static_cast<std::size_t>(k)] / torsion[static_cast<std::size_t>(k - 1)];
      int r = 0;
      while (q > 1) {
        q /= p;
        ++r;
      }
      rank_at[static_cast<std::size_t>(k)] = r;
    }
    std::vector<int> exps;
    for (int k = v; k >= 1; --k)
      for (int c = 0; c < rank_at[static_cast<std::size_t>(k)] - rank_at[static_cast<std::size_t>(k + 1)]; ++c)
        exps.push_back(k);
    primes.push_back(p);
    exponents.push_back(std::move(exps));
  }
  std::size_t rank = 0;
  for (const auto& e : exponents) rank = std::max(rank, e.size());
  divisors_.assign(rank, 1);
  // divisors_ ascending: the largest invariant factor collects every prime's largest exponent.
  for (std::size_t pi = 0; pi < primes.size(); ++pi)
    for (std::size_t j = 0; j < exponents[pi].size(); ++j)
      for (int k = 0; k < exponents[pi][j]; ++k) divisors_[rank - 1 - j] *= primes[pi];
}

inline ClassGroup class_group(Discriminant d) { return ClassGroup(d); }

/// Number of reduced primitive forms, counted by scanning b >= 0 and testing
/// divisors a of (b^2 - d)/4 in [max(b,1), sqrt((b^2 - d)/4)]. Independent of
/// the enumeration used by ClassGroup.
inline std::uint64_t class_number(Discriminant d) {
  const std::uint64_t D = d.magnitude();
  const std::uint64_t b_max = isqrt(D / 3);
  std::uint64_t count = 0;
  for (std::uint64_t b = D & 1; b <= b_max; b += 2) {
    const std::uint64_t n = (b * b + D) / 4;
    for (std::uint64_t a = std::max<std::uint64_t>(b, 1); a * a <= n; ++a) {
      if (n % a != 0) continue;
      const std::uint64_t c = n / a;
      if (std::gcd(std::gcd(a, b), c) != 1) continue;
      count += (b == 0 || b == a || a == c) ? 1 : 2;
    }
  }
  return count;
}

/// Number of even elementary divisors.
inline int two_rank(const ClassGroup& g) {
  int r = 0;
  for (auto d : g.elementary_divisors())
    if (d % 2 == 0) ++r;
  return r;
}

}  // namespace heegnerlab
