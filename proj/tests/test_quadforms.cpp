#include <gtest/gtest.h>

#include <random>
#include <tuple>

#include "heegnerlab/quadforms.hpp"
#include "oracles.hpp"

using namespace heegnerlab;

namespace {

using Triple = std::tuple<std::int64_t, std::int64_t, std::int64_t>;

Triple triple(const BinaryQuadraticForm& f) { return {f.a(), f.b(), f.c()}; }

// f(px + qy, rx + sy) for an SL2(Z) matrix [[p, q], [r, s]].
BinaryQuadraticForm transform(const BinaryQuadraticForm& f, std::int64_t p, std::int64_t q, std::int64_t r,
                              std::int64_t s) {
  const std::int64_t a = f.a(), b = f.b(), c = f.c();
  return BinaryQuadraticForm(a * p * p + b * p * r + c * r * r, 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
                             a * q * q + b * q * s + c * s * s);
}

// Dirichlet composition by brute force: move g to an equivalent form whose
// first coefficient is coprime to a1, then search the united middle term.
BinaryQuadraticForm dirichlet(const BinaryQuadraticForm& f, const BinaryQuadraticForm& g) {
  const std::int64_t D = f.b() * f.b() - 4 * f.a() * f.c();
  const std::int64_t a1 = f.a(), b1 = f.b();
  for (std::int64_t x = 0; x <= 12; ++x)
    for (std::int64_t y = 0; y <= 12; ++y) {
      if (std::gcd(x, y) != 1) continue;
      const auto [g0, xu, xv] = xgcd<std::int64_t>(x, y);  // x xu + y xv = 1
      const std::int64_t u = -xv, v = xu;                  // x v - y u = 1
      const auto g2 = transform(g, x, u, y, v);
      const std::int64_t a2 = g2.a(), b2 = g2.b();
      if (std::gcd(a1, a2) != 1) continue;
      for (std::int64_t B = 0; B < 2 * a1 * a2; ++B) {
        if ((B - b1) % (2 * a1) != 0 || (B - b2) % (2 * a2) != 0) continue;
        if ((B * B - D) % (4 * a1 * a2) != 0) continue;
        return reduce(BinaryQuadraticForm(a1 * a2, B, (B * B - D) / (4 * a1 * a2)));
      }
    }
  throw std::runtime_error("dirichlet oracle found no coprime representative");
}

std::vector<std::int64_t> discriminants_up_to(std::int64_t bound) {
  std::vector<std::int64_t> out;
  for (std::int64_t D = 3; D <= bound; ++D)
    if (D % 4 == 0 || D % 4 == 3) out.push_back(-D);
  return out;
}

}  // namespace

TEST(Discriminant, RejectsInvalidValues) {
  EXPECT_THROW(Discriminant(0), std::invalid_argument);
  EXPECT_THROW(Discriminant(5), std::invalid_argument);
  EXPECT_THROW(Discriminant(-5), std::invalid_argument);
  EXPECT_THROW(Discriminant(-(std::int64_t{1} << 62) - 4), std::range_error);
  EXPECT_NO_THROW(Discriminant(-(std::int64_t{1} << 62)));
}

TEST(IsFundamental, Examples) {
  EXPECT_TRUE(is_fundamental(Discriminant(-3)));
  EXPECT_TRUE(is_fundamental(Discriminant(-4)));
  EXPECT_FALSE(is_fundamental(Discriminant(-16)));
  EXPECT_FALSE(oracle::squarefree_by_trial(4));
  EXPECT_TRUE(is_fundamental(Discriminant(-8)));
  EXPECT_FALSE(is_fundamental(Discriminant(-12)));
}

TEST(IsFundamental, MatchesDefinitionOracle) {
  for (std::int64_t d : discriminants_up_to(20000))
    ASSERT_EQ(is_fundamental(Discriminant(d)), oracle::fundamental(static_cast<std::uint64_t>(-d))) << d;
}

TEST(Form, ConstructorValidates) {
  EXPECT_THROW(BinaryQuadraticForm(0, 1, 1), std::invalid_argument);
  EXPECT_THROW(BinaryQuadraticForm(-1, 0, -1), std::invalid_argument);
  EXPECT_THROW(BinaryQuadraticForm(1, 3, 1), std::invalid_argument);  // indefinite
  EXPECT_THROW(BinaryQuadraticForm(2, 0, 2), std::invalid_argument);  // imprimitive
  EXPECT_EQ(BinaryQuadraticForm(2, 1, 3).discriminant().value(), -23);
  EXPECT_EQ(BinaryQuadraticForm(2, -1, 3).to_string(), "(2,-1,3)");
}

TEST(Reduce, Examples) {
  EXPECT_EQ(triple(reduce(BinaryQuadraticForm(1, 0, 1))), Triple(1, 0, 1));
  EXPECT_EQ(triple(reduce(BinaryQuadraticForm(2, 2, 3))), Triple(2, 2, 3));
  EXPECT_EQ(triple(reduce(BinaryQuadraticForm(3, 2, 2))), Triple(2, 2, 3));
  const auto forms = oracle::reduced_forms_by_square_test(20);
  EXPECT_TRUE(forms.count({2, 2, 3}));
}

TEST(Reduce, TieBreakingPicksNonnegativeB) {
  EXPECT_EQ(triple(reduce(BinaryQuadraticForm(2, -2, 3))), Triple(2, 2, 3));
  EXPECT_EQ(triple(reduce(BinaryQuadraticForm(2, -1, 2))), Triple(2, 1, 2));
}

TEST(Reduce, RecoversReducedFormAfterRandomSl2Words) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coin(0, 2), len(0, 5);
  for (std::int64_t d : discriminants_up_to(10000)) {
    for (const auto& f : reduced_forms(Discriminant(d))) {
      auto g = f;
      const int n = len(rng);
      for (int i = 0; i < n; ++i) {
        switch (coin(rng)) {
          case 0: g = transform(g, 1, 1, 0, 1); break;   // T
          case 1: g = transform(g, 1, -1, 0, 1); break;  // T^-1
          default: g = transform(g, 0, -1, 1, 0); break; // S
        }
      }
      const auto r = reduce(g);
      ASSERT_EQ(r, f) << "d=" << d << " start " << f << " word image " << g;
      ASSERT_EQ(reduce(r), r);
      ASSERT_TRUE(r.is_reduced());
    }
  }
}

TEST(ReducedForms, MatchSquareTestOracle) {
  for (std::int64_t d : discriminants_up_to(3000)) {
    std::set<Triple> got;
    for (const auto& f : reduced_forms(Discriminant(d))) got.insert(triple(f));
    ASSERT_EQ(got, oracle::reduced_forms_by_square_test(-d)) << d;
  }
}

TEST(Compose, Examples) {
  const BinaryQuadraticForm e(1, 0, 5), f(2, 2, 3);
  EXPECT_EQ(compose(e, f), f);
  EXPECT_EQ(compose(f, f), e);
  EXPECT_EQ(triple(compose(BinaryQuadraticForm(2, 1, 3), BinaryQuadraticForm(2, -1, 3))), Triple(1, 1, 6));
  EXPECT_THROW(compose(BinaryQuadraticForm(1, 1, 1), e), std::invalid_argument);
}

TEST(Compose, MatchesDirichletOracle) {
  for (std::int64_t d : discriminants_up_to(600)) {
    const auto forms = reduced_forms(Discriminant(d));
    for (const auto& f : forms)
      for (const auto& g : forms) ASSERT_EQ(compose(f, g), dirichlet(f, g)) << f << " * " << g;
  }
}

TEST(Compose, NonReducedInputs) {
  const BinaryQuadraticForm f(2, 1, 3);
  const auto g = transform(f, 2, 1, 1, 1);
  EXPECT_EQ(compose(g, BinaryQuadraticForm(1, 1, 6)), f);
  EXPECT_EQ(power(f, 3), principal_form(Discriminant(-23)));
  EXPECT_EQ(power(f, 0), principal_form(Discriminant(-23)));
}

TEST(Compose, LargeDiscriminantStaysExact) {
  // |d| near 2^62: intermediates exceed 64 bits.
  const std::int64_t d = -((std::int64_t{1} << 62) - 1);  // = 1 mod 4
  const Discriminant disc(d);
  const auto e = principal_form(disc);
  const BinaryQuadraticForm f = reduce(BinaryQuadraticForm(2, 1, (1 - d) / 8));
  EXPECT_EQ(compose(e, f), f);
  EXPECT_EQ(compose(f, inverse(f)), e);
  EXPECT_EQ(compose(compose(f, f), f), compose(f, compose(f, f)));
}

TEST(ClassGroup, Examples) {
  const auto g3 = class_group(Discriminant(-3));
  EXPECT_EQ(g3.h(), 1u);
  EXPECT_EQ(triple(g3[0]), Triple(1, 1, 1));
  EXPECT_TRUE(g3.elementary_divisors().empty());

  const auto g23 = class_group(Discriminant(-23));
  EXPECT_EQ(g23.h(), 3u);
  EXPECT_EQ(g23.elementary_divisors(), std::vector<std::uint64_t>{3});
  std::set<Triple> f23;
  for (const auto& f : g23.elements()) f23.insert(triple(f));
  EXPECT_EQ(f23, (std::set<Triple>{{1, 1, 6}, {2, 1, 3}, {2, -1, 3}}));

  EXPECT_EQ(class_group(Discriminant(-20)).h(), 2u);
  EXPECT_EQ(class_group(Discriminant(-84)).elementary_divisors(), (std::vector<std::uint64_t>{2, 2}));
}

TEST(ClassGroup, GroupLaws) {
  std::mt19937_64 rng(11);
  for (std::int64_t d : discriminants_up_to(10000)) {
    const auto g = class_group(Discriminant(d));
    const std::size_t h = g.h();
    ASSERT_EQ(g[g.identity()], principal_form(Discriminant(d)));
    std::vector<std::vector<std::size_t>> table(h, std::vector<std::size_t>(h));
    const bool full = h <= 30;
    if (full) {
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < h; ++j) table[i][j] = g.multiply(i, j);  // throws if not closed
      for (std::size_t i = 0; i < h; ++i) {
        ASSERT_EQ(table[i][0], i);
        ASSERT_EQ(table[i][g.inverse_of(i)], 0u);
        for (std::size_t j = 0; j < h; ++j) {
          ASSERT_EQ(table[i][j], table[j][i]);
          for (std::size_t k = 0; k < h; ++k) ASSERT_EQ(table[table[i][j]][k], table[i][table[j][k]]) << d;
        }
      }
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, h - 1);
      for (int t = 0; t < 50; ++t) {
        const auto i = pick(rng), j = pick(rng), k = pick(rng);
        ASSERT_EQ(g.multiply(g.multiply(i, j), k), g.multiply(i, g.multiply(j, k))) << d;
        ASSERT_EQ(g.multiply(i, g.inverse_of(i)), 0u);
        ASSERT_EQ(g.multiply(i, 0), i);
      }
    }
  }
}

TEST(ClassGroup, ElementaryDivisorsMatchTorsionCounts) {
  // #{x : x^k = 1} = prod gcd(k, d_i) characterizes the group.
  for (std::int64_t d : discriminants_up_to(4000)) {
    const auto g = class_group(Discriminant(d));
    const auto& divs = g.elementary_divisors();
    std::uint64_t prod = 1;
    for (std::size_t i = 0; i < divs.size(); ++i) {
      prod *= divs[i];
      if (i) { ASSERT_EQ(divs[i] % divs[i - 1], 0u) << d; }
    }
    ASSERT_EQ(prod, g.h());
    for (std::uint64_t k = 1; k <= g.h(); ++k) {
      if (g.h() % k) continue;
      std::uint64_t count = 0;
      for (std::size_t i = 0; i < g.h(); ++i) {
        std::size_t y = 0;
        for (std::uint64_t j = 0; j < k; ++j) y = g.multiply(y, i);
        count += y == 0;
      }
      std::uint64_t expected = 1;
      for (auto e : divs) expected *= std::gcd(k, e);
      ASSERT_EQ(count, expected) << "d=" << d << " k=" << k;
    }
  }
}

TEST(ClassNumber, Examples) {
  EXPECT_EQ(class_number(Discriminant(-4)), 1u);
  EXPECT_EQ(class_number(Discriminant(-47)), 5u);
  EXPECT_EQ(class_number(Discriminant(-40028)), class_group(Discriminant(-40028)).h());
  EXPECT_EQ(class_number(Discriminant(-40028)), oracle::reduced_forms_by_square_test(40028).size());
}

TEST(ClassNumber, AgreesWithClassGroupOnRandomFundamentals) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> pick(3, 1'000'000);
  int done = 0;
  while (done < 500) {
    const auto D = pick(rng);
    if (!oracle::fundamental(D)) continue;
    const Discriminant d(-static_cast<std::int64_t>(D));
    ASSERT_EQ(class_number(d), class_group(d).h()) << D;
    ++done;
  }
}

TEST(Genus, DivisibilityAndTwoRank) {
  for (std::uint64_t D = 3; D <= 100000; ++D) {
    if (!oracle::fundamental(D)) continue;
    const Discriminant d(-static_cast<std::int64_t>(D));
    const int t = oracle::distinct_primes(D);
    const auto h = class_number(d);
    ASSERT_EQ(h % (std::uint64_t{1} << (t - 1)), 0u) << D;
    if (D <= 30000) { ASSERT_EQ(two_rank(class_group(d)), t - 1) << D; }
  }
}

TEST(TwoRank, Examples) {
  EXPECT_EQ(two_rank(class_group(Discriminant(-3))), 0);
  EXPECT_EQ(two_rank(class_group(Discriminant(-20))), 1);
  EXPECT_EQ(two_rank(class_group(Discriminant(-84))), 2);
}

TEST(OddPart, ExamplesAndProperty) {
  EXPECT_EQ(odd_part(1), 1u);
  EXPECT_EQ(odd_part(12), 3u);
  EXPECT_EQ(odd_part(770), 385u);
  EXPECT_THROW(odd_part(0), std::invalid_argument);
  for (std::uint64_t h = 1; h <= 5000; ++h) {
    const auto o = odd_part(h);
    ASSERT_EQ(o % 2, 1u);
    const auto q = h / o;
    ASSERT_EQ(h % o, 0u);
    ASSERT_EQ(q & (q - 1), 0u);
  }
}

TEST(Kronecker, Examples) {
  EXPECT_EQ(kronecker(-7, 11), 1);
  EXPECT_EQ(oracle::legendre_by_search(-7, 11), 1);
  for (std::int64_t a = -50; a <= 50; ++a) EXPECT_EQ(kronecker(a, 1), 1);
  EXPECT_EQ(kronecker(-4, 2), 0);
}

TEST(Kronecker, MatchesSquareSearchAndMultiplicativity) {
  std::vector<std::int64_t> odd_primes;
  for (std::int64_t p = 3; p < 200; p += 2)
    if (oracle::squarefree_by_trial(p) && oracle::distinct_primes(p) == 1) odd_primes.push_back(p);
  for (std::int64_t a = -300; a <= 300; ++a) {
    for (auto p : odd_primes) ASSERT_EQ(kronecker(a, p), oracle::legendre_by_search(a, p)) << a << "|" << p;
    // (a|2) for a = 1 mod 4 discriminants: +1 iff a = +-1 mod 8
    if (((a % 8) + 8) % 8 == 1 || ((a % 8) + 8) % 8 == 7) { ASSERT_EQ(kronecker(a, 2), 1); }
    if (((a % 8) + 8) % 8 == 3 || ((a % 8) + 8) % 8 == 5) { ASSERT_EQ(kronecker(a, 2), -1); }
    for (std::int64_t m = 1; m <= 40; ++m)
      for (std::int64_t n = 1; n <= 40; ++n) ASSERT_EQ(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
  }
}

TEST(CheckedArithmetic, OverflowIsAnError) {
  EXPECT_THROW(checked_mul<std::int64_t>(std::int64_t{1} << 40, std::int64_t{1} << 40), std::overflow_error);
  EXPECT_THROW(checked_add<std::int64_t>(std::numeric_limits<std::int64_t>::max(), 1), std::overflow_error);
  EXPECT_THROW(narrow64(static_cast<i128>(1) << 70), std::overflow_error);
  EXPECT_EQ(checked_sub<std::int64_t>(5, 7), -2);
}
