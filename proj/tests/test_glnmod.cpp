#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "heegnerlab/glnmod.hpp"

using namespace heegnerlab;

namespace {

std::uint64_t gl2_by_enumeration(std::uint32_t n) {
  std::uint64_t count = 0;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::uint32_t c = 0; c < n; ++c)
        for (std::uint32_t d = 0; d < n; ++d) {
          const std::int64_t det = (static_cast<std::int64_t>(a) * d - static_cast<std::int64_t>(b) * c) % n;
          if (std::gcd<std::int64_t>(det < 0 ? det + n : det, n) == 1) ++count;
        }
  return count;
}

// Subgroups of (Z/n)^2 as the spans of all pairs of vectors.
std::set<std::vector<Vec2>> subgroups_of_plane(std::uint32_t n) {
  std::set<std::vector<Vec2>> out;
  for (std::uint32_t u0 = 0; u0 < n; ++u0)
    for (std::uint32_t u1 = 0; u1 < n; ++u1)
      for (std::uint32_t v0 = 0; v0 < n; ++v0)
        for (std::uint32_t v1 = 0; v1 < n; ++v1) {
          std::set<Vec2> s;
          for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j) s.insert({(i * u0 + j * v0) % n, (i * u1 + j * v1) % n});
          out.insert(std::vector<Vec2>(s.begin(), s.end()));
        }
  return out;
}

std::uint32_t crt(std::uint32_t x, std::uint32_t p, std::uint32_t y, std::uint32_t q) {
  for (std::uint32_t z = 0; z < p * q; ++z)
    if (z % p == x && z % q == y) return z;
  return 0;
}

Mat2 crt(const Mat2& a, std::uint32_t p, const Mat2& b, std::uint32_t q) {
  return {crt(a.a, p, b.a, q), crt(a.b, p, b.b, q), crt(a.c, p, b.c, q), crt(a.d, p, b.d, q)};
}

double ipow(double b, int e) { return std::pow(b, e); }

}  // namespace

TEST(Gl2Order, FormulaMatchesEnumeration) {
  for (std::uint32_t n = 2; n <= 8; ++n) EXPECT_EQ(gl2_order(n), gl2_by_enumeration(n)) << n;
  EXPECT_EQ(gl2_order(12), 4608u);
}

TEST(CloseSubgroup, Examples) {
  const auto trivial = close_subgroup(5, {});
  EXPECT_EQ(trivial.order(), 1u);
  EXPECT_EQ(trivial.index(), gl2_order(5));

  std::vector<Mat2> all;
  for (std::uint32_t a = 0; a < 2; ++a)
    for (std::uint32_t b = 0; b < 2; ++b)
      for (std::uint32_t c = 0; c < 2; ++c)
        for (std::uint32_t d = 0; d < 2; ++d)
          if (mat_invertible({a, b, c, d}, 2)) all.push_back({a, b, c, d});
  const auto full = close_subgroup(2, all);
  EXPECT_EQ(full.order(), 6u);
  EXPECT_EQ(full.index(), 1u);

  EXPECT_EQ(example_family(3, 1).order, 162u);
  EXPECT_THROW(close_subgroup(4, {{2, 0, 0, 1}}), std::invalid_argument);
  EXPECT_THROW(close_subgroup(7, {{1, 1, 0, 1}, {1, 0, 1, 1}}, 100), std::length_error);
}

TEST(CloseSubgroup, IsAGroupAndDeterministic) {
  const std::vector<Mat2> gens{{1, 2, 0, 1}, {5, 0, 0, 7}};
  const auto g = close_subgroup(12, gens);
  const auto h = close_subgroup(12, gens);
  EXPECT_EQ(g.elements(), h.elements());
  std::set<Mat2> s(g.elements().begin(), g.elements().end());
  EXPECT_EQ(s.size(), g.order());
  for (const auto& x : g.elements()) {
    EXPECT_TRUE(s.count(mat_inverse(x, 12)));
    for (const auto& y : g.elements()) ASSERT_TRUE(s.count(mat_mul(x, y, 12)));
  }
  EXPECT_EQ(g.index() * g.order(), gl2_order(12));
}

TEST(Submodules, MatchSpansOfPairs) {
  for (std::uint32_t n = 2; n <= 12; ++n) {
    std::set<std::vector<Vec2>> got;
    for (const auto& w : all_submodules(n)) {
      const auto e = w.elements();
      ASSERT_EQ(e.size(), w.size());
      got.insert(e);
    }
    ASSERT_EQ(got, subgroups_of_plane(n)) << n;
  }
  EXPECT_THROW(Submodule(6, 2, 3), std::invalid_argument);
  EXPECT_THROW(Submodule(6, 1, 1, {2, 0, 0, 1}), std::invalid_argument);
}

TEST(IsInvariant, Examples) {
  const auto borel = close_subgroup(4, {{1, 1, 0, 1}, {3, 0, 0, 1}, {1, 0, 0, 3}});
  EXPECT_TRUE(is_invariant(borel, Submodule::whole(4)));
  EXPECT_TRUE(is_invariant(borel, Submodule(4, 4, 4)));
  EXPECT_TRUE(is_invariant(borel, Submodule(4, 1, 4)));                  // span (1,0)
  EXPECT_FALSE(is_invariant(borel, Submodule(4, 1, 4, {0, 1, 1, 0})));   // span (0,1)
  EXPECT_THROW(is_invariant(borel, Submodule::whole(6)), std::invalid_argument);
}

TEST(ActsAbelian, Examples) {
  const auto borel = close_subgroup(4, {{1, 1, 0, 1}, {3, 0, 0, 1}, {1, 0, 0, 3}});
  EXPECT_TRUE(acts_abelian(borel, Submodule(4, 4, 4)));
  EXPECT_FALSE(acts_abelian(borel, Submodule::whole(4)));
  EXPECT_TRUE(acts_abelian(borel, Submodule(4, 1, 4)));
  EXPECT_THROW(acts_abelian(borel, Submodule(4, 1, 4, {0, 1, 1, 0})), std::invalid_argument);

  const auto cyclic = close_subgroup(9, {{2, 5, 1, 3}});
  for (const auto& w : all_submodules(9))
    if (is_invariant(cyclic, w)) { EXPECT_TRUE(acts_abelian(cyclic, w)); }
}

TEST(ExampleFamily, ScalarFamilyIsAbelianDiagonalIsNot) {
  for (std::uint32_t ell : {2u, 3u, 5u}) {
    const auto f = example_family(ell, 1);
    EXPECT_TRUE(acts_abelian(f.gamma, f.w)) << ell;
    const auto d = diagonal_family(ell, 1);
    // mod 2 the only unit is 1, so diagonal and scalar coincide
    if (ell == 2) {
      EXPECT_EQ(d.order, f.order);
      EXPECT_TRUE(acts_abelian(d.gamma, d.w));
    } else {
      EXPECT_GT(d.order, f.order);
      EXPECT_FALSE(acts_abelian(d.gamma, d.w)) << ell;
    }
  }
}

TEST(ExampleFamily, OrderAndIndexFormulas) {
  double previous = 0;
  std::uint32_t previous_ell = 0;
  for (auto [ell, k] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 1}, {2, 2}, {3, 1}, {3, 2}, {5, 1}}) {
    const auto f = example_family(ell, k);
    const double l = ell;
    EXPECT_DOUBLE_EQ(static_cast<double>(f.order), ipow(l, 5 * static_cast<int>(k)) * (1 - 1 / l)) << ell << "," << k;
    EXPECT_DOUBLE_EQ(static_cast<double>(f.index), ipow(l, 3 * static_cast<int>(k)) * (1 - 1 / (l * l))) << ell << "," << k;
    EXPECT_EQ(f.w.size(), f.gamma.modulus() * static_cast<std::uint64_t>(f.gamma.modulus()));
    EXPECT_GT(f.exponent, 4.0 / 3.0);
    if (ell == previous_ell) { EXPECT_LT(f.exponent, previous); }
    previous = f.exponent;
    previous_ell = ell;
  }
  const auto f = example_family(3, 1);
  EXPECT_NEAR(f.exponent, std::log(81.0) / std::log(24.0), 1e-12);
  EXPECT_NEAR(f.exponent, 1.383, 1e-3);
  EXPECT_THROW(example_family(3, 3), std::length_error);
  EXPECT_THROW(example_family(4, 1), std::invalid_argument);
}

TEST(VerifyBound, Examples) {
  std::vector<Mat2> all;
  for (std::uint32_t a = 0; a < 3; ++a)
    for (std::uint32_t b = 0; b < 3; ++b)
      for (std::uint32_t c = 0; c < 3; ++c)
        for (std::uint32_t d = 0; d < 3; ++d)
          if (mat_invertible({a, b, c, d}, 3)) all.push_back({a, b, c, d});
  const auto full = close_subgroup(3, all);
  const auto r0 = verify_bound(full, Submodule(3, 3, 3));
  EXPECT_EQ(r0.w_size, 1u);
  EXPECT_EQ(r0.index, 1u);
  EXPECT_TRUE(r0.holds);

  const auto f = example_family(3, 1);
  const auto r = verify_bound(f.gamma, f.w);
  EXPECT_EQ(r.w_size, 81u);
  EXPECT_EQ(r.index, 24u);
  EXPECT_TRUE(r.holds);
  EXPECT_THROW(verify_bound(full, Submodule::whole(3)), std::invalid_argument);
}

TEST(ComputeJ, Examples) {
  const auto borel = close_subgroup(8, {{1, 1, 0, 1}, {3, 0, 0, 1}, {5, 2, 0, 7}});
  EXPECT_EQ(compute_J(borel, 2, 3), 3u);
  const auto lower = close_subgroup(8, {{1, 0, 1, 1}});
  EXPECT_EQ(compute_J(lower, 2, 3), 0u);
  const auto f = example_family(3, 1);
  EXPECT_EQ(compute_J(f.gamma, 3, 2), 1u);
  EXPECT_THROW(compute_J(f.gamma, 3, 3), std::invalid_argument);
}

TEST(Crt, IndexOfProductSubgroupIsProductOfIndices) {
  std::mt19937_64 rng(99);
  for (auto [p, q] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 3}, {2, 5}, {2, 7}, {3, 5}}) {
    const std::uint32_t n = p * q;
    for (int t = 0; t < 10; ++t) {
      const auto g1 = random_generators(p, rng), g2 = random_generators(q, rng);
      const auto h1 = close_subgroup(p, g1), h2 = close_subgroup(q, g2);
      std::vector<Mat2> gens;
      for (const auto& m : g1) gens.push_back(crt(m, p, Mat2{}, q));
      for (const auto& m : g2) gens.push_back(crt(Mat2{}, p, m, q));
      const auto h = close_subgroup(n, gens);
      ASSERT_EQ(h.index(), h1.index() * h2.index()) << n;
      ASSERT_EQ(project(h, p).order(), h1.order());
      ASSERT_EQ(project(h, q).order(), h2.order());
    }
  }
}

TEST(BoundSweep, SmallSweepHoldsAndIsDeterministic) {
  const auto a = sweep_gl2_bound(8, 12, 7, 1);
  const auto b = sweep_gl2_bound(8, 12, 7, 3);
  EXPECT_EQ(a.violations, 0u);
  EXPECT_GT(a.nontrivial_instances, 0u);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].n, b.rows[i].n);
    EXPECT_EQ(a.rows[i].report.gamma_order, b.rows[i].report.gamma_order);
    EXPECT_EQ(a.rows[i].report.w_size, b.rows[i].report.w_size);
  }
  EXPECT_LE(a.max_exponent, 3.0);
  EXPECT_THROW(sweep_gl2_bound(1, 1, 1, 1), std::invalid_argument);
}
