#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "isoflow/combinatorics.hpp"
#include "isoflow/oracles.hpp"
#include "isoflow/rng.hpp"
#include "isoflow/tridiagonal.hpp"

using isoflow::ZeroDiagMatrix;

namespace {

// Leibniz expansion of det(L - lambda I); exponential, fine for k <= 7.
double leibniz_char_value(const ZeroDiagMatrix& m, double lambda) {
  const std::size_t k = m.size();
  auto entry = [&](std::size_t i, std::size_t j) {
    if (i == j) return -lambda;
    if (i + 1 == j) return m.c[i];
    if (j + 1 == i) return m.c[j];
    return 0.0;
  };
  std::vector<std::size_t> p(k);
  std::iota(p.begin(), p.end(), 0);
  double det = 0.0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) inversions += p[i] > p[j];
    double prod = inversions % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < k && prod != 0.0; ++i) prod *= entry(i, p[i]);
    det += prod;
  } while (std::next_permutation(p.begin(), p.end()));
  return det;
}

// Subsets of {1..n} without consecutive members, by bitmask filtering.
std::vector<std::vector<int>> subsets_brute_force(int n, int size) {
  std::vector<std::vector<int>> out;
  for (unsigned mask = 0; mask < (1U << n); ++mask) {
    if (mask & (mask >> 1)) continue;
    if (__builtin_popcount(mask) != size) continue;
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1U << i)) s.push_back(i + 1);
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double rel(double a, double b, double scale) { return std::abs(a - b) / std::max(scale, 1e-300); }

}  // namespace

TEST(CharPoly, SpecExamples) {
  EXPECT_EQ(isoflow::char_poly(ZeroDiagMatrix{{}}).coeffs, (std::vector<double>{0.0, -1.0}));
  EXPECT_EQ(isoflow::char_poly(ZeroDiagMatrix{{3.0}}).coeffs, (std::vector<double>{-9.0, 0.0, 1.0}));
  EXPECT_EQ(isoflow::char_poly(ZeroDiagMatrix{{1.0, 1.0}}).coeffs, (std::vector<double>{0.0, 2.0, 0.0, -1.0}));
}

TEST(CharPoly, ParityZerosAreExact) {
  isoflow::SplitMix64 rng(3);
  for (std::size_t k = 1; k <= 9; ++k) {
    const auto p = isoflow::char_poly(ZeroDiagMatrix{isoflow::random_volterra_state(rng, k)});
    ASSERT_EQ(p.degree(), k);
    for (std::size_t i = 0; i <= k; ++i)
      if ((k - i) % 2 == 1) {
        EXPECT_EQ(p.coeffs[i], 0.0) << "k=" << k << " i=" << i;
      }
    EXPECT_EQ(p.coeffs[k], k % 2 == 0 ? 1.0 : -1.0);
  }
}

TEST(CharPoly, RejectsNonFinite) {
  EXPECT_THROW(isoflow::char_poly(ZeroDiagMatrix{{1.0, NAN}}), isoflow::ContractError);
}

TEST(TotallyDisconnected, SpecExamples) {
  EXPECT_EQ(isoflow::totally_disconnected_subsets(4, 2), (std::vector<std::vector<int>>{{1, 3}, {1, 4}, {2, 4}}));
  EXPECT_EQ(isoflow::totally_disconnected_subsets(4, 0), (std::vector<std::vector<int>>{{}}));
  EXPECT_EQ(isoflow::totally_disconnected_subsets(5, 3), (std::vector<std::vector<int>>{{1, 3, 5}}));
}

TEST(TotallyDisconnected, CountsAndBruteForce) {
  for (int n = 0; n <= 12; ++n) {
    for (int m = 0; m <= 6; ++m) {
      const auto subsets = isoflow::totally_disconnected_subsets(n, m);
      EXPECT_EQ(static_cast<isoflow::int128>(subsets.size()), isoflow::binomial(n - m + 1, m)) << n << "," << m;
      EXPECT_EQ(subsets, subsets_brute_force(n, m)) << n << "," << m;
    }
  }
}

TEST(Invariants, SpecExamples) {
  EXPECT_EQ(isoflow::invariants(ZeroDiagMatrix{{1, 1, 1, 1}}).values, (std::vector<double>{1, 4, 3}));
  EXPECT_EQ(isoflow::invariants(ZeroDiagMatrix{{0, 0, 0, 0, 0}}).values, (std::vector<double>{1, 0, 0, 0}));
  // Symbolic k = 5 case: I_1 is the sum of squares, I_2 = c1^2 c3^2 + c1^2 c4^2 + c2^2 c4^2.
  const double c1 = 0.5, c2 = -1.5, c3 = 2.0, c4 = 0.25;
  const auto iv = isoflow::invariants(ZeroDiagMatrix{{c1, c2, c3, c4}}).values;
  EXPECT_DOUBLE_EQ(iv[1], c1 * c1 + c2 * c2 + c3 * c3 + c4 * c4);
  EXPECT_DOUBLE_EQ(iv[2], c1 * c1 * c3 * c3 + c1 * c1 * c4 * c4 + c2 * c2 * c4 * c4);
}

TEST(CharPolyFromInvariants, SpecExamples) {
  const double c1 = 1.7;
  EXPECT_EQ(isoflow::char_poly_from_invariants({{1.0, c1 * c1}}, 2).coeffs,
            (std::vector<double>{-c1 * c1, 0.0, 1.0}));
  EXPECT_EQ(isoflow::char_poly_from_invariants({{1.0, 2.0}}, 3).coeffs, (std::vector<double>{0.0, 2.0, 0.0, -1.0}));
  EXPECT_EQ(isoflow::char_poly_from_invariants({{1.0}}, 1).coeffs, (std::vector<double>{0.0, -1.0}));
  EXPECT_THROW(isoflow::char_poly_from_invariants({{1.0, 2.0}}, 5), isoflow::ContractError);
}

// 1000 random matrices: recurrence, invariant expansion, and two dense
// determinant routes (LU and Leibniz for small k).
TEST(CharPoly, ThreeRoutesAgreeOnRandomMatrices) {
  isoflow::SplitMix64 rng(2024);
  for (int n = 0; n < 1000; ++n) {
    const std::size_t k = 2 + rng.next() % 8;
    const ZeroDiagMatrix m{isoflow::random_volterra_state(rng, k)};
    const auto rec = isoflow::char_poly(m);
    const auto inv = isoflow::char_poly_from_invariants(isoflow::invariants(m), k);
    for (std::size_t i = 0; i <= k; ++i)
      ASSERT_LE(rel(rec.coeffs[i], inv.coeffs[i], std::max(std::abs(rec.coeffs[i]), std::abs(inv.coeffs[i]))), 1e-12);
    for (int q = 0; q < 10; ++q) {
      const double lambda = rng.uniform(-3.0, 3.0);
      const double scale = rec.magnitude(lambda);
      ASSERT_LE(rel(rec(lambda), isoflow::oracle::dense_char_value(m, lambda), scale), 1e-10);
      if (k <= 7) {
        ASSERT_LE(rel(rec(lambda), leibniz_char_value(m, lambda), scale), 1e-10);
      }
    }
  }
}

// det(L - lambda I) = (-1)^k det(L + lambda I): flipping signs of even rows
// and columns turns L - lambda I into -L - lambda I.
TEST(CharPoly, SignFlipIdentity) {
  isoflow::SplitMix64 rng(5);
  for (int n = 0; n < 200; ++n) {
    const std::size_t k = 1 + rng.next() % 9;
    const auto p = isoflow::char_poly(ZeroDiagMatrix{isoflow::random_volterra_state(rng, k)});
    const double lambda = rng.uniform(-3.0, 3.0);
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    EXPECT_LE(std::abs(p(lambda) - sign * p(-lambda)), 1e-12 * p.magnitude(lambda));
  }
}

TEST(Eigenvalues, SpecExamples) {
  const auto s2 = isoflow::eigenvalues(ZeroDiagMatrix{{1.0}}, 1e-13).eigenvalues;
  ASSERT_EQ(s2.size(), 2U);
  EXPECT_NEAR(s2[0], -1.0, 1e-12);
  EXPECT_NEAR(s2[1], 1.0, 1e-12);

  const auto s3 = isoflow::eigenvalues(ZeroDiagMatrix{{1.0, 1.0}}, 1e-13).eigenvalues;
  EXPECT_NEAR(s3[0], -std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(s3[1], 0.0, 1e-12);
  EXPECT_NEAR(s3[2], std::sqrt(2.0), 1e-12);

  const auto d = isoflow::eigenvalues(isoflow::JacobiMatrix({1.0, 2.0}, {0.0}), 1e-13).eigenvalues;
  EXPECT_NEAR(d[0], 1.0, 1e-12);
  EXPECT_NEAR(d[1], 2.0, 1e-12);
}

TEST(Eigenvalues, ZeroPivotGuard) {
  // Shifts at exact eigenvalues produce exactly-zero pivots.
  const auto s = isoflow::eigenvalues(isoflow::JacobiMatrix({0.0, 0.0, 0.0}, {0.0, 0.0}), 1e-13).eigenvalues;
  for (double x : s) EXPECT_NEAR(x, 0.0, 1e-12);
  const auto t = isoflow::eigenvalues(isoflow::JacobiMatrix({1.0, 1.0, 1.0, 1.0}, {1.0, 0.0, 1.0}), 1e-13).eigenvalues;
  EXPECT_NEAR(t[0], 0.0, 1e-12);
  EXPECT_NEAR(t[1], 0.0, 1e-12);
  EXPECT_NEAR(t[2], 2.0, 1e-12);
  EXPECT_NEAR(t[3], 2.0, 1e-12);
}

TEST(Eigenvalues, Errors) {
  EXPECT_THROW(isoflow::eigenvalues(ZeroDiagMatrix{{INFINITY}}, 1e-12), isoflow::ContractError);
  EXPECT_THROW(isoflow::eigenvalues(ZeroDiagMatrix{{1.0}}, 0.0), isoflow::ContractError);
  EXPECT_THROW(isoflow::JacobiMatrix({1.0}, {1.0}), isoflow::ContractError);
}

TEST(Eigenvalues, AreRootsOfCharPolyAndMatchTrace) {
  isoflow::SplitMix64 rng(9);
  for (int n = 0; n < 300; ++n) {
    const std::size_t k = 2 + rng.next() % 8;
    const ZeroDiagMatrix m{isoflow::random_volterra_state(rng, k)};
    const auto ev = isoflow::eigenvalues(m, 1e-13).eigenvalues;
    ASSERT_TRUE(std::is_sorted(ev.begin(), ev.end()));
    const auto p = isoflow::char_poly(m);
    const auto dp = p.derivative();
    for (double x : ev) EXPECT_LE(std::abs(p(x) / dp(x)), 1e-10);  // Newton step: distance to the root
    // sum lambda^2 = tr L^2 = 2 I_1
    double sq = 0.0;
    for (double x : ev) sq += x * x;
    EXPECT_NEAR(sq, 2.0 * isoflow::invariants(m).values[1], 1e-10);
  }
}

TEST(SpectrumSymmetry, SpecExamples) {
  const double r2 = std::sqrt(2.0);
  EXPECT_TRUE(isoflow::spectrum_symmetry_check({{-r2, 0.0, r2}}, 3, 1e-9).ok());
  EXPECT_TRUE(isoflow::spectrum_symmetry_check({{-1.0, 1.0}}, 2, 1e-9).ok());
  EXPECT_FALSE(isoflow::spectrum_symmetry_check({{1.0, 2.0}}, 2, 1e-9).ok());
  EXPECT_FALSE(isoflow::spectrum_symmetry_check({{-1.0, 0.0, 0.0, 1.0}}, 4, 1e-9).ok());
}

TEST(SpectrumSymmetry, HoldsForRandomZeroDiagonalMatrices) {
  isoflow::SplitMix64 rng(17);
  for (int n = 0; n < 500; ++n) {
    const std::size_t k = 2 + rng.next() % 8;
    const ZeroDiagMatrix m{isoflow::random_volterra_state(rng, k)};
    EXPECT_TRUE(isoflow::spectrum_symmetry_check(isoflow::eigenvalues(m, 1e-12), k, 1e-9).ok()) << n;
  }
}
