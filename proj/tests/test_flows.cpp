#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "isoflow/flows.hpp"
#include "isoflow/oracles.hpp"
#include "isoflow/rng.hpp"

using isoflow::IntegratorConfig;

TEST(VolterraRhs, SpecExamples) {
  EXPECT_EQ(isoflow::volterra_rhs(std::vector<double>{0, 2.0, 0, 0.5}), (std::vector<double>{0, 0, 0, 0}));
  EXPECT_EQ(isoflow::volterra_rhs(std::vector<double>{1, 1}), (std::vector<double>{0.5, -0.5}));
  EXPECT_EQ(isoflow::volterra_rhs(std::vector<double>{0, 0, 0}), (std::vector<double>{0, 0, 0}));
}

TEST(TodaRhs, SpecExamples) {
  auto d = isoflow::toda_rhs(std::vector<double>{0, 0}, std::vector<double>{1});
  EXPECT_EQ(d.a, (std::vector<double>{2, -2}));
  EXPECT_EQ(d.b, (std::vector<double>{0}));
  d = isoflow::toda_rhs(std::vector<double>{1, 2, 3}, std::vector<double>{0, 0});
  EXPECT_EQ(d.a, (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(d.b, (std::vector<double>{0, 0}));
  d = isoflow::toda_rhs(std::vector<double>{5, -1}, std::vector<double>{0});
  EXPECT_EQ(d.a, (std::vector<double>{0, 0}));
  EXPECT_THROW(isoflow::toda_rhs(std::vector<double>{1, 2}, std::vector<double>{}), isoflow::ContractError);
}

TEST(Lyapunov, SpecExamples) {
  EXPECT_EQ(isoflow::lyapunov_f(std::vector<double>{0, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(isoflow::lyapunov_f(std::vector<double>{1, 1, 1, 1}), 6.0);
  const double l1 = 1.3, l2 = 0.4;
  EXPECT_DOUBLE_EQ(isoflow::lyapunov_f(std::vector<double>{0, l1, 0, l2}), 0.25 * (5 * l1 * l1 + 9 * l2 * l2));
  EXPECT_EQ(isoflow::lyapunov_rate(std::vector<double>{0, l1, 0, l2}), 0.0);
  EXPECT_DOUBLE_EQ(isoflow::lyapunov_rate(std::vector<double>{1, 1}), -0.5);
  EXPECT_DOUBLE_EQ(isoflow::lyapunov_rate(std::vector<double>{1, 1, 1, 1}), -1.5);
}

// tr K L^2 by dense matrix product, K = 1/4 diag(1, 2, ...).
TEST(Lyapunov, ClosedFormMatchesTraceAndChainRule) {
  isoflow::SplitMix64 rng(21);
  for (int n = 0; n < 100; ++n) {
    const std::size_t k = 2 + rng.next() % 7;
    const auto c = isoflow::random_volterra_state(rng, k);
    double trace = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double l2 = 0.0;  // (L^2)_{ii}
      if (i > 0) l2 += c[i - 1] * c[i - 1];
      if (i + 1 < k) l2 += c[i] * c[i];
      trace += 0.25 * static_cast<double>(i + 1) * l2;
    }
    EXPECT_NEAR(isoflow::lyapunov_f(c), trace, 1e-12);
    // grad f . volterra_rhs
    const auto v = isoflow::volterra_rhs(c);
    double chain = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) chain += 0.5 * static_cast<double>(2 * i + 3) * c[i] * v[i];
    EXPECT_NEAR(isoflow::lyapunov_rate(c), chain, 1e-12);
    EXPECT_LE(isoflow::lyapunov_rate(c), 0.0);
  }
}

TEST(Integrate, EquilibriumIsStationary) {
  const std::vector<double> eq{0, 1, 0, 0.5};
  const auto rec = isoflow::volterra_trajectory(eq, IntegratorConfig{1e-2, 1e-10, 5.0, 0.5});
  ASSERT_EQ(rec.times.size(), 11U);
  for (const auto& s : rec.states) EXPECT_EQ(s, eq);
  ASSERT_TRUE(rec.converged_at.has_value());
  EXPECT_EQ(*rec.converged_at, 0.0);
}

TEST(Integrate, SampleGridAndRecordShape) {
  const auto rec = isoflow::volterra_trajectory({0.3, -0.7, 1.1}, IntegratorConfig{1e-2, 1e-10, 1.05, 0.1});
  ASSERT_EQ(rec.times.size(), 12U);  // 0, 0.1, ..., 1.0, 1.05
  EXPECT_DOUBLE_EQ(rec.times.back(), 1.05);
  for (std::size_t i = 1; i < rec.times.size(); ++i) EXPECT_LT(rec.times[i - 1], rec.times[i]);
  EXPECT_EQ(rec.states.size(), rec.times.size());
  EXPECT_EQ(rec.f_values.size(), rec.times.size());
  EXPECT_EQ(rec.spectrum_drift.size(), rec.times.size());
  EXPECT_EQ(rec.invariant_drift.size(), rec.times.size());
}

TEST(Integrate, ThreeByThreeConvergesToSqrtTwo) {
  const auto rec = isoflow::volterra_trajectory({1, 1}, IntegratorConfig{1e-2, 1e-10, 20.0, 0.1});
  const auto& c = rec.states.back();
  EXPECT_NEAR(std::abs(c[0]), std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(c[1], 0.0, 1e-6);
  for (double d : rec.spectrum_drift) EXPECT_LT(d, 1e-8);
}

TEST(Integrate, DeterministicAndConservative) {
  isoflow::SplitMix64 rng(4);
  const auto c0 = isoflow::random_volterra_state(rng, 6);
  const IntegratorConfig cfg{1e-2, 1e-10, 20.0, 0.05};
  const auto a = isoflow::volterra_trajectory(c0, cfg);
  const auto b = isoflow::volterra_trajectory(c0, cfg);
  EXPECT_EQ(a.states, b.states);
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    EXPECT_LT(a.spectrum_drift[i], 1e-8);
    EXPECT_LT(a.invariant_drift[i], 1e-8);
  }
}

TEST(Integrate, Rk4CrossCheckAgreesWithAdaptive) {
  const std::vector<double> c0{0.8, -1.2, 0.5, 1.9};
  const auto dp = isoflow::integrate(isoflow::volterra_field(), c0, IntegratorConfig{1e-2, 1e-12, 5.0, 0.5});
  const auto rk = isoflow::integrate(isoflow::volterra_field(), c0, IntegratorConfig{1e-3, 1e-12, 5.0, 0.5},
                                     isoflow::StepMethod::rk4);
  ASSERT_EQ(dp.times.size(), rk.times.size());
  for (std::size_t n = 0; n < dp.states.size(); ++n)
    for (std::size_t i = 0; i < c0.size(); ++i) EXPECT_NEAR(dp.states[n][i], rk.states[n][i], 1e-9);
}

TEST(Integrate, ConfigValidation) {
  EXPECT_THROW(isoflow::integrate(isoflow::volterra_field(), {1.0}, IntegratorConfig{0.0, 1e-10, 1.0, 0.1}),
               isoflow::ContractError);
  EXPECT_THROW(isoflow::integrate(isoflow::volterra_field(), {1.0}, IntegratorConfig{1e-2, 1e-10, 1.0, 2.0}),
               isoflow::ContractError);
  EXPECT_THROW(isoflow::integrate(isoflow::volterra_field(), {NAN}, IntegratorConfig{}), isoflow::ContractError);
}

TEST(Integrate, BlowUpIsReportedWithTime) {
  // y' = y^2 from y = 1 blows up at t = 1.
  auto field = [](const std::vector<double>& y) { return std::vector<double>{y[0] * y[0]}; };
  try {
    isoflow::integrate(field, {1.0}, IntegratorConfig{1e-2, 1e-10, 2.0, 0.5});
    FAIL() << "expected IntegrationError";
  } catch (const isoflow::IntegrationError& e) {
    EXPECT_GT(e.time(), 0.9);
    EXPECT_LT(e.time(), 1.0);
  }
}

TEST(VolterraToToda, SpecExamples) {
  const auto j1 = isoflow::volterra_to_toda(std::vector<double>{3.0});
  EXPECT_EQ(j1.a, (std::vector<double>{4.5}));
  EXPECT_TRUE(j1.b.empty());
  const auto j2 = isoflow::volterra_to_toda(std::vector<double>{1, 1, 1});
  EXPECT_EQ(j2.a, (std::vector<double>{0.5, 1.0}));
  EXPECT_EQ(j2.b, (std::vector<double>{-0.5}));
  EXPECT_THROW(isoflow::volterra_to_toda(std::vector<double>{1, 1}), isoflow::ContractError);
}

// Differentiating the mapped state along the Volterra field by central
// differences must reproduce the Toda field, with error O(h^2).
TEST(VolterraToToda, FiniteDifferenceOracle) {
  isoflow::SplitMix64 rng(8);
  for (int n = 0; n < 50; ++n) {
    const std::size_t k = 2 * (1 + rng.next() % 4);
    const auto c = isoflow::random_volterra_state(rng, k);
    const auto v = isoflow::volterra_rhs(c);
    auto mapped_at = [&](double h) {
      auto x = c;
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += h * v[i];
      return isoflow::volterra_to_toda(x);
    };
    const auto J = isoflow::volterra_to_toda(c);
    const auto d = isoflow::toda_rhs(J.a, J.b);
    double prev_err = 0.0;
    for (double h : {1e-3, 5e-4}) {
      const auto p = mapped_at(h), m = mapped_at(-h);
      double err = 0.0;
      for (std::size_t i = 0; i < J.a.size(); ++i) err = std::max(err, std::abs((p.a[i] - m.a[i]) / (2 * h) - d.a[i]));
      for (std::size_t i = 0; i < J.b.size(); ++i) err = std::max(err, std::abs((p.b[i] - m.b[i]) / (2 * h) - d.b[i]));
      EXPECT_LT(err, 1e-4);
      if (prev_err > 1e-9) {
        EXPECT_LT(err, 0.3 * prev_err);  // second order: halving h quarters the error
      }
      prev_err = err;
    }
  }
}

// The alternative diagonal a_i = 1/2 c_i (c_{i+1}^2 - c_{i-1}^2) does not
// transport solutions; the one used by volterra_to_toda does.
TEST(VolterraToToda, AlternativeDiagonalFormulaFailsTheOracle) {
  const std::vector<double> c{0.9, 1.3, -0.6};
  const auto v = isoflow::volterra_rhs(c);
  auto alternative = [](const std::vector<double>& x) {
    const auto r = isoflow::volterra_rhs(x);
    return std::vector<double>{r[0], r[1]};
  };
  const double h = 1e-5;
  auto xp = c, xm = c;
  for (std::size_t i = 0; i < c.size(); ++i) {
    xp[i] += h * v[i];
    xm[i] -= h * v[i];
  }
  const auto pp = alternative(xp), pm = alternative(xm), a = alternative(c);
  const std::vector<double> b{-0.5 * c[0] * c[1]};
  const auto d = isoflow::toda_rhs(a, b);
  const double err = std::abs((pp[0] - pm[0]) / (2 * h) - d.a[0]);
  EXPECT_GT(err, 1e-2);
}

TEST(VolterraToToda, SpectrumIsHalfLambdaSquared) {
  isoflow::SplitMix64 rng(12);
  for (int n = 0; n < 100; ++n) {
    const std::size_t k = 2 * (1 + rng.next() % 4);
    const auto c = isoflow::random_volterra_state(rng, k);
    const auto ev = isoflow::eigenvalues(isoflow::ZeroDiagMatrix{c}, 1e-13).eigenvalues;
    std::vector<double> expected;
    for (std::size_t i = k / 2; i < k; ++i) expected.push_back(0.5 * ev[i] * ev[i]);
    std::sort(expected.begin(), expected.end());
    const auto got = isoflow::eigenvalues(isoflow::volterra_to_toda(c), 1e-13).eigenvalues;
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expected[i], 1e-10);
  }
}

TEST(ComponentSignature, SpecExamples) {
  EXPECT_EQ(isoflow::component_signature(std::vector<double>{1, 1, 1}), (std::vector<int>{1, 1}));
  EXPECT_EQ(isoflow::component_signature(std::vector<double>{-1, 5, 2}), (std::vector<int>{-1, 1}));
  EXPECT_THROW(isoflow::component_signature(std::vector<double>{0, 5, 2}), isoflow::DegeneratePointError);
  EXPECT_THROW(isoflow::component_signature(std::vector<double>{1, 5}), isoflow::ContractError);
}

TEST(ComponentSignature, ConstantAlongTrajectory) {
  const auto rec = isoflow::integrate(isoflow::volterra_field(), {1, 1, 1}, IntegratorConfig{1e-2, 1e-10, 30.0, 0.1});
  for (const auto& c : rec.states) EXPECT_EQ(isoflow::component_signature(c), (std::vector<int>{1, 1}));
}
