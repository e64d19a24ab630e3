#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "kleinweyl/chart.hpp"
#include "kleinweyl/error.hpp"
#include "kleinweyl/fit.hpp"
#include "kleinweyl/parallel.hpp"
#include "kleinweyl/special.hpp"
#include "kleinweyl/spectral.hpp"
#include "support.hpp"

using kwtest::kPi;

TEST(PeriodicChart, IndexingRoundTrips) {
  const kleinweyl::PeriodicChart chart({8, 10, 12}, {1.0, 2.0, 3.0});
  EXPECT_EQ(chart.point_count(), 8u * 10u * 12u);
  EXPECT_EQ(chart.stride(2), 1u);
  for (std::size_t p = 0; p < chart.point_count(); ++p) {
    const auto m = chart.multi_index(p);
    const int mi[3] = {m[0], m[1], m[2]};
    EXPECT_EQ(chart.index(mi), p);
  }
  EXPECT_DOUBLE_EQ(chart.coordinate(chart.stride(0), 0), 0.125);
  EXPECT_DOUBLE_EQ(chart.coordinate_volume(), 6.0);
  EXPECT_DOUBLE_EQ(chart.cell_volume() * static_cast<double>(chart.point_count()), 6.0);
}

TEST(Field, SymmetricStorageIsShared) {
  const auto chart = kwtest::square_chart(8);
  auto h = kleinweyl::Field::sym2(chart, 3);
  EXPECT_EQ(h.component_count(), 6u);
  h(0, 2).setConstant(1.5);
  EXPECT_DOUBLE_EQ(h(2, 0)[3], 1.5);
  EXPECT_TRUE(h.all_finite());
}

TEST(SpectralDerivative, SineGivesCosine) {
  for (double L : {2.0 * kPi, 3.0}) {
    const kleinweyl::PeriodicChart chart({32, 16}, {L, 1.0});
    const auto f = kwtest::sampled(chart, [&](double x, double) { return std::sin(2 * kPi * x / L); });
    const auto df = kleinweyl::spectral_derivative(f, 0);
    const auto expected =
        kwtest::sampled(chart, [&](double x, double) { return 2 * kPi / L * std::cos(2 * kPi * x / L); });
    EXPECT_LE(kwtest::max_abs(df.values() - expected.values()), 1e-12);
  }
}

TEST(SpectralDerivative, ConstantIsExactlyZero) {
  const auto chart = kwtest::square_chart(16);
  const auto f = kwtest::sampled(chart, [](double, double) { return 3.25; });
  const auto df = kleinweyl::spectral_derivative(f, 1);
  EXPECT_EQ(kwtest::max_abs(df.values()), 0.0);
}

TEST(SpectralDerivative, ThirdHarmonicAtOrigin) {
  const double L = 5.0;
  const kleinweyl::PeriodicChart chart({24, 24}, {L, L});
  const auto f = kwtest::sampled(chart, [&](double x, double) { return std::sin(3 * 2 * kPi * x / L); });
  const auto df = kleinweyl::spectral_derivative(f, 0);
  EXPECT_NEAR(df.values()[0], 3 * 2 * kPi / L, 1e-11);
}

TEST(SpectralDerivative, SecondAxisAndMixedProduct) {
  const auto chart = kwtest::square_chart(32);
  const auto f = kwtest::sampled(chart, [](double x, double y) { return std::cos(x) * std::sin(2 * y); });
  const auto dy = kleinweyl::spectral_derivative(f, 1);
  const auto expected = kwtest::sampled(chart, [](double x, double y) { return 2 * std::cos(x) * std::cos(2 * y); });
  EXPECT_LE(kwtest::max_abs(dy.values() - expected.values()), 1e-12);
}

TEST(Fit, RecoversPolynomialCoefficients) {
  const auto t = kleinweyl::log_spaced(1e-3, 0.2, 12);
  ASSERT_EQ(t.size(), 12u);
  EXPECT_NEAR(t.front(), 1e-3, 1e-18);
  EXPECT_NEAR(t.back(), 0.2, 1e-15);
  std::vector<double> y;
  for (double s : t) y.push_back(2.0 * s - 0.5 * s * s + 0.1 * s * s * s);
  const std::vector<double> powers{1, 2, 3};
  const auto fit = kleinweyl::fit_powers(t, y, powers, -2.0);
  EXPECT_NEAR(fit.coefficient(1), 2.0, 1e-11);
  EXPECT_NEAR(fit.coefficient(2), -0.5, 1e-9);
  EXPECT_NEAR(fit.coefficient(3), 0.1, 1e-8);
  EXPECT_NEAR(fit.evaluate(0.1), 2.0 * 0.1 - 0.005 + 0.0001, 1e-12);
}

TEST(Fit, RejectsIllConditionedDesign) {
  const std::vector<double> t{1.0, 1.0 + 1e-9, 1.0 + 2e-9};
  const std::vector<double> y{1.0, 2.0, 3.0};
  const std::vector<double> powers{0, 1, 2};
  EXPECT_THROW(kleinweyl::fit_powers(t, y, powers, 0.0), kleinweyl::NumericalError);
}

TEST(Special, ReciprocalGammaAndBallVolume) {
  EXPECT_EQ(kleinweyl::reciprocal_gamma(0.0), 0.0);
  EXPECT_EQ(kleinweyl::reciprocal_gamma(-2.0), 0.0);
  EXPECT_NEAR(kleinweyl::reciprocal_gamma(0.5), 1.0 / std::sqrt(kPi), 1e-15);
  EXPECT_NEAR(kleinweyl::reciprocal_factorial(3.0), 1.0 / 6.0, 1e-16);
  EXPECT_NEAR(kleinweyl::unit_ball_volume(2), kPi, 1e-15);
  EXPECT_NEAR(kleinweyl::unit_ball_volume(3), 4.0 * kPi / 3.0, 1e-14);
}

TEST(Parallel, EveryIndexVisitedOnce) {
  std::vector<int> hits(1000, 0);
  kleinweyl::parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_GE(kleinweyl::thread_limit(), 1);
}
