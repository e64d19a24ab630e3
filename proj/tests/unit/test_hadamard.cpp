#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "geometry_oracle_values.hpp"
#include "kleinweyl/error.hpp"
#include "kleinweyl/hadamard.hpp"
#include "support.hpp"

namespace hd = kleinweyl::hadamard;
namespace oracle = kleinweyl::oracle;
using kleinweyl::harness::ModelKind;
using kwtest::kPi;

namespace {

hd::InterpolatedMetric interpolated(ModelKind kind, int grid = 32) {
  return hd::InterpolatedMetric(kwtest::catalog_data(kind, grid));
}

}  // namespace

TEST(Interpolation, ReproducesGridValuesAndChristoffels) {
  const auto data = kwtest::catalog_data(ModelKind::GenericTorus, 32);
  const auto geom = kleinweyl::geometry::analyze(data);
  const hd::InterpolatedMetric m(geom.metric, geom.curv);
  const std::size_t p = 37;
  const std::vector<double> x{0.3, data.chart().coordinate(p, 0), data.chart().coordinate(p, 1)};
  const auto g = m.metric_at(x);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) EXPECT_NEAR(g(a, b), geom.metric.g(a, b)[p], 1e-13);
  }
  std::vector<double> gamma(27);
  m.christoffel_at(x, gamma);
  EXPECT_NEAR(gamma[(1 * 3 + 0) * 3 + 0], geom.curv.gamma(1, 0, 0)[p], 1e-12);
  EXPECT_NEAR(gamma[(2 * 3 + 1) * 3 + 2], geom.curv.gamma(2, 1, 2)[p], 1e-12);
}

TEST(Geodesic, FlatIsStraight) {
  const auto m = interpolated(ModelKind::FlatTorusUltrastatic, 16);
  const std::vector<double> x0{0.0, 1.0, 2.0}, v0{0.7, 0.2, -0.4};
  const auto end = hd::integrate_geodesic(m, x0, v0, 1.5);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(end.position[i], x0[i] + 1.5 * v0[i], 1e-13);
    EXPECT_NEAR(end.velocity[i], v0[i], 1e-13);
  }
}

TEST(Geodesic, ConstantShiftIsStraightInSkewCoordinates) {
  const auto m = interpolated(ModelKind::ShiftTorus, 16);
  const std::vector<double> x0{0.0, 0.5, 0.5}, v0{1.0, -0.3, 0.2};
  const auto end = hd::integrate_geodesic(m, x0, v0, 1.0);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(end.position[i], x0[i] + v0[i], 1e-13);
}

TEST(Geodesic, LapseTorusConservesEnergy) {
  const auto m = interpolated(ModelKind::LapseTorus);
  const std::vector<double> x0{0.0, 0.4, 1.1}, v0{1.0, 0.3, -0.2};
  const hd::GeodesicState start{x0, v0, 0.0};
  const auto end = hd::integrate_geodesic(m, x0, v0, 1.0);
  EXPECT_LE(hd::energy_drift(m, start, end), 1e-10);
}

TEST(Shooting, FlatVelocityIsTheDifference) {
  const auto m = interpolated(ModelKind::FlatTorusUltrastatic, 16);
  const std::vector<double> base{0.0, 1.0, 1.0}, x{0.2, 1.1, 0.9};
  const auto r = hd::shoot_connect(m, x, base);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.velocity[i], x[i] - base[i], 1e-13);
}

TEST(Shooting, ShiftTorusAlongTheFlow) {
  const auto m = interpolated(ModelKind::ShiftTorus, 16);
  const std::vector<double> base{0.0, 1.0, 1.0}, x{0.15, 1.0, 1.0};
  const auto r = hd::shoot_connect(m, x, base);
  EXPECT_NEAR(r.velocity[0], 0.15, 1e-13);
  EXPECT_NEAR(r.velocity[1], 0.0, 1e-13);
  EXPECT_NEAR(hd::world_function(m, x, base), 0.75 * 0.15 * 0.15, 1e-14);
}

TEST(Shooting, LapseTorusConverges) {
  const auto m = interpolated(ModelKind::LapseTorus);
  const std::vector<double> base{0.0, 0.8, 2.0};
  for (double t : {0.01, 0.1, 0.2, -0.2}) {
    std::vector<double> x = base;
    x[0] = t;
    const auto r = hd::shoot_connect(m, x, base);
    EXPECT_LE(r.residual, 1e-10) << "t = " << t;
  }
}

TEST(WorldFunction, FlatAndSymmetric) {
  const auto flat = interpolated(ModelKind::FlatTorusUltrastatic, 16);
  const std::vector<double> a{0.0, 1.0, 1.0}, b{0.3, 1.1, 0.8};
  EXPECT_NEAR(hd::world_function(flat, b, a), 0.09 - 0.01 - 0.04, 1e-14);

  const auto lapse = interpolated(ModelKind::LapseShiftTorus);
  const std::vector<double> c{0.0, 0.7, 2.5}, d{0.12, 0.75, 2.45};
  EXPECT_NEAR(hd::world_function(lapse, d, c), hd::world_function(lapse, c, d), 1e-9);
}

TEST(VolumeDistortion, FlatIsOne) {
  const auto m = interpolated(ModelKind::ShiftTorus, 16);
  const std::vector<double> base{0.0, 1.0, 1.0}, v{0.3, 0.1, -0.2};
  EXPECT_NEAR(hd::volume_distortion(m, base, v), 1.0, 1e-13);
}

TEST(VolumeDistortion, CurvedSpatialMetricRicciTerm) {
  const auto data = kwtest::catalog_data(ModelKind::CurvedHUltrastatic, 32);
  const auto geom = kleinweyl::geometry::analyze(data);
  const hd::InterpolatedMetric m(geom.metric, geom.curv);
  const std::size_t p = 100;
  const std::vector<double> base{0.0, data.chart().coordinate(p, 0), data.chart().coordinate(p, 1)};
  const double e = 1.0 / std::sqrt(geom.metric.g(1, 1)[p]);  // h-unit vector along x
  const auto s = kleinweyl::log_spaced(1e-3, 0.1, 10);
  std::vector<double> mu;
  for (double si : s) mu.push_back(hd::volume_distortion(m, base, std::vector<double>{0.0, si * e, 0.0}));
  const std::vector<double> powers{0, 2, 3, 4};
  const auto fit = kleinweyl::fit_powers(s, mu, powers, 0.0);
  const double predicted = -geom.curv.ricci(1, 1)[p] * e * e / 6.0;
  EXPECT_NEAR(fit.coefficient(0), 1.0, 1e-10);
  EXPECT_NEAR(fit.coefficient(2), predicted, 1e-4 * std::max(1.0, std::abs(predicted)));
}

TEST(DiagonalExpansions, FlatUltrastatic) {
  const hd::LocalModel model(kwtest::catalog_data(ModelKind::FlatTorusUltrastatic, 16));
  const auto t = hd::default_t_samples();
  const auto e = hd::diagonal_expansions(model, 21, t);
  ASSERT_TRUE(e.complete);
  EXPECT_NEAR(e.gamma.fit.coefficient(2), 1.0, 1e-10);
  EXPECT_NEAR(e.gamma.fit.coefficient(4), 0.0, 1e-8);
  EXPECT_NEAR(e.dnu_gamma.fit.coefficient(1), 2.0, 1e-8);
  EXPECT_NEAR(e.dnu_gamma.fit.coefficient(2), 0.0, 1e-6);
  EXPECT_NEAR(e.v0.fit.coefficient(0), 1.0, 1e-12);
  EXPECT_NEAR(e.v0.fit.coefficient(2), 0.0, 1e-8);
  EXPECT_LE(e.v0_consistency, 1e-8);
}

TEST(DiagonalExpansions, ShiftTorusNormalDerivative) {
  const hd::LocalModel model(kwtest::catalog_data(ModelKind::ShiftTorus, 16));
  const auto e = hd::diagonal_expansions(model, 40, hd::default_t_samples());
  ASSERT_TRUE(e.complete);
  EXPECT_NEAR(e.dnu_gamma.fit.coefficient(1), 2.0, 1e-6);
  EXPECT_NEAR(e.gamma.fit.coefficient(2), 0.75, 1e-10);
}

// Along a Killing orbit the chord length exceeds the proper time (the orbit is
// accelerated), so the t^4 coefficient of the world function is +g(a,a)/12;
// on Rindler space Gamma = 4 sinh^2(g t / 2) / g^2 = t^2 + g^2 t^4 / 12 + ...
TEST(DiagonalExpansions, LapseTorusMatchesOracle) {
  const hd::LocalModel model(kwtest::catalog_data(ModelKind::LapseTorus, oracle::kOracleGrid));
  const auto t = hd::default_t_samples();
  using V = oracle::LapseTorus_values;
  for (int k = 0; k < 2; ++k) {
    const auto p = static_cast<std::size_t>(oracle::kOraclePoints[k][0] * oracle::kOracleGrid +
                                            oracle::kOraclePoints[k][1]);
    const auto e = hd::diagonal_expansions(model, p, t);
    ASSERT_TRUE(e.complete);
    EXPECT_NEAR(e.gamma.fit.coefficient(2), V::zsq[k], 1e-4 * V::zsq[k]);
    EXPECT_NEAR(e.gamma.fit.coefficient(4), V::g_aa[k] / 12.0, 1e-4 * V::g_aa[k] / 12.0 + 1e-9);
    EXPECT_NEAR(e.v0.fit.coefficient(2), V::ric_ZZ[k] / 12.0, 1e-4 * std::abs(V::ric_ZZ[k]) + 1e-9);
    EXPECT_NEAR(e.dnu_gamma.fit.coefficient(3), -V::g_b_nu[k] / 3.0, 1e-4 * std::abs(V::g_b_nu[k]) + 1e-9);
  }
}

TEST(DiagonalExpansions, CoefficientErrorsUseScaleFloor) {
  hd::ExpansionFit f;
  f.fit.powers = {1, 2, 3};
  f.fit.coefficients = {2.0, 1e-5, 0.5};
  f.predicted = {2.0, 0.0, 0.25};
  f.asserted = {true, true, false};
  const auto err = hd::coefficient_errors(f, 1e-3);
  EXPECT_DOUBLE_EQ(err[0], 0.0);
  EXPECT_NEAR(err[1], 1e-5 / 2e-3, 1e-15);
  EXPECT_TRUE(std::isnan(err[2]));
}

TEST(V1Diagonal, FlatAndConstantPotential) {
  const auto flat = kwtest::catalog_data(ModelKind::FlatTorusUltrastatic, 16);
  EXPECT_LE(kwtest::max_abs(hd::v1_diagonal(flat, kleinweyl::geometry::analyze(flat).curv).values()), 1e-14);

  kwtest::Closed m;
  m.c = [](double x, double y) { return 1.0 + 0.1 * std::cos(x) * std::cos(y); };
  const auto curved = kwtest::closed_data(m, 32);
  m.W = [](double, double) { return 0.09; };
  const auto massive = kwtest::closed_data(m, 32);
  const auto curv = kleinweyl::geometry::analyze(curved).curv;
  const auto a = hd::v1_diagonal(curved, curv).values();
  const auto b = hd::v1_diagonal(massive, curv).values();
  EXPECT_LE(kwtest::max_abs(a - b - 0.09), 1e-14);
}

TEST(Riesz, ClosedForms) {
  EXPECT_NEAR(hd::riesz_constant(0.0, 4), 1.0 / (16.0 * kPi), 1e-12 / (16.0 * kPi));
  EXPECT_NEAR(hd::riesz_constant(0.0, 3), 1.0 / (4.0 * kPi), 1e-12 / (4.0 * kPi));
  EXPECT_EQ(hd::riesz_constant(-1.0, 4), 0.0);
}

TEST(Riesz, LimitConstants) {
  EXPECT_NEAR(hd::limit_constant(hd::LimitKind::First, 4).closed_form, 1.0 / (2.0 * kPi * kPi), 1e-15);
  EXPECT_NEAR(hd::limit_constant(hd::LimitKind::Third, 5).closed_form, 1.0 / (8.0 * kPi * kPi), 1e-15);
  for (int n : {4, 5, 6}) {
    for (const auto& c : hd::limit_constants(n)) EXPECT_LE(c.max_relative_deviation, 1e-4) << n;
  }
  EXPECT_THROW(hd::limit_constant(hd::LimitKind::Second, 3), kleinweyl::UnsupportedDimension);
}
