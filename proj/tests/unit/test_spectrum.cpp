#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/Polynomials>

#include "kleinweyl/coefficients.hpp"
#include "kleinweyl/error.hpp"
#include "kleinweyl/spectrum.hpp"
#include "support.hpp"

namespace sp = kleinweyl::spectrum;
using kleinweyl::harness::ModelKind;
using kwtest::kPi;

namespace {

std::vector<std::complex<double>> pencil_roots(const sp::Pencil& p) {
  return sp::linearization_roots(sp::linearize(p));
}

sp::SpectrumResult discretized(ModelKind kind, int K, int grid = 32) {
  return sp::solve_spectrum(sp::linearize(sp::build_pencil(kwtest::catalog_data(kind, grid), K)));
}

sp::AnalyticModel flat_torus() { return {}; }

sp::AnalyticModel shift_torus() {
  sp::AnalyticModel m;
  m.kind = sp::AnalyticModel::Kind::ShiftTorus;
  m.shift = {0.5, 0.0};
  return m;
}

sp::AnalyticModel sphere(double mass) {
  sp::AnalyticModel m;
  m.kind = sp::AnalyticModel::Kind::Sphere;
  m.periods.clear();
  m.mass = mass;
  return m;
}

/// Coefficients of det(l^2 A + l B + C) from its values on a circle.
Eigen::VectorXd determinant_polynomial(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                       const Eigen::MatrixXd& C) {
  const int degree = 2 * static_cast<int>(A.rows());
  const int samples = degree + 1;
  const double radius = 1.5;
  std::vector<std::complex<double>> values(samples);
  for (int j = 0; j < samples; ++j) {
    const std::complex<double> z = std::polar(radius, 2 * kPi * j / samples);
    const Eigen::MatrixXcd P = z * z * A.cast<std::complex<double>>() +
                               z * B.cast<std::complex<double>>() + C.cast<std::complex<double>>();
    values[j] = P.determinant();
  }
  Eigen::VectorXd coeffs(samples);
  for (int k = 0; k < samples; ++k) {
    std::complex<double> c = 0.0;
    for (int j = 0; j < samples; ++j) c += values[j] * std::polar(1.0, -2 * kPi * j * k / samples);
    coeffs[k] = (c / static_cast<double>(samples)).real() / std::pow(radius, k);
  }
  return coeffs;
}

}  // namespace

TEST(Pencil, ScalarPencils) {
  auto roots = pencil_roots(sp::Pencil::from_complex(Eigen::MatrixXcd::Constant(1, 1, 1.0),
                                                     Eigen::MatrixXcd::Zero(1, 1),
                                                     Eigen::MatrixXcd::Constant(1, 1, -1.0)));
  ASSERT_EQ(roots.size(), 2u);
  std::sort(roots.begin(), roots.end(), [](auto a, auto b) { return a.real() < b.real(); });
  EXPECT_NEAR(std::abs(roots[0] + 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(roots[1] - 1.0), 0.0, 1e-14);

  // constant shift w = 0.5 along k = (1, 0)
  roots = pencil_roots(sp::Pencil::from_complex(Eigen::MatrixXcd::Constant(1, 1, 1.0),
                                                Eigen::MatrixXcd::Constant(1, 1, 1.0),
                                                Eigen::MatrixXcd::Constant(1, 1, -0.75)));
  std::sort(roots.begin(), roots.end(), [](auto a, auto b) { return a.real() < b.real(); });
  EXPECT_NEAR(std::abs(roots[0] + 1.5), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(roots[1] - 0.5), 0.0, 1e-14);
}

TEST(Pencil, RandomPencilsMatchDeterminantRoots) {
  std::mt19937 rng(7);
  std::normal_distribution<double> normal;
  auto random = [&](int m) {
    Eigen::MatrixXd M(m, m);
    for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = normal(rng);
    return M;
  };
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(5, 5) + 0.2 * random(5);
    const Eigen::MatrixXd B = random(5);
    const Eigen::MatrixXd C = random(5);
    const auto roots = pencil_roots(sp::Pencil::from_complex(A.cast<std::complex<double>>(),
                                                             B.cast<std::complex<double>>(),
                                                             C.cast<std::complex<double>>()));
    ASSERT_EQ(roots.size(), 10u);
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
    solver.compute(determinant_polynomial(A, B, C));
    for (Eigen::Index r = 0; r < solver.roots().size(); ++r) {
      const std::complex<double> want = solver.roots()[r];
      double best = 1e300;
      for (const auto& got : roots) best = std::min(best, std::abs(got - want));
      EXPECT_LE(best, 1e-8 * std::max(1.0, std::abs(want))) << "trial " << trial;
    }
  }
}

TEST(Pencil, RejectsTruncationBeyondGrid) {
  const auto data = kwtest::catalog_data(ModelKind::LapseTorus, 16);
  EXPECT_NO_THROW(sp::build_pencil(data, 8));
  EXPECT_THROW(sp::build_pencil(data, 9), kleinweyl::Error);
}

TEST(Pencil, StructureDiagnostics) {
  const auto p = sp::build_pencil(kwtest::catalog_data(ModelKind::GenericTorus, 32), 6);
  EXPECT_TRUE(p.real_structure);
  EXPECT_EQ(p.m, 13 * 13);
  const auto d = sp::pencil_diagnostics(p);
  EXPECT_LT(d.a_max, 0.0);
  EXPECT_LE(d.b_asymmetry, 1e-12);
  EXPECT_LE(d.c_asymmetry, 1e-12);
}

TEST(Spectrum, FlatTorusCollocationIsExact) {
  const auto spec = discretized(ModelKind::FlatTorusUltrastatic, 8);
  std::vector<double> want;
  for (int i = -8; i <= 8; ++i) {
    for (int j = -8; j <= 8; ++j) {
      if (i == 0 && j == 0) continue;
      want.push_back(std::hypot(i, j));
      want.push_back(-std::hypot(i, j));
    }
  }
  std::sort(want.begin(), want.end());
  ASSERT_EQ(spec.lambdas.size(), want.size());
  EXPECT_EQ(spec.near_zero.size(), 2u);
  EXPECT_TRUE(spec.discarded_complex.empty());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(spec.lambdas[i], want[i], 1e-9);
  EXPECT_DOUBLE_EQ(spec.lambda_cut, 4.0);
  EXPECT_NEAR(sp::t_floor(spec), std::log(1e8) / 16.0, 1e-15);
}

TEST(Spectrum, LapseTorusIsReal) {
  const auto spec = discretized(ModelKind::LapseTorus, 8);
  EXPECT_TRUE(spec.discarded_complex.empty());
  EXPECT_EQ(spec.near_zero.size(), 2u);
  EXPECT_EQ(spec.total_count(), 2u * 17 * 17);
  EXPECT_LE(*std::max_element(spec.im_residual.begin(), spec.im_residual.end()), 1e-6);
}

TEST(Spectrum, ShiftTorusDiscretizedMatchesClosedForm) {
  const auto spec = discretized(ModelKind::ShiftTorus, 6);
  const auto exact = sp::analytic_spectrum(shift_torus(), 100.0);
  std::vector<double> want;
  for (int i = -6; i <= 6; ++i) {
    for (int j = -6; j <= 6; ++j) {
      if (i == 0 && j == 0) continue;
      want.push_back(-0.5 * i + std::hypot(i, j));
      want.push_back(-0.5 * i - std::hypot(i, j));
    }
  }
  std::sort(want.begin(), want.end());
  ASSERT_EQ(spec.lambdas.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(spec.lambdas[i], want[i], 1e-9);
  EXPECT_TRUE(std::binary_search(exact.lambdas.begin(), exact.lambdas.end(), 0.5,
                                 [](double a, double b) { return a < b - 1e-12; }));
}

TEST(AnalyticSpectrum, ShiftTorusUnitMode) {
  const auto spec = sp::analytic_spectrum(shift_torus(), 3.0);
  auto count = [&](double v) {
    return std::count_if(spec.lambdas.begin(), spec.lambdas.end(),
                         [&](double l) { return std::abs(l - v) < 1e-12; });
  };
  // k = (1, 0) gives 0.5 and -1.5; k = (-1, 0) gives 1.5 and -0.5
  EXPECT_GE(count(0.5), 1);
  EXPECT_GE(count(-1.5), 1);
  EXPECT_EQ(spec.near_zero.size(), 2u);
}

TEST(AnalyticSpectrum, SphereMultiplicities) {
  const auto spec = sp::analytic_spectrum(sphere(0.0), 3.0);
  const auto at = [&](double v) {
    return std::count_if(spec.lambdas.begin(), spec.lambdas.end(),
                         [&](double l) { return std::abs(l - v) < 1e-12; });
  };
  EXPECT_EQ(at(std::sqrt(2.0)), 3);
  EXPECT_EQ(at(-std::sqrt(2.0)), 3);
  EXPECT_EQ(at(std::sqrt(6.0)), 5);
}

TEST(CountingFunction, FlatAndShiftTori) {
  const auto flat = sp::analytic_spectrum(flat_torus(), 10.0);
  EXPECT_EQ(sp::counting_function(flat, 5.0), 80u);
  EXPECT_EQ(sp::counting_function(flat, 0.5), 0u);
  EXPECT_THROW(sp::counting_function(flat, 11.0), kleinweyl::DomainError);

  const auto shift = sp::analytic_spectrum(shift_torus(), 45.0);
  EXPECT_NEAR(static_cast<double>(sp::counting_function(shift, 40.0)), 7738.0, 0.03 * 7738.0);
}

TEST(HeatTrace, FlatTorusTheta) {
  const auto spec = sp::analytic_spectrum(flat_torus(), 80.0);
  for (double t : {0.01, 0.1, 1.0}) {
    double theta = 0.0;
    for (int k = -100; k <= 100; ++k) theta += std::exp(-t * k * k);
    EXPECT_NEAR(sp::heat_trace(spec, t), 2 * theta * theta, 1e-10 * theta * theta);
  }
  EXPECT_NEAR(sp::heat_trace(spec, 0.01), 2 * kPi / 0.01, 0.01 * 2 * kPi / 0.01);
  EXPECT_NEAR(sp::heat_trace(spec, 1.0, false), sp::heat_trace(spec, 1.0) - 2.0, 1e-14);
}

TEST(HeatTrace, SphereLargeTime) {
  const auto spec = sp::analytic_spectrum(sphere(1.0), 20.0);
  const double t = 5.0;
  EXPECT_NEAR(sp::heat_trace(spec, t), 2 * std::exp(-t) + 6 * std::exp(-3 * t), 1e-12);
}

TEST(HeatFit, FlatTorus) {
  const auto fit = sp::fit_heat_expansion(sp::analytic_spectrum(flat_torus(), 80.0), 3, 0.005, 0.2);
  EXPECT_NEAR(fit.a0, 2 * kPi, 1e-6 * 2 * kPi);
  EXPECT_NEAR(fit.a1, 0.0, 1e-5);
  EXPECT_NEAR(fit.a_half, 0.0, 1e-5);
}

TEST(HeatFit, Sphere) {
  const auto fit = sp::fit_heat_expansion(sp::analytic_spectrum(sphere(0.0), 80.0), 3, 0.01, 0.2);
  const auto want = kleinweyl::harness::sphere_heat_coefficients(0.0);
  EXPECT_NEAR(fit.a0, want[0], 1e-3 * want[0]);
  EXPECT_NEAR(fit.a1, want[1], 1e-2 * want[1]);
}

TEST(HeatFit, DiscretizedLapseTorus) {
  const auto data = kwtest::catalog_data(ModelKind::LapseTorus, 32);
  const auto spec = sp::solve_spectrum(sp::linearize(sp::build_pencil(data, 12)));
  const auto g = kleinweyl::geometry::analyze(data);
  const auto want = kleinweyl::coefficients::heat_coefficients(data, g.curv, g.killing);
  const auto fit = sp::fit_heat_expansion(spec, 3, sp::t_floor(spec), 0.7);
  EXPECT_NEAR(fit.a0, want.a0, 1e-2 * want.a0);
}

TEST(WeylCheck, AnalyticTori) {
  const auto flat = sp::weyl_check(sp::analytic_spectrum(flat_torus(), 80.0), 3, kPi, 30.0, 80.0);
  EXPECT_LE(flat.relative_error, 0.02);
  EXPECT_NEAR(flat.fitted, kPi, 0.02 * kPi);
  const auto shift_data = kwtest::catalog_data(ModelKind::ShiftTorus, 16);
  const auto shift = sp::weyl_check(sp::analytic_spectrum(shift_torus(), 80.0), shift_data, 30.0, 80.0);
  EXPECT_NEAR(shift.predicted, 190.953 / (4 * kPi * kPi), 1e-4);
  EXPECT_LE(shift.relative_error, 0.03);
}

TEST(ZetaResidue, FlatTorusEstimate) {
  const auto est = sp::zeta_residue_estimate(sp::analytic_spectrum(flat_torus(), 200.0), 3, 200.0);
  EXPECT_DOUBLE_EQ(est.s, 1.0);
  EXPECT_NEAR(est.residue, 2 * kPi, 0.01 * 2 * kPi);
}
