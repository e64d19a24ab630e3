#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "kleinweyl/catalog.hpp"
#include "kleinweyl/geometry.hpp"

namespace kwtest {

inline constexpr double kPi = std::numbers::pi;

inline kleinweyl::PeriodicChart square_chart(int n, double period = 2.0 * kPi) {
  return kleinweyl::PeriodicChart({n, n}, {period, period});
}

/// Scalar field sampled from f(x, y).
inline kleinweyl::Field sampled(const kleinweyl::PeriodicChart& chart,
                                const std::function<double(double, double)>& f) {
  kleinweyl::Field out = kleinweyl::Field::scalar(chart);
  for (std::size_t p = 0; p < chart.point_count(); ++p) {
    out.values()[static_cast<Eigen::Index>(p)] = f(chart.coordinate(p, 0), chart.coordinate(p, 1));
  }
  return out;
}

/// Two-dimensional data from closed-form N, w^1, w^2, conformal factor c (h = c delta) and W.
struct Closed {
  std::function<double(double, double)> N = [](double, double) { return 1.0; };
  std::function<double(double, double)> w1 = [](double, double) { return 0.0; };
  std::function<double(double, double)> w2 = [](double, double) { return 0.0; };
  std::function<double(double, double)> c = [](double, double) { return 1.0; };
  std::function<double(double, double)> W = [](double, double) { return 0.0; };
};

inline kleinweyl::geometry::StationaryData closed_data(const Closed& m, int n = 32) {
  const auto chart = square_chart(n);
  kleinweyl::Field shift = kleinweyl::Field::vector(chart, 2);
  shift[0] = sampled(chart, m.w1).values();
  shift[1] = sampled(chart, m.w2).values();
  kleinweyl::Field h = kleinweyl::Field::sym2(chart, 2);
  h(0, 0) = sampled(chart, m.c).values();
  h(1, 1) = h(0, 0);
  h(0, 1) = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(chart.point_count()));
  return {chart, sampled(chart, m.N), std::move(shift), std::move(h), sampled(chart, m.W)};
}

inline kleinweyl::geometry::StationaryData catalog_data(kleinweyl::harness::ModelKind kind,
                                                        int n = 64) {
  return *kleinweyl::harness::build_model(kleinweyl::harness::default_model(kind), {n, n}).data;
}

inline double max_abs(const Eigen::ArrayXd& a) { return a.abs().maxCoeff(); }

}  // namespace kwtest
