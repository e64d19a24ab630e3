#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kleinweyl/fit.hpp"
#include "kleinweyl/geometry.hpp"
#include "kleinweyl/spectral.hpp"

/// Geodesics of a stationary spacetime and the local near-diagonal data built
/// from them: world function, volume distortion, and the diagonal Taylor
/// coefficients along Killing orbits.
namespace kleinweyl::hadamard {

/// Metric and Christoffel symbols evaluated off the grid by trigonometric
/// interpolation. Positions are spacetime points (t, x^1..x^d); t is ignored.
class InterpolatedMetric {
 public:
  InterpolatedMetric() = default;
  InterpolatedMetric(const geometry::SpacetimeMetric& metric, const geometry::CurvaturePack& curv);
  explicit InterpolatedMetric(const geometry::StationaryData& data);

  int n() const noexcept { return n_; }
  int dim() const noexcept { return n_ - 1; }

  Eigen::MatrixXd metric_at(std::span<const double> x) const;
  /// gamma[(l*n + m)*n + k] = Gamma^l_{mk}(x). When `dgamma` is non-empty it
  /// receives d_a Gamma^l_{mk} at index ((l*n + m)*n + k)*d + a for spatial a.
  void christoffel_at(std::span<const double> x, std::span<double> gamma,
                      std::span<double> dgamma = {}) const;

 private:
  int n_ = 0;
  TrigInterpolant metric_;
  TrigInterpolant gamma_;  // lower pair stored as upper triangle
};

struct GeodesicState {
  std::vector<double> position;
  std::vector<double> velocity;
  double s = 0.0;
};

struct IntegrationOptions {
  double abs_tol = 1e-14;
  double rel_tol = 1e-14;
  /// Integration fails once the accepted step drops below this fraction of s_max.
  double min_step_fraction = 1e-12;
  int max_steps = 100000;
};

/// Geodesic together with its Jacobi matrix J = d x(s) / d v0 and J'.
struct JacobiState {
  GeodesicState geodesic;
  Eigen::MatrixXd jacobi;       ///< J(s), J(0) = 0, J'(0) = identity
  Eigen::MatrixXd jacobi_rate;  ///< J'(s)
  int steps = 0;
  double energy_drift = 0.0;  ///< |g(v,v)(s) - g(v,v)(0)| / |g(v,v)(0)|
};

/// Solves x'' + Gamma(x)(x', x') = 0 from (x0, v0) to s_max with an adaptive
/// Runge-Kutta-Fehlberg 7(8) stepper. `steps` sets the initial step s_max/steps.
GeodesicState integrate_geodesic(const InterpolatedMetric& metric, std::span<const double> x0,
                                 std::span<const double> v0, double s_max, int steps = 16,
                                 const IntegrationOptions& options = {});

JacobiState integrate_with_jacobi(const InterpolatedMetric& metric, std::span<const double> x0,
                                  std::span<const double> v0, double s_max = 1.0, int steps = 16,
                                  const IntegrationOptions& options = {});

/// Relative drift of g(x', x') between the endpoints of a geodesic.
double energy_drift(const InterpolatedMetric& metric, const GeodesicState& start,
                    const GeodesicState& end);

struct ShootingOptions {
  double tolerance = 1e-10;
  int max_iterations = 30;
  IntegrationOptions integration;
};

struct ShootingResult {
  std::vector<double> velocity;  ///< v with exp_{x_base}(v) = x
  double residual = 0.0;         ///< terminal position error, max norm
  int iterations = 0;
  Eigen::MatrixXd jacobi;        ///< d exp at v, from the final integration
  double energy_drift = 0.0;
};

/// Newton iteration on v -> exp_{x_base}(v) - x with the Jacobi matrix as the
/// derivative. After reaching the tolerance, iterates continue while the
/// residual keeps shrinking so downstream finite differences see a smooth map.
ShootingResult shoot_connect(const InterpolatedMetric& metric, std::span<const double> x,
                             std::span<const double> x_base, const ShootingOptions& options = {});

/// -g(v, v) at x_base for v = exp_{x_base}^{-1}(x).
double world_function(const InterpolatedMetric& metric, std::span<const double> x,
                      std::span<const double> x_base, const ShootingOptions& options = {});

/// |det d exp_{x_base}(v)| between g-orthonormal frames at both endpoints.
double volume_distortion(const InterpolatedMetric& metric, std::span<const double> x_base,
                         std::span<const double> v, const IntegrationOptions& options = {});

/// Samples of a quantity along t with a weighted power fit.
struct ExpansionFit {
  std::string quantity;
  std::vector<double> t;
  std::vector<double> values;
  PowerFit fit;
  std::vector<double> predicted;  ///< prediction per fitted power (NaN for guard powers)
  std::vector<bool> asserted;     ///< false for guard powers
};

struct ExpansionOptions {
  double fd_step = 1e-4;        ///< central-difference step along nu
  double weight_exponent = -2;  ///< residual weights t^{weight_exponent}
  ShootingOptions shooting;
};

/// Per power |fitted - predicted| / max(|predicted|, floor * max_j |predicted_j|),
/// NaN for guard powers. The floor gives predictions that vanish (e.g. the
/// t^2 term of the normal derivative when the acceleration is spatial) a
/// scale taken from the same expansion.
std::vector<double> coefficient_errors(const ExpansionFit& fit, double floor = 1e-3);

/// Fit results for the diagonal translate x = (t, y), x' = (0, y).
struct DiagonalExpansion {
  std::size_t point = 0;
  ExpansionFit gamma;      ///< powers 2, 4; guard 6
  ExpansionFit dnu_gamma;  ///< powers 1, 2, 3; guards 4, 5
  ExpansionFit v0;         ///< powers 0, 2; guard 4
  bool complete = true;    ///< false if any sample failed to shoot
  std::vector<std::string> failures;
  /// V0 at each t from the direct integration and from the shooting Jacobian.
  double v0_consistency = 0.0;
};

/// Precomputed geometry and interpolants for repeated expansion runs.
class LocalModel {
 public:
  explicit LocalModel(const geometry::StationaryData& data);

  const geometry::StationaryData& data() const noexcept { return data_; }
  const geometry::Geometry& geometry() const noexcept { return geometry_; }
  const InterpolatedMetric& metric() const noexcept { return metric_; }

 private:
  geometry::StationaryData data_;
  geometry::Geometry geometry_;
  InterpolatedMetric metric_;
};

/// Default abscissae: 12 log-spaced values in [1e-3, 0.2].
std::vector<double> default_t_samples();

DiagonalExpansion diagonal_expansions(const LocalModel& model, std::size_t point,
                                      std::span<const double> t_samples,
                                      const ExpansionOptions& options = {});

/// scal/6 - W on the grid.
Field v1_diagonal(const geometry::StationaryData& data, const geometry::CurvaturePack& curv);

/// 2^{-n-2 beta} pi^{(2-n)/2} / ((beta + (n-2)/2)! beta!), zero at Gamma poles.
double riesz_constant(double beta, int n);

enum class LimitKind { First, Second, Third };

struct LimitConstant {
  LimitKind kind = LimitKind::First;
  int n = 0;
  double closed_form = 0.0;
  std::array<double, 2> epsilons{1e-5, 1e-6};
  std::array<double, 2> numeric{};
  double max_relative_deviation = 0.0;
};

/// The three mu-limit constants of the diagonal trace computation, with the
/// numeric limit evaluated at beta = target + eps. Second and Third carry
/// 1/Gamma(n-3) and throw UnsupportedDimension for n = 3.
LimitConstant limit_constant(LimitKind kind, int n);
std::array<LimitConstant, 3> limit_constants(int n);

}  // namespace kleinweyl::hadamard
