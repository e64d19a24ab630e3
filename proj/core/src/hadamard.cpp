#include "kleinweyl/hadamard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "kleinweyl/error.hpp"
#include "kleinweyl/special.hpp"

namespace kleinweyl::hadamard {
namespace {

using State = std::vector<double>;
namespace odeint = boost::numeric::odeint;

int sym_count(int n) { return n * (n + 1) / 2; }

int sym_slot(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

std::span<const double> spatial(std::span<const double> x) { return x.subspan(1); }

// Right-hand side of the geodesic equation, optionally with the variational
// equations for J = dx/dv0 appended as column-major n x n blocks.
class GeodesicSystem {
 public:
  GeodesicSystem(const InterpolatedMetric& metric, bool with_jacobi)
      : metric_(metric), n_(metric.n()), jacobi_(with_jacobi) {
    const auto nn = static_cast<std::size_t>(n_ * n_ * n_);
    gamma_.resize(nn);
    if (jacobi_) dgamma_.resize(nn * static_cast<std::size_t>(n_ - 1));
  }

  void operator()(const State& y, State& dy, double /*s*/) {
    const int n = n_;
    const int d = n - 1;
    metric_.christoffel_at(std::span<const double>(y.data(), n), gamma_,
                           jacobi_ ? std::span<double>(dgamma_) : std::span<double>());
    const double* v = y.data() + n;
    for (int l = 0; l < n; ++l) {
      dy[l] = v[l];
      double acc = 0.0;
      for (int m = 0; m < n; ++m) {
        for (int k = 0; k < n; ++k) acc += gamma_[(l * n + m) * n + k] * v[m] * v[k];
      }
      dy[n + l] = -acc;
    }
    if (!jacobi_) return;
    const double* J = y.data() + 2 * n;
    const double* Jp = J + n * n;
    double* dJ = dy.data() + 2 * n;
    double* dJp = dJ + n * n;
    for (int c = 0; c < n; ++c) {
      for (int l = 0; l < n; ++l) {
        dJ[c * n + l] = Jp[c * n + l];
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
          for (int k = 0; k < n; ++k) {
            const int idx = (l * n + m) * n + k;
            double dg = 0.0;
            for (int a = 0; a < d; ++a) dg += dgamma_[idx * d + a] * J[c * n + a + 1];
            acc += dg * v[m] * v[k] + 2.0 * gamma_[idx] * v[m] * Jp[c * n + k];
          }
        }
        dJp[c * n + l] = -acc;
      }
    }
  }

 private:
  const InterpolatedMetric& metric_;
  int n_;
  bool jacobi_;
  std::vector<double> gamma_;
  std::vector<double> dgamma_;
};

int integrate(GeodesicSystem& system, State& y, double s_max, int steps,
              const IntegrationOptions& opt) {
  if (!(s_max > 0.0)) throw DomainError("integrate_geodesic: s_max must be positive");
  auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(opt.abs_tol,
                                                                                opt.rel_tol);
  double s = 0.0;
  double ds = s_max / std::max(1, steps);
  const double min_step = opt.min_step_fraction * s_max;
  int accepted = 0;
  int attempts = 0;
  while (s < s_max) {
    if (s + ds > s_max) ds = s_max - s;
    const double requested = ds;
    const auto result = stepper.try_step(std::ref(system), y, s, ds);
    if (++attempts > opt.max_steps) {
      throw NumericalError("integrate_geodesic: step budget exhausted at s = " + std::to_string(s));
    }
    if (result == odeint::success) {
      ++accepted;
      for (double c : y) {
        if (!std::isfinite(c)) throw NumericalError("integrate_geodesic: non-finite state");
      }
      continue;
    }
    if (ds < min_step && s_max - s > min_step) {
      std::ostringstream os;
      os << "integrate_geodesic: step-size underflow at s = " << s << " (last step " << requested
         << ", minimum " << min_step << ")";
      throw NumericalError(os.str());
    }
  }
  return accepted;
}

double quadratic(const Eigen::MatrixXd& g, std::span<const double> v) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) acc += g(i, j) * v[i] * v[j];
  }
  return acc;
}

void check_point(const InterpolatedMetric& metric, std::span<const double> x, const char* what) {
  if (static_cast<int>(x.size()) != metric.n()) {
    throw DomainError(std::string(what) + ": expected " + std::to_string(metric.n()) +
                      " spacetime coordinates");
  }
}

}  // namespace

InterpolatedMetric::InterpolatedMetric(const geometry::SpacetimeMetric& metric,
                                       const geometry::CurvaturePack& curv)
    : n_(metric.n()) {
  const int n = n_;
  std::vector<Eigen::ArrayXd> gcomp;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) gcomp.push_back(metric.g(i, j));
  }
  metric_ = TrigInterpolant(metric.chart, gcomp, 1e-16);
  std::vector<Eigen::ArrayXd> comps;
  for (int l = 0; l < n; ++l) {
    for (int m = 0; m < n; ++m) {
      for (int k = m; k < n; ++k) comps.push_back(curv.gamma(l, m, k));
    }
  }
  gamma_ = TrigInterpolant(metric.chart, comps, 1e-16);
}

InterpolatedMetric::InterpolatedMetric(const geometry::StationaryData& data) {
  const auto metric = geometry::assemble_spacetime_metric(data);
  *this = InterpolatedMetric(metric, geometry::christoffel(metric));
}

Eigen::MatrixXd InterpolatedMetric::metric_at(std::span<const double> x) const {
  const int n = n_;
  std::vector<double> vals(static_cast<std::size_t>(sym_count(n)));
  metric_.evaluate(spatial(x), vals);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) g(i, j) = g(j, i) = vals[sym_slot(n, i, j)];
  }
  return g;
}

void InterpolatedMetric::christoffel_at(std::span<const double> x, std::span<double> gamma,
                                        std::span<double> dgamma) const {
  const int n = n_;
  const int d = n - 1;
  const int per_l = sym_count(n);
  thread_local std::vector<double> vals, grads;
  vals.resize(static_cast<std::size_t>(n * per_l));
  grads.resize(dgamma.empty() ? 0 : vals.size() * static_cast<std::size_t>(d));
  gamma_.evaluate(spatial(x), vals, grads);
  for (int l = 0; l < n; ++l) {
    for (int m = 0; m < n; ++m) {
      for (int k = 0; k < n; ++k) {
        const int src = l * per_l + sym_slot(n, m, k);
        const int dst = (l * n + m) * n + k;
        gamma[dst] = vals[src];
        if (!dgamma.empty()) {
          for (int a = 0; a < d; ++a) dgamma[dst * d + a] = grads[src * d + a];
        }
      }
    }
  }
}

GeodesicState integrate_geodesic(const InterpolatedMetric& metric, std::span<const double> x0,
                                 std::span<const double> v0, double s_max, int steps,
                                 const IntegrationOptions& options) {
  check_point(metric, x0, "integrate_geodesic");
  check_point(metric, v0, "integrate_geodesic");
  if (std::all_of(v0.begin(), v0.end(), [](double c) { return c == 0.0; })) {
    throw DomainError("integrate_geodesic: zero initial velocity");
  }
  const int n = metric.n();
  State y(2 * n);
  std::copy(x0.begin(), x0.end(), y.begin());
  std::copy(v0.begin(), v0.end(), y.begin() + n);
  GeodesicSystem system(metric, false);
  integrate(system, y, s_max, steps, options);
  return {State(y.begin(), y.begin() + n), State(y.begin() + n, y.end()), s_max};
}

JacobiState integrate_with_jacobi(const InterpolatedMetric& metric, std::span<const double> x0,
                                  std::span<const double> v0, double s_max, int steps,
                                  const IntegrationOptions& options) {
  check_point(metric, x0, "integrate_with_jacobi");
  check_point(metric, v0, "integrate_with_jacobi");
  const int n = metric.n();
  State y(static_cast<std::size_t>(2 * n + 2 * n * n), 0.0);
  std::copy(x0.begin(), x0.end(), y.begin());
  std::copy(v0.begin(), v0.end(), y.begin() + n);
  for (int c = 0; c < n; ++c) y[2 * n + n * n + c * n + c] = 1.0;
  GeodesicSystem system(metric, true);
  JacobiState out;
  out.steps = integrate(system, y, s_max, steps, options);
  out.geodesic = {State(y.begin(), y.begin() + n), State(y.begin() + n, y.begin() + 2 * n), s_max};
  out.jacobi = Eigen::Map<const Eigen::MatrixXd>(y.data() + 2 * n, n, n);
  out.jacobi_rate = Eigen::Map<const Eigen::MatrixXd>(y.data() + 2 * n + n * n, n, n);
  const GeodesicState start{State(x0.begin(), x0.end()), State(v0.begin(), v0.end()), 0.0};
  out.energy_drift = energy_drift(metric, start, out.geodesic);
  return out;
}

double energy_drift(const InterpolatedMetric& metric, const GeodesicState& start,
                    const GeodesicState& end) {
  const double e0 = quadratic(metric.metric_at(start.position), start.velocity);
  const double e1 = quadratic(metric.metric_at(end.position), end.velocity);
  const double scale = std::abs(e0) > 0.0 ? std::abs(e0) : 1.0;
  return std::abs(e1 - e0) / scale;
}

ShootingResult shoot_connect(const InterpolatedMetric& metric, std::span<const double> x,
                             std::span<const double> x_base, const ShootingOptions& options) {
  check_point(metric, x, "shoot_connect");
  check_point(metric, x_base, "shoot_connect");
  const int n = metric.n();
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = x[i] - x_base[i];
  ShootingResult best;
  best.residual = std::numeric_limits<double>::infinity();
  if (v.cwiseAbs().maxCoeff() == 0.0) {
    best.velocity.assign(n, 0.0);
    best.residual = 0.0;
    best.jacobi = Eigen::MatrixXd::Identity(n, n);
    return best;
  }
  bool converged = false;
  int polish = 0;
  for (int it = 1;; ++it) {
    const auto js = integrate_with_jacobi(metric, x_base, std::span<const double>(v.data(), n), 1.0,
                                          16, options.integration);
    Eigen::VectorXd F(n);
    for (int i = 0; i < n; ++i) F[i] = js.geodesic.position[i] - x[i];
    const double r = F.cwiseAbs().maxCoeff();
    if (r < best.residual) {
      best.velocity.assign(v.data(), v.data() + n);
      best.residual = r;
      best.iterations = it;
      best.jacobi = js.jacobi;
      best.energy_drift = js.energy_drift;
    } else if (converged) {
      break;
    }
    if (r <= options.tolerance) {
      converged = true;
      if (r == 0.0 || ++polish > 2) break;
    }
    if (it >= options.max_iterations) {
      if (converged) break;
      std::ostringstream os;
      os << "shoot_connect: no convergence after " << it << " iterations (residual "
         << best.residual << ")";
      throw NumericalError(os.str());
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(js.jacobi);
    v -= lu.solve(F);
    if (!v.allFinite()) throw NumericalError("shoot_connect: singular Jacobi matrix");
  }
  return best;
}

double world_function(const InterpolatedMetric& metric, std::span<const double> x,
                      std::span<const double> x_base, const ShootingOptions& options) {
  const auto shot = shoot_connect(metric, x, x_base, options);
  return -quadratic(metric.metric_at(x_base), shot.velocity);
}

double volume_distortion(const InterpolatedMetric& metric, std::span<const double> x_base,
                         std::span<const double> v, const IntegrationOptions& options) {
  if (std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; })) return 1.0;
  const auto js = integrate_with_jacobi(metric, x_base, v, 1.0, 16, options);
  const double g0 = std::abs(metric.metric_at(x_base).determinant());
  const double g1 = std::abs(metric.metric_at(js.geodesic.position).determinant());
  return std::abs(js.jacobi.determinant()) * std::sqrt(g1 / g0);
}

LocalModel::LocalModel(const geometry::StationaryData& data)
    : data_(data),
      geometry_(geometry::analyze(data)),
      metric_(geometry_.metric, geometry_.curv) {}

std::vector<double> default_t_samples() { return log_spaced(1e-3, 0.2, 12); }

DiagonalExpansion diagonal_expansions(const LocalModel& model, std::size_t point,
                                      std::span<const double> t_samples,
                                      const ExpansionOptions& options) {
  const auto& chart = model.data().chart();
  if (point >= chart.point_count()) throw DomainError("diagonal_expansions: point out of range");
  const auto& metric = model.metric();
  const auto& kp = model.geometry().killing;
  const int n = metric.n();
  const auto p = static_cast<Eigen::Index>(point);

  std::vector<double> base(n, 0.0);
  for (int a = 0; a < n - 1; ++a) base[a + 1] = chart.coordinate(point, a);
  std::vector<double> nu(n);
  for (int i = 0; i < n; ++i) nu[i] = kp.nu[i][p];
  const Eigen::MatrixXd g_base = metric.metric_at(base);
  const double h = options.fd_step;

  DiagonalExpansion out;
  out.point = point;
  out.gamma.quantity = "world_function";
  out.dnu_gamma.quantity = "dnu_world_function";
  out.v0.quantity = "v0";
  for (double t : t_samples) {
    try {
      std::vector<double> x = base;
      x[0] = t;
      const auto shot = shoot_connect(metric, x, base, options.shooting);
      const double gamma = -quadratic(g_base, shot.velocity);
      double wf[2];
      for (int side = 0; side < 2; ++side) {
        std::vector<double> xs = x;
        const double sign = side == 0 ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) xs[i] += sign * h * nu[i];
        const auto s = shoot_connect(metric, xs, base, options.shooting);
        wf[side] = -quadratic(g_base, s.velocity);
      }
      const double g1 = std::abs(metric.metric_at(x).determinant());
      const double g0 = std::abs(g_base.determinant());
      const double mu = std::abs(shot.jacobi.determinant()) * std::sqrt(g1 / g0);
      const double mu_direct =
          volume_distortion(metric, base, shot.velocity, options.shooting.integration);
      out.v0_consistency =
          std::max(out.v0_consistency, std::abs(1.0 / std::sqrt(mu) - 1.0 / std::sqrt(mu_direct)));
      out.gamma.t.push_back(t);
      out.gamma.values.push_back(gamma);
      out.dnu_gamma.t.push_back(t);
      out.dnu_gamma.values.push_back((wf[0] - wf[1]) / (2.0 * h));
      out.v0.t.push_back(t);
      out.v0.values.push_back(1.0 / std::sqrt(mu));
    } catch (const NumericalError& e) {
      out.complete = false;
      out.failures.push_back("t = " + std::to_string(t) + ": " + e.what());
    }
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto run_fit = [&](ExpansionFit& f, std::vector<double> powers, std::vector<double> predicted) {
    f.predicted = std::move(predicted);
    f.asserted.resize(f.predicted.size());
    for (std::size_t j = 0; j < f.predicted.size(); ++j) f.asserted[j] = !std::isnan(f.predicted[j]);
    if (f.t.size() < powers.size()) {
      out.complete = false;
      out.failures.push_back(f.quantity + ": too few samples to fit");
      return;
    }
    f.fit = fit_powers(f.t, f.values, powers, options.weight_exponent);
  };
  run_fit(out.gamma, {2, 4, 6}, {kp.zsq.values()[p], -kp.accel_norm2.values()[p] / 12.0, nan});
  run_fit(out.dnu_gamma, {1, 2, 3, 4, 5},
          {2.0 * model.data().lapse().values()[p], -kp.accel_nu.values()[p],
           -kp.jerk_nu.values()[p] / 3.0, nan, nan});
  run_fit(out.v0, {0, 2, 4}, {1.0, kp.ric_zz.values()[p] / 12.0, nan});
  return out;
}

std::vector<double> coefficient_errors(const ExpansionFit& fit, double floor) {
  const std::size_t k = fit.predicted.size();
  std::vector<double> out(k, std::numeric_limits<double>::quiet_NaN());
  if (fit.fit.coefficients.size() != k) return out;
  double scale = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    if (fit.asserted[j]) scale = std::max(scale, std::abs(fit.predicted[j]));
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (!fit.asserted[j]) continue;
    const double denom = std::max(std::abs(fit.predicted[j]), floor * scale);
    out[j] = std::abs(fit.fit.coefficients[j] - fit.predicted[j]) / denom;
  }
  return out;
}

Field v1_diagonal(const geometry::StationaryData& data, const geometry::CurvaturePack& curv) {
  if (!curv.has_curvature()) throw DomainError("v1_diagonal: curvature not computed");
  return Field::scalar(data.chart(), curv.scal.values() / 6.0 - data.potential().values());
}

double riesz_constant(double beta, int n) {
  if (n < 3) throw UnsupportedDimension("riesz_constant: n must be at least 3");
  return std::pow(2.0, -n - 2.0 * beta) * std::pow(std::numbers::pi, 0.5 * (2 - n)) *
         reciprocal_factorial(beta + 0.5 * (n - 2)) * reciprocal_factorial(beta);
}

namespace {

// 2/(2b+n) C(b,n) |s|^{2b+1} written through the reflection formula as a
// multiple of mu_{-2b-1}.
double first_form(double beta, int n) {
  return -riesz_constant(beta, n) * reciprocal_gamma(-2.0 * beta - 1.0) /
         std::sin(std::numbers::pi * beta) * 2.0 / (2.0 * beta + n);
}

// 1/(2b+n) C(b,n) |s|^{2b+3} as a multiple of mu_{-2b-3}.
double second_form(double beta, int n) {
  return riesz_constant(beta, n) * reciprocal_gamma(-2.0 * beta - 3.0) /
         std::sin(std::numbers::pi * beta) / (2.0 * beta + n);
}

}  // namespace

LimitConstant limit_constant(LimitKind kind, int n) {
  if (n < 3) throw UnsupportedDimension("limit_constant: n must be at least 3");
  if (kind != LimitKind::First && n == 3) {
    throw UnsupportedDimension(
        "limit_constant: the second and third constants carry 1/Gamma(n-3) and need n >= 4");
  }
  const double pi = std::numbers::pi;
  const double hn = 0.5 * n;
  LimitConstant out;
  out.kind = kind;
  out.n = n;
  double target = -hn;
  switch (kind) {
    case LimitKind::First:
      out.closed_form = std::pow(pi, -hn) * std::tgamma(hn) / std::tgamma(n - 1.0);
      break;
    case LimitKind::Second:
      out.closed_form = -std::pow(pi, -hn) * std::tgamma(1.0 + hn) / (n * std::tgamma(n - 3.0));
      break;
    case LimitKind::Third:
      out.closed_form = std::pow(pi, -hn) * std::tgamma(hn - 1.0) / (4.0 * std::tgamma(n - 3.0));
      target = 1.0 - hn;
      break;
  }
  for (std::size_t i = 0; i < out.epsilons.size(); ++i) {
    const double beta = target + out.epsilons[i];
    out.numeric[i] = kind == LimitKind::Second ? second_form(beta, n) : first_form(beta, n);
    out.max_relative_deviation =
        std::max(out.max_relative_deviation,
                 std::abs(out.numeric[i] - out.closed_form) / std::abs(out.closed_form));
  }
  return out;
}

std::array<LimitConstant, 3> limit_constants(int n) {
  return {limit_constant(LimitKind::First, n), limit_constant(LimitKind::Second, n),
          limit_constant(LimitKind::Third, n)};
}

}  // namespace kleinweyl::hadamard
