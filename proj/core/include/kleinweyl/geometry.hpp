#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kleinweyl/chart.hpp"

/// Chart-based geometry of stationary spacetimes g = -N^2 dt^2 + h(dx + w dt, dx + w dt).
///
/// Index convention: spacetime index 0 is t, 1..d are the chart axes, and the
/// signature is (-, +, ..., +). All fields are t-independent, so every
/// t-derivative vanishes identically.
namespace kleinweyl::geometry {

/// Lapse N, shift w^j, spatial metric h_jk and potential W on a periodic chart.
class StationaryData {
 public:
  /// Validates that h is positive definite and N^2 - |w|_h^2 > 0 everywhere;
  /// throws DomainError naming the worst grid point otherwise.
  StationaryData(PeriodicChart chart, Field lapse, Field shift, Field spatial_metric,
                 Field potential);

  const PeriodicChart& chart() const noexcept { return chart_; }
  int dim() const noexcept { return chart_.dim(); }
  int spacetime_dim() const noexcept { return chart_.dim() + 1; }
  const Field& lapse() const noexcept { return lapse_; }
  const Field& shift() const noexcept { return shift_; }
  const Field& spatial_metric() const noexcept { return h_; }
  const Field& potential() const noexcept { return potential_; }

  /// N^2 - h_jk w^j w^k.
  Eigen::ArrayXd killing_norm_squared() const;
  Eigen::ArrayXd sqrt_det_h() const;
  Eigen::ArrayXd det_h() const;

 private:
  PeriodicChart chart_;
  Field lapse_;
  Field shift_;
  Field h_;
  Field potential_;
};

struct SpacetimeMetric {
  PeriodicChart chart;
  Field g;      ///< Sym2, extent n
  Field g_inv;  ///< Sym2, extent n
  Field sqrt_abs_det;

  int n() const noexcept { return g.extent(); }
  /// Pointwise g(a, b) for spacetime vector fields a, b.
  Eigen::ArrayXd dot(const Field& a, const Field& b) const;
};

/// Christoffel symbols, Riemann, Ricci and scalar curvature on the grid.
struct CurvaturePack {
  int n = 0;
  /// Gamma^l_{mk}, index l*n*n + m*n + k.
  std::vector<Eigen::ArrayXd> christoffel;
  /// R^r_{s m k} = d_m Gamma^r_{ks} - d_k Gamma^r_{ms} + ..., index ((r*n + s)*n + m)*n + k.
  std::vector<Eigen::ArrayXd> riemann;
  Field ricci;
  Field scal;

  const Eigen::ArrayXd& gamma(int l, int m, int k) const { return christoffel[(l * n + m) * n + k]; }
  const Eigen::ArrayXd& riem(int r, int s, int m, int k) const {
    return riemann[((r * n + s) * n + m) * n + k];
  }
  bool has_curvature() const noexcept { return !riemann.empty(); }
};

/// Killing-field data for Z = d/dt.
struct KillingPack {
  Field zsq;          ///< |Z|^2 = N^2 - |w|_h^2
  Field nu;           ///< future unit normal, nu^0 > 0
  Field nabla_zz;     ///< nabla_Z Z
  Field nabla_zzz;    ///< nabla_Z nabla_Z Z
  Field ric_zz;       ///< Ric(Z, Z)
  Field ric_nuz;      ///< Ric(nu, Z)
  Field theta_gamma;  ///< gamma_j = -|Z|^{-2} h_jk w^k, so theta = dt + gamma

  // Contractions used by the coefficient densities.
  Field accel_norm2;  ///< g(nabla_Z Z, nabla_Z Z)
  Field accel_nu;     ///< g(nabla_Z Z, nu)
  Field jerk_nu;      ///< g(nabla_Z^2 Z, nu)
};

struct ConformalPack {
  Field ric_tilde_znu;  ///< Ric~(Z, nu) for g~ = |Z|^{-2} g
  Field scal_tilde;     ///< scalar curvature of g~
};

SpacetimeMetric assemble_spacetime_metric(const StationaryData& data);

/// Christoffel symbols only; Riemann/Ricci are left empty.
CurvaturePack christoffel(const SpacetimeMetric& metric);
CurvaturePack curvature(const SpacetimeMetric& metric);

KillingPack killing_quantities(const StationaryData& data, const SpacetimeMetric& metric,
                               const CurvaturePack& curv);

/// max over grid and index pairs of |nabla_m Z_k + nabla_k Z_m|.
double killing_equation_residual(const StationaryData& data);
double killing_equation_residual(const SpacetimeMetric& metric, const CurvaturePack& curv);

/// Box f = -|g|^{-1/2} d_m (|g|^{1/2} g^{mk} d_k f) for t-independent f.
Field dalembert_scalar(const SpacetimeMetric& metric, const Field& f);

ConformalPack conformal_pack(const StationaryData& data, const SpacetimeMetric& metric,
                             const CurvaturePack& curv, const KillingPack& kp);

/// (Hess phi)(Z, nu) for phi = -log|Z|.
Field hessian_phi_z_nu(const SpacetimeMetric& metric, const CurvaturePack& curv,
                       const KillingPack& kp);

/// Identity residuals, all max-abs over the grid.
struct CurvatureDiagnostics {
  double christoffel_symmetry = 0.0;
  double riemann_antisymmetry = 0.0;  ///< relative to max |R|
  double first_bianchi = 0.0;         ///< relative to max |R|
  double ricci_symmetry = 0.0;
  double metric_inverse = 0.0;        ///< |g g^{-1} - 1|
  double det_identity = 0.0;          ///< |N^2 det h + det g|
};
CurvatureDiagnostics curvature_diagnostics(const StationaryData& data,
                                           const SpacetimeMetric& metric,
                                           const CurvaturePack& curv);

/// Everything computed from one StationaryData.
struct Geometry {
  SpacetimeMetric metric;
  CurvaturePack curv;
  KillingPack killing;
};
Geometry analyze(const StationaryData& data);

/// Reads (N, w, h) back from the spacetime metric components.
struct LapseShift {
  Field lapse;
  Field shift;
  Field spatial_metric;
};
LapseShift split_lapse_shift(const SpacetimeMetric& metric);

}  // namespace kleinweyl::geometry
