#include "kleinweyl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

#include "kleinweyl/error.hpp"
#include "kleinweyl/parallel.hpp"
#include "kleinweyl/spectral.hpp"

namespace kleinweyl::geometry {
namespace {

using Eigen::ArrayXd;
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

SmallMatrix matrix_at(const Field& sym, Eigen::Index p) {
  const int e = sym.extent();
  SmallMatrix m(e, e);
  for (int i = 0; i < e; ++i) {
    for (int j = i; j < e; ++j) m(i, j) = m(j, i) = sym(i, j)[p];
  }
  return m;
}

std::string describe_point(const PeriodicChart& chart, std::size_t p) {
  std::ostringstream os;
  os << "grid point " << p << " (x = ";
  for (int a = 0; a < chart.dim(); ++a) os << (a ? ", " : "") << chart.coordinate(p, a);
  os << ")";
  return os.str();
}

void check_chart(const PeriodicChart& chart, const Field& f, const char* what) {
  if (!(f.chart() == chart)) throw DomainError(std::string("stationary data: ") + what + " on a different chart");
  if (!f.all_finite()) throw DomainError(std::string("stationary data: ") + what + " has non-finite samples");
}

// d_a of every stored component of `f`, a = 0..d-1 (spatial axes).
std::vector<Field> spatial_gradient(const Field& f) {
  std::vector<Field> out;
  for (int a = 0; a < f.chart().dim(); ++a) out.push_back(spectral_derivative(f, a));
  return out;
}

double max_abs(const ArrayXd& a) { return a.size() ? a.abs().maxCoeff() : 0.0; }

}  // namespace

StationaryData::StationaryData(PeriodicChart chart, Field lapse, Field shift, Field spatial_metric,
                               Field potential)
    : chart_(std::move(chart)),
      lapse_(std::move(lapse)),
      shift_(std::move(shift)),
      h_(std::move(spatial_metric)),
      potential_(std::move(potential)) {
  const int d = chart_.dim();
  if (lapse_.rank() != Rank::Scalar || potential_.rank() != Rank::Scalar) {
    throw DomainError("stationary data: lapse and potential must be scalar fields");
  }
  if (shift_.rank() != Rank::Vector || shift_.extent() != d) {
    throw DomainError("stationary data: shift must be a spatial vector field");
  }
  if (h_.rank() != Rank::Sym2 || h_.extent() != d) {
    throw DomainError("stationary data: spatial metric must be a symmetric spatial 2-tensor");
  }
  check_chart(chart_, lapse_, "lapse");
  check_chart(chart_, shift_, "shift");
  check_chart(chart_, h_, "spatial metric");
  check_chart(chart_, potential_, "potential");

  double worst_eig = std::numeric_limits<double>::infinity();
  std::size_t worst_eig_at = 0;
  for (std::size_t p = 0; p < chart_.point_count(); ++p) {
    Eigen::SelfAdjointEigenSolver<SmallMatrix> es(matrix_at(h_, static_cast<Eigen::Index>(p)),
                                                  Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < worst_eig) {
      worst_eig = lo;
      worst_eig_at = p;
    }
  }
  if (!(worst_eig > 0.0)) {
    throw DomainError("stationary data: spatial metric not positive definite at " +
                      describe_point(chart_, worst_eig_at));
  }
  if (!(lapse_.values() > 0.0).all()) {
    Eigen::Index at = 0;
    lapse_.values().minCoeff(&at);
    throw DomainError("stationary data: lapse not positive at " +
                      describe_point(chart_, static_cast<std::size_t>(at)));
  }
  const ArrayXd zsq = killing_norm_squared();
  Eigen::Index at = 0;
  const double lo = zsq.minCoeff(&at);
  if (!(lo > 0.0)) {
    std::ostringstream os;
    os << "stationary data: Killing field not timelike, N^2 - |w|^2 = " << lo << " at "
       << describe_point(chart_, static_cast<std::size_t>(at));
    throw DomainError(os.str());
  }
}

ArrayXd StationaryData::killing_norm_squared() const {
  const int d = dim();
  ArrayXd wsq = ArrayXd::Zero(lapse_.values().size());
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) wsq += h_(j, k) * shift_[j] * shift_[k];
  }
  return lapse_.values().square() - wsq;
}

ArrayXd StationaryData::det_h() const {
  ArrayXd out(lapse_.values().size());
  for (Eigen::Index p = 0; p < out.size(); ++p) out[p] = matrix_at(h_, p).determinant();
  return out;
}

ArrayXd StationaryData::sqrt_det_h() const { return det_h().sqrt(); }

ArrayXd SpacetimeMetric::dot(const Field& a, const Field& b) const {
  const int nn = n();
  ArrayXd out = ArrayXd::Zero(static_cast<Eigen::Index>(chart.point_count()));
  for (int i = 0; i < nn; ++i) {
    for (int j = 0; j < nn; ++j) out += g(i, j) * a[i] * b[j];
  }
  return out;
}

SpacetimeMetric assemble_spacetime_metric(const StationaryData& data) {
  const auto& chart = data.chart();
  const int d = data.dim();
  const int n = d + 1;
  SpacetimeMetric m{chart, Field::sym2(chart, n), Field::sym2(chart, n), Field::scalar(chart)};
  const auto& h = data.spatial_metric();
  const auto& w = data.shift();
  // g_tj = h_jk w^k, g_tt = -N^2 + h_jk w^j w^k, g_jk = h_jk
  ArrayXd wsq = ArrayXd::Zero(static_cast<Eigen::Index>(chart.point_count()));
  for (int j = 0; j < d; ++j) {
    ArrayXd wl = ArrayXd::Zero(wsq.size());
    for (int k = 0; k < d; ++k) wl += h(j, k) * w[k];
    m.g(0, j + 1) = wl;
    wsq += wl * w[j];
    for (int k = j; k < d; ++k) m.g(j + 1, k + 1) = h(j, k);
  }
  m.g(0, 0) = -data.lapse().values().square() + wsq;

  const ArrayXd zsq = data.killing_norm_squared();
  if (!(zsq > 0.0).all()) {
    Eigen::Index at = 0;
    zsq.minCoeff(&at);
    throw DomainError("assemble_spacetime_metric: Killing field not timelike at " +
                      describe_point(chart, static_cast<std::size_t>(at)));
  }
  parallel_for(chart.point_count(), [&](std::size_t pp) {
    const auto p = static_cast<Eigen::Index>(pp);
    const SmallMatrix g = matrix_at(m.g, p);
    const SmallMatrix gi = g.inverse();
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) m.g_inv(i, j)[p] = 0.5 * (gi(i, j) + gi(j, i));
    }
    m.sqrt_abs_det.values()[p] = std::sqrt(std::abs(g.determinant()));
  });
  return m;
}

CurvaturePack christoffel(const SpacetimeMetric& metric) {
  const auto& chart = metric.chart;
  const int n = metric.n();
  const auto np = static_cast<Eigen::Index>(chart.point_count());
  // dg[a] holds d_{a+1} g_{mk}; d_t g = 0.
  const std::vector<Field> dg = spatial_gradient(metric.g);
  auto deriv = [&](int axis, int m, int k) -> ArrayXd {
    if (axis == 0) return ArrayXd::Zero(np);
    return dg[axis - 1](m, k);
  };
  // Lowered Christoffel Gamma_{r m k} = 1/2 (d_m g_rk + d_k g_rm - d_r g_mk)
  std::vector<ArrayXd> lowered(static_cast<std::size_t>(n * n * n));
  for (int r = 0; r < n; ++r) {
    for (int m = 0; m < n; ++m) {
      for (int k = m; k < n; ++k) {
        ArrayXd v = 0.5 * (deriv(m, r, k) + deriv(k, r, m) - deriv(r, m, k));
        lowered[(r * n + k) * n + m] = v;
        lowered[(r * n + m) * n + k] = std::move(v);
      }
    }
  }
  CurvaturePack cp;
  cp.n = n;
  cp.christoffel.assign(static_cast<std::size_t>(n * n * n), ArrayXd::Zero(np));
  cp.ricci = Field::sym2(chart, n);
  cp.scal = Field::scalar(chart);
  for (int l = 0; l < n; ++l) {
    for (int m = 0; m < n; ++m) {
      for (int k = m; k < n; ++k) {
        ArrayXd v = ArrayXd::Zero(np);
        for (int r = 0; r < n; ++r) v += metric.g_inv(l, r) * lowered[(r * n + m) * n + k];
        cp.christoffel[(l * n + k) * n + m] = v;
        cp.christoffel[(l * n + m) * n + k] = std::move(v);
      }
    }
  }
  return cp;
}

CurvaturePack curvature(const SpacetimeMetric& metric) {
  CurvaturePack cp = christoffel(metric);
  const auto& chart = metric.chart;
  const int n = cp.n;
  const int d = chart.dim();
  const auto np = static_cast<Eigen::Index>(chart.point_count());
  // dgam[(a * n^3) + idx] = d_{a+1} Gamma[idx]
  std::vector<ArrayXd> dgam(static_cast<std::size_t>(d * n * n * n));
  for (int l = 0; l < n; ++l) {
    for (int m = 0; m < n; ++m) {
      for (int k = m; k < n; ++k) {
        for (int a = 0; a < d; ++a) {
          ArrayXd v = spectral_derivative(chart, cp.gamma(l, m, k), a);
          dgam[a * n * n * n + (l * n + k) * n + m] = v;
          dgam[a * n * n * n + (l * n + m) * n + k] = std::move(v);
        }
      }
    }
  }
  auto dG = [&](int axis, int l, int m, int k) -> ArrayXd {
    if (axis == 0) return ArrayXd::Zero(np);
    return dgam[(axis - 1) * n * n * n + (l * n + m) * n + k];
  };
  cp.riemann.assign(static_cast<std::size_t>(n * n * n * n), ArrayXd::Zero(np));
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      for (int m = 0; m < n; ++m) {
        for (int k = m + 1; k < n; ++k) {
          ArrayXd v = dG(m, r, k, s) - dG(k, r, m, s);
          for (int l = 0; l < n; ++l) {
            v += cp.gamma(r, m, l) * cp.gamma(l, k, s) - cp.gamma(r, k, l) * cp.gamma(l, m, s);
          }
          cp.riemann[((r * n + s) * n + k) * n + m] = -v;
          cp.riemann[((r * n + s) * n + m) * n + k] = std::move(v);
        }
      }
    }
  }
  for (int s = 0; s < n; ++s) {
    for (int k = s; k < n; ++k) {
      ArrayXd v = ArrayXd::Zero(np);
      for (int r = 0; r < n; ++r) v += 0.5 * (cp.riem(r, s, r, k) + cp.riem(r, k, r, s));
      cp.ricci(s, k) = std::move(v);
    }
  }
  ArrayXd scal = ArrayXd::Zero(np);
  for (int s = 0; s < n; ++s) {
    for (int k = 0; k < n; ++k) scal += metric.g_inv(s, k) * cp.ricci(s, k);
  }
  cp.scal.values() = std::move(scal);
  return cp;
}

KillingPack killing_quantities(const StationaryData& data, const SpacetimeMetric& metric,
                               const CurvaturePack& curv) {
  if (!curv.has_curvature()) throw DomainError("killing_quantities: curvature not computed");
  const auto& chart = data.chart();
  const int d = data.dim();
  const int n = d + 1;
  const auto np = static_cast<Eigen::Index>(chart.point_count());
  KillingPack kp{Field::scalar(chart),        Field::vector(chart, n), Field::vector(chart, n),
                 Field::vector(chart, n),     Field::scalar(chart),    Field::scalar(chart),
                 Field::covector(chart, d),   Field::scalar(chart),    Field::scalar(chart),
                 Field::scalar(chart)};
  kp.zsq.values() = data.killing_norm_squared();
  const ArrayXd& N = data.lapse().values();
  kp.nu[0] = 1.0 / N;
  for (int j = 0; j < d; ++j) kp.nu[j + 1] = -data.shift()[j] / N;
  for (int l = 0; l < n; ++l) kp.nabla_zz[l] = curv.gamma(l, 0, 0);
  for (int l = 0; l < n; ++l) {
    ArrayXd v = ArrayXd::Zero(np);
    for (int m = 0; m < n; ++m) v += curv.gamma(l, 0, m) * kp.nabla_zz[m];
    kp.nabla_zzz[l] = std::move(v);
  }
  kp.ric_zz.values() = curv.ricci(0, 0);
  ArrayXd rnz = ArrayXd::Zero(np);
  for (int m = 0; m < n; ++m) rnz += kp.nu[m] * curv.ricci(m, 0);
  kp.ric_nuz.values() = std::move(rnz);
  for (int j = 0; j < d; ++j) {
    ArrayXd wl = ArrayXd::Zero(np);
    for (int k = 0; k < d; ++k) wl += data.spatial_metric()(j, k) * data.shift()[k];
    kp.theta_gamma[j] = -wl / kp.zsq.values();
  }
  kp.accel_norm2.values() = metric.dot(kp.nabla_zz, kp.nabla_zz);
  kp.accel_nu.values() = metric.dot(kp.nabla_zz, kp.nu);
  kp.jerk_nu.values() = metric.dot(kp.nabla_zzz, kp.nu);
  return kp;
}

double killing_equation_residual(const SpacetimeMetric& metric, const CurvaturePack& curv) {
  const int n = metric.n();
  const auto np = static_cast<Eigen::Index>(metric.chart.point_count());
  // nabla_m Z_k = d_m g_{k0} - Gamma^l_{mk} g_{l0}
  std::vector<Field> dg0;
  Field z_lower = Field::covector(metric.chart, n);
  for (int k = 0; k < n; ++k) z_lower[k] = metric.g(k, 0);
  dg0 = spatial_gradient(z_lower);
  auto cov = [&](int m, int k) {
    ArrayXd v = m == 0 ? ArrayXd::Zero(np) : ArrayXd(dg0[m - 1][k]);
    for (int l = 0; l < n; ++l) v -= curv.gamma(l, m, k) * metric.g(l, 0);
    return v;
  };
  double worst = 0.0;
  for (int m = 0; m < n; ++m) {
    for (int k = m; k < n; ++k) worst = std::max(worst, max_abs(cov(m, k) + cov(k, m)));
  }
  return worst;
}

double killing_equation_residual(const StationaryData& data) {
  const SpacetimeMetric metric = assemble_spacetime_metric(data);
  return killing_equation_residual(metric, christoffel(metric));
}

Field dalembert_scalar(const SpacetimeMetric& metric, const Field& f) {
  if (f.rank() != Rank::Scalar) throw DomainError("dalembert_scalar: scalar field required");
  const auto& chart = metric.chart;
  const int d = chart.dim();
  const auto np = static_cast<Eigen::Index>(chart.point_count());
  std::vector<ArrayXd> df;
  for (int a = 0; a < d; ++a) df.push_back(spectral_derivative(chart, f.values(), a));
  ArrayXd div = ArrayXd::Zero(np);
  for (int j = 0; j < d; ++j) {
    ArrayXd flux = ArrayXd::Zero(np);
    for (int k = 0; k < d; ++k) flux += metric.g_inv(j + 1, k + 1) * df[k];
    flux *= metric.sqrt_abs_det.values();
    div += spectral_derivative(chart, flux, j);
  }
  return Field::scalar(chart, -div / metric.sqrt_abs_det.values());
}

Field hessian_phi_z_nu(const SpacetimeMetric& metric, const CurvaturePack& curv,
                       const KillingPack& kp) {
  const auto& chart = metric.chart;
  const int n = metric.n();
  const auto np = static_cast<Eigen::Index>(chart.point_count());
  const ArrayXd phi = -0.5 * kp.zsq.values().log();
  std::vector<ArrayXd> dphi(static_cast<std::size_t>(n), ArrayXd::Zero(np));
  for (int a = 0; a < chart.dim(); ++a) dphi[a + 1] = spectral_derivative(chart, phi, a);
  // Z^m nu^k (d_m d_k phi - Gamma^l_{mk} d_l phi) with Z = d_t and d_t phi = 0
  ArrayXd hess = ArrayXd::Zero(np);
  for (int k = 0; k < n; ++k) {
    for (int l = 1; l < n; ++l) hess -= kp.nu[k] * curv.gamma(l, 0, k) * dphi[l];
  }
  return Field::scalar(chart, std::move(hess));
}

ConformalPack conformal_pack(const StationaryData& data, const SpacetimeMetric& metric,
                             const CurvaturePack& curv, const KillingPack& kp) {
  const auto& chart = data.chart();
  const int d = data.dim();
  const double n = d + 1;
  const auto np = static_cast<Eigen::Index>(chart.point_count());
  const Field phi = Field::scalar(chart, -0.5 * kp.zsq.values().log());
  std::vector<ArrayXd> dphi;
  for (int a = 0; a < d; ++a) dphi.push_back(spectral_derivative(chart, phi.values(), a));
  ArrayXd dphi2 = ArrayXd::Zero(np);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) dphi2 += metric.g_inv(j + 1, k + 1) * dphi[j] * dphi[k];
  }
  const ArrayXd box_phi = dalembert_scalar(metric, phi).values();
  const ArrayXd hess = hessian_phi_z_nu(metric, curv, kp).values();
  ArrayXd g_z_nu = ArrayXd::Zero(np);
  for (int m = 0; m < d + 1; ++m) g_z_nu += metric.g(0, m) * kp.nu[m];

  ConformalPack out{Field::scalar(chart), Field::scalar(chart)};
  out.ric_tilde_znu.values() = kp.ric_nuz.values() + box_phi * g_z_nu -
                               (n - 2.0) * dphi2 * g_z_nu - (n - 2.0) * hess;
  const ArrayXd& zsq = kp.zsq.values();
  out.scal_tilde.values() = curv.scal.values() * zsq + 2.0 * (n - 1.0) * zsq * box_phi -
                            (n - 2.0) * (n - 1.0) * zsq * dphi2;
  return out;
}

CurvatureDiagnostics curvature_diagnostics(const StationaryData& data,
                                           const SpacetimeMetric& metric,
                                           const CurvaturePack& curv) {
  CurvatureDiagnostics out;
  const int n = curv.n;
  const auto np = static_cast<Eigen::Index>(metric.chart.point_count());
  for (int l = 0; l < n; ++l) {
    for (int m = 0; m < n; ++m) {
      for (int k = 0; k < n; ++k) {
        out.christoffel_symmetry =
            std::max(out.christoffel_symmetry, max_abs(curv.gamma(l, m, k) - curv.gamma(l, k, m)));
      }
    }
  }
  if (curv.has_curvature()) {
    // Lowered R_{r s m k} = g_{r a} R^a_{s m k}
    std::vector<ArrayXd> low(static_cast<std::size_t>(n * n * n * n), ArrayXd::Zero(np));
    double scale = 0.0;
    for (int r = 0; r < n; ++r) {
      for (int s = 0; s < n; ++s) {
        for (int m = 0; m < n; ++m) {
          for (int k = 0; k < n; ++k) {
            ArrayXd& v = low[((r * n + s) * n + m) * n + k];
            for (int a = 0; a < n; ++a) v += metric.g(r, a) * curv.riem(a, s, m, k);
            scale = std::max(scale, max_abs(v));
          }
        }
      }
    }
    const double denom = std::max(scale, 1e-300);
    auto L = [&](int r, int s, int m, int k) -> const ArrayXd& { return low[((r * n + s) * n + m) * n + k]; };
    double anti = 0.0;
    double bianchi = 0.0;
    for (int r = 0; r < n; ++r) {
      for (int s = 0; s < n; ++s) {
        for (int m = 0; m < n; ++m) {
          for (int k = 0; k < n; ++k) {
            anti = std::max(anti, max_abs(L(r, s, m, k) + L(s, r, m, k)));
            anti = std::max(anti, max_abs(L(r, s, m, k) + L(r, s, k, m)));
            anti = std::max(anti, max_abs(L(r, s, m, k) - L(m, k, r, s)));
            bianchi = std::max(bianchi, max_abs(L(r, s, m, k) + L(r, m, k, s) + L(r, k, s, m)));
          }
        }
      }
    }
    out.riemann_antisymmetry = scale > 0.0 ? anti / denom : anti;
    out.first_bianchi = scale > 0.0 ? bianchi / denom : bianchi;
    // Ricci is stored symmetrised; compare the raw contraction instead.
    for (int s = 0; s < n; ++s) {
      for (int k = 0; k < n; ++k) {
        ArrayXd a = ArrayXd::Zero(np), b = ArrayXd::Zero(np);
        for (int r = 0; r < n; ++r) {
          a += curv.riem(r, s, r, k);
          b += curv.riem(r, k, r, s);
        }
        out.ricci_symmetry = std::max(out.ricci_symmetry, max_abs(a - b));
      }
    }
  }
  for (Eigen::Index p = 0; p < np; ++p) {
    const SmallMatrix g = matrix_at(metric.g, p);
    const SmallMatrix gi = matrix_at(metric.g_inv, p);
    const SmallMatrix id = SmallMatrix::Identity(n, n);
    out.metric_inverse = std::max(out.metric_inverse, (g * gi - id).cwiseAbs().maxCoeff());
  }
  const ArrayXd detg = -metric.sqrt_abs_det.values().square();
  out.det_identity = max_abs(data.lapse().values().square() * data.det_h() + detg);
  return out;
}

Geometry analyze(const StationaryData& data) {
  Geometry geo{assemble_spacetime_metric(data), {}, {}};
  geo.curv = curvature(geo.metric);
  geo.killing = killing_quantities(data, geo.metric, geo.curv);
  return geo;
}

LapseShift split_lapse_shift(const SpacetimeMetric& metric) {
  const auto& chart = metric.chart;
  const int d = chart.dim();
  const auto np = static_cast<Eigen::Index>(chart.point_count());
  LapseShift out{Field::scalar(chart), Field::vector(chart, d), Field::sym2(chart, d)};
  for (int j = 0; j < d; ++j) {
    for (int k = j; k < d; ++k) out.spatial_metric(j, k) = metric.g(j + 1, k + 1);
  }
  ArrayXd wsq = ArrayXd::Zero(np);
  for (Eigen::Index p = 0; p < np; ++p) {
    const SmallMatrix h = matrix_at(out.spatial_metric, p);
    Eigen::VectorXd wl(d);
    for (int j = 0; j < d; ++j) wl[j] = metric.g(0, j + 1)[p];
    const Eigen::VectorXd w = h.ldlt().solve(wl);
    for (int j = 0; j < d; ++j) out.shift[j][p] = w[j];
    wsq[p] = wl.dot(w);
  }
  out.lapse.values() = (wsq - metric.g(0, 0)).sqrt();
  return out;
}

}  // namespace kleinweyl::geometry
