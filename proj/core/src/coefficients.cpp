#include "kleinweyl/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "kleinweyl/error.hpp"
#include "kleinweyl/special.hpp"
#include "kleinweyl/spectral.hpp"

namespace kleinweyl::coefficients {
namespace {

using Eigen::ArrayXd;
using geometry::StationaryData;

constexpr double kPi = std::numbers::pi;

double max_abs(const ArrayXd& a) { return a.size() ? a.abs().maxCoeff() : 0.0; }

// w_j = h_jk w^k
std::vector<ArrayXd> lower_shift(const StationaryData& data) {
  const int d = data.dim();
  std::vector<ArrayXd> out;
  for (int j = 0; j < d; ++j) {
    ArrayXd v = ArrayXd::Zero(static_cast<Eigen::Index>(data.chart().point_count()));
    for (int k = 0; k < d; ++k) v += data.spatial_metric()(j, k) * data.shift()[k];
    out.push_back(std::move(v));
  }
  return out;
}

// Pointwise inverse of the spatial metric, upper triangle in a Sym2 Field.
Field inverse_spatial(const StationaryData& data) {
  const int d = data.dim();
  const auto& h = data.spatial_metric();
  Field inv = Field::sym2(data.chart(), d);
  const auto np = static_cast<Eigen::Index>(data.chart().point_count());
  for (Eigen::Index p = 0; p < np; ++p) {
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) m(i, j) = h(i, j)[p];
    }
    const Eigen::MatrixXd mi = m.inverse();
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) inv(i, j)[p] = mi(i, j);
    }
  }
  return inv;
}

std::vector<ArrayXd> gradient(const Field& f) {
  std::vector<ArrayXd> out;
  for (int a = 0; a < f.chart().dim(); ++a) out.push_back(spectral_derivative(f.chart(), f.values(), a));
  return out;
}

double relative_change(double before, double after) {
  const double scale = std::abs(before);
  return scale > 0.0 ? std::abs(after - before) / scale : std::abs(after - before);
}

}  // namespace

double integrate_density(const StationaryData& data, const Field& f, Weight weight) {
  if (!(f.chart() == data.chart())) throw DomainError("integrate_density: chart mismatch");
  ArrayXd integrand = f.values() * data.sqrt_det_h();
  if (weight == Weight::KillingVolume) integrand *= data.lapse().values();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < integrand.size(); ++i) sum += integrand[i];
  return sum * data.chart().cell_volume();
}

Field c0_density(const StationaryData& data, const geometry::KillingPack& kp) {
  const int n = data.spacetime_dim();
  const double pref = 2.0 * std::pow(kPi, -0.5 * n) * std::tgamma(0.5 * n) / std::tgamma(n - 1.0);
  return Field::scalar(data.chart(),
                       pref * data.lapse().values() * kp.zsq.values().pow(-0.5 * n));
}

Field c2_tilde_density(const StationaryData& data, const geometry::CurvaturePack& curv,
                       const geometry::KillingPack& kp) {
  if (!curv.has_curvature()) throw DomainError("c2_tilde_density: curvature not computed");
  const double n = data.spacetime_dim();
  const ArrayXd& N = data.lapse().values();
  const ArrayXd& zsq = kp.zsq.values();
  const ArrayXd z_n = zsq.pow(-0.5 * n);  // |Z|^{-n}
  const ArrayXd z_n2 = z_n * zsq;          // |Z|^{-n+2}
  ArrayXd c = (curv.scal.values() / 6.0 - data.potential().values()) * N * z_n2;
  c -= (n - 2.0) / 6.0 * kp.ric_zz.values() * N * z_n;
  c -= n * (n - 2.0) / 12.0 * N * kp.accel_norm2.values() * z_n / zsq;
  c += kp.ric_nuz.values() * z_n2 / 3.0;
  c += (n - 2.0) / 3.0 * z_n * kp.jerk_nu.values();
  return Field::scalar(data.chart(), std::move(c));
}

double c2_prefactor(int n) {
  if (n < 4) {
    throw UnsupportedDimension(
        "c2_density: the wave-trace prefactor needs n >= 4; use heat_coefficients, whose a1 "
        "formula is regular at n = 3");
  }
  return 2.0 * std::pow(kPi, -0.5 * n) * std::tgamma(0.5 * n - 1.0) / (4.0 * std::tgamma(n - 3.0));
}

Field c2_density(const StationaryData& data, const geometry::CurvaturePack& curv,
                 const geometry::KillingPack& kp) {
  const double pref = c2_prefactor(data.spacetime_dim());
  Field out = c2_tilde_density(data, curv, kp);
  out.values() *= pref;
  return out;
}

double weyl_constant(const StationaryData& data) {
  const int n = data.spacetime_dim();
  const Field zinv = Field::scalar(data.chart(), data.killing_norm_squared().pow(-0.5 * n));
  return unit_ball_volume(n - 1) * integrate_density(data, zinv, Weight::KillingVolume);
}

HeatCoefficients heat_coefficients_from_integrals(int n, double killing_integral,
                                                  double c2_integral) {
  if (n < 3) throw UnsupportedDimension("heat_coefficients: n must be at least 3");
  const double pref = 2.0 / std::pow(4.0 * kPi, 0.5 * (n - 1));
  return {n, pref * killing_integral, pref * c2_integral, killing_integral, c2_integral};
}

HeatCoefficients heat_coefficients(const StationaryData& data, const geometry::CurvaturePack& curv,
                                   const geometry::KillingPack& kp) {
  const int n = data.spacetime_dim();
  const Field zinv = Field::scalar(data.chart(), kp.zsq.values().pow(-0.5 * n));
  return heat_coefficients_from_integrals(
      n, integrate_density(data, zinv, Weight::KillingVolume),
      integrate_density(data, c2_tilde_density(data, curv, kp)));
}

std::vector<ZetaResidue> zeta_residues(const std::vector<double>& a, int n) {
  std::vector<ZetaResidue> out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double s = 0.5 * (n - 1) - static_cast<double>(k);
    out.push_back({s, a[k] * reciprocal_gamma(s)});
  }
  return out;
}

CoefficientReport coefficient_report(const StationaryData& data) {
  const auto geom = geometry::analyze(data);
  CoefficientReport r;
  r.n = data.spacetime_dim();
  r.c0_density = c0_density(data, geom.killing);
  r.c2_tilde_density = c2_tilde_density(data, geom.curv, geom.killing);
  r.c0_integral = integrate_density(data, r.c0_density);
  r.c2_tilde_integral = integrate_density(data, r.c2_tilde_density);
  r.weyl_constant = weyl_constant(data);
  const auto heat = heat_coefficients(data, geom.curv, geom.killing);
  r.a0 = heat.a0;
  r.a1 = heat.a1;
  r.zeta_residues = zeta_residues({r.a0, r.a1}, r.n);
  std::ostringstream os;
  os << "periodic trapezoid ";
  for (int a = 0; a < data.dim(); ++a) os << (a ? "x" : "") << data.chart().size(a);
  r.quadrature = os.str();
  return r;
}

StationaryData apply_time_shear(const StationaryData& data, const ShearField& shear) {
  if (!(shear.f.chart() == data.chart())) throw DomainError("apply_time_shear: chart mismatch");
  const auto& chart = data.chart();
  const int d = data.dim();
  const double eps = shear.epsilon;
  const auto df = gradient(shear.f);
  const auto wl = lower_shift(data);
  const ArrayXd zsq = data.killing_norm_squared();

  Field h = Field::sym2(chart, d);
  for (int j = 0; j < d; ++j) {
    for (int k = j; k < d; ++k) {
      h(j, k) = data.spatial_metric()(j, k) + eps * (df[j] * wl[k] + df[k] * wl[j]) -
                eps * eps * zsq * df[j] * df[k];
    }
  }
  std::vector<ArrayXd> wl_new;
  for (int j = 0; j < d; ++j) wl_new.push_back(wl[j] - eps * zsq * df[j]);

  Field shift = Field::vector(chart, d);
  ArrayXd wsq = ArrayXd::Zero(static_cast<Eigen::Index>(chart.point_count()));
  const auto np = static_cast<Eigen::Index>(chart.point_count());
  for (int j = 0; j < d; ++j) shift[j] = ArrayXd::Zero(np);
  for (Eigen::Index p = 0; p < np; ++p) {
    Eigen::MatrixXd m(d, d);
    Eigen::VectorXd b(d);
    for (int i = 0; i < d; ++i) {
      b[i] = wl_new[i][p];
      for (int j = 0; j < d; ++j) m(i, j) = h(i, j)[p];
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
      throw DomainError("apply_time_shear: sheared spatial metric is not positive definite");
    }
    const Eigen::VectorXd up = llt.solve(b);
    for (int j = 0; j < d; ++j) shift[j][p] = up[j];
    wsq[p] = up.dot(b);
  }
  Field lapse = Field::scalar(chart, (wsq + zsq).sqrt());
  return {chart, std::move(lapse), std::move(shift), std::move(h), data.potential()};
}

VariationReport variation_check(const StationaryData& data, const Field& f, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("variation_check: epsilon must be positive");
  const auto& chart = data.chart();
  const int d = data.dim();
  const auto np = static_cast<Eigen::Index>(chart.point_count());
  const auto plus = apply_time_shear(data, {f, epsilon});
  const auto minus = apply_time_shear(data, {f, -epsilon});
  const auto fd = [&](const ArrayXd& a, const ArrayXd& b) -> ArrayXd {
    return (a - b) / (2.0 * epsilon);
  };

  const auto g0 = geometry::analyze(data);
  const auto gp = geometry::analyze(plus);
  const auto gm = geometry::analyze(minus);

  const auto df = gradient(f);
  const auto wl = lower_shift(data);
  const Field hinv = inverse_spatial(data);
  const ArrayXd& N = data.lapse().values();
  const ArrayXd zsq = data.killing_norm_squared();
  ArrayXd wdotf = ArrayXd::Zero(np);
  for (int k = 0; k < d; ++k) wdotf += data.shift()[k] * df[k];
  std::vector<ArrayXd> f_up;  // h^{jk} f_k
  for (int j = 0; j < d; ++j) {
    ArrayXd v = ArrayXd::Zero(np);
    for (int k = 0; k < d; ++k) v += hinv(j, k) * df[k];
    f_up.push_back(std::move(v));
  }

  // (finite difference, formula) pairs per quantity; deviation taken over all components
  struct Pair {
    std::string name;
    std::vector<ArrayXd> measured;
    std::vector<ArrayXd> formula;
    bool asserted;
    std::string note;
  };
  std::vector<Pair> pairs;

  {
    Pair p{"delta h_jk", {}, {}, true, ""};
    for (int j = 0; j < d; ++j) {
      for (int k = j; k < d; ++k) {
        p.measured.push_back(fd(plus.spatial_metric()(j, k), minus.spatial_metric()(j, k)));
        p.formula.push_back(-wl[k] * df[j] - wl[j] * df[k]);
      }
    }
    pairs.push_back(std::move(p));
  }
  pairs.push_back({"delta sqrt det h",
                   {fd(plus.sqrt_det_h(), minus.sqrt_det_h())},
                   {-wdotf * data.sqrt_det_h()},
                   true,
                   ""});
  {
    Pair p{"delta w^j", {}, {}, true,
           "index raised with the unperturbed h: h^{jk} delta(w_k)"};
    const auto wp = lower_shift(plus);
    const auto wm = lower_shift(minus);
    for (int j = 0; j < d; ++j) {
      ArrayXd v = ArrayXd::Zero(np);
      for (int k = 0; k < d; ++k) v += hinv(j, k) * fd(wp[k], wm[k]);
      p.measured.push_back(std::move(v));
      p.formula.push_back(zsq * f_up[j]);
    }
    pairs.push_back(std::move(p));
  }
  pairs.push_back({"delta N", {fd(plus.lapse().values(), minus.lapse().values())}, {N * wdotf},
                   true, ""});
  pairs.push_back({"delta u",
                   {fd(plus.killing_norm_squared().sqrt(), minus.killing_norm_squared().sqrt())},
                   {ArrayXd::Zero(np)},
                   true,
                   "u = |Z|"});
  {
    Pair p{"delta R_00, delta R_k0", {}, {}, true, "coordinate-frame components"};
    p.measured.push_back(fd(gp.curv.ricci(0, 0), gm.curv.ricci(0, 0)));
    p.formula.push_back(ArrayXd::Zero(np));
    for (int k = 0; k < d; ++k) {
      p.measured.push_back(fd(gp.curv.ricci(k + 1, 0), gm.curv.ricci(k + 1, 0)));
      p.formula.push_back(-g0.curv.ricci(0, 0) * df[k]);
    }
    pairs.push_back(std::move(p));
  }
  {
    Pair p{"delta nu", {}, {}, true, ""};
    p.measured.push_back(fd(gp.killing.nu[0], gm.killing.nu[0]));
    p.formula.push_back(-wdotf / N);
    for (int j = 0; j < d; ++j) {
      p.measured.push_back(fd(gp.killing.nu[j + 1], gm.killing.nu[j + 1]));
      p.formula.push_back(-N * f_up[j]);
    }
    pairs.push_back(std::move(p));
  }
  {
    Pair p{"delta w^j (contravariant)", {}, {}, false,
           "literal contravariant reading; the pullback gives -N^2 f^j - (w.f) w^j"};
    for (int j = 0; j < d; ++j) {
      p.measured.push_back(fd(plus.shift()[j], minus.shift()[j]));
      p.formula.push_back(zsq * f_up[j]);
    }
    pairs.push_back(std::move(p));
  }
  {
    Pair p{"delta theta", {}, {}, true,
           "theta = dt + gamma; the pullback gives +df, opposite in sign to the metric rules"};
    for (int j = 0; j < d; ++j) {
      p.measured.push_back(fd(gp.killing.theta_gamma[j], gm.killing.theta_gamma[j]));
      p.formula.push_back(df[j]);
    }
    pairs.push_back(std::move(p));
  }

  const auto deviation = [](const Pair& p, int sigma) {
    double dev = 0.0;
    for (std::size_t c = 0; c < p.measured.size(); ++c) {
      dev = std::max(dev, max_abs(p.measured[c] - sigma * p.formula[c]));
    }
    return dev;
  };
  const auto report_for = [&](int sigma) {
    VariationReport r;
    r.sigma = sigma;
    r.epsilon = epsilon;
    for (const auto& p : pairs) {
      double scale = 0.0;
      for (const auto& c : p.formula) scale = std::max(scale, max_abs(c));
      const double dev = deviation(p, sigma);
      if (p.asserted) r.max_asserted_deviation = std::max(r.max_asserted_deviation, dev);
      r.entries.push_back({p.name, dev, scale, p.asserted, p.note});
    }
    r.killing_norm_variation =
        max_abs(fd(plus.killing_norm_squared(), minus.killing_norm_squared()));
    r.volume_variation = max_abs(fd(plus.lapse().values() * plus.sqrt_det_h(),
                                    minus.lapse().values() * minus.sqrt_det_h()));
    return r;
  };
  // sigma minimises the summed scale-normalised deviation, so a single rule
  // with the opposite sign cannot flip the choice made by the others
  const auto mismatch = [&](int sigma) {
    double total = 0.0;
    for (const auto& p : pairs) {
      if (!p.asserted) continue;
      double scale = 0.0;
      for (const auto& c : p.formula) scale = std::max(scale, max_abs(c));
      if (scale > 0.0) total += deviation(p, sigma) / scale;
    }
    return total;
  };
  return report_for(mismatch(-1) <= mismatch(1) ? -1 : 1);
}

IdentityTerms conformal_identity(const StationaryData& data) {
  const auto geom = geometry::analyze(data);
  const auto& kp = geom.killing;
  const double n = data.spacetime_dim();
  const ArrayXd& N = data.lapse().values();
  const ArrayXd& zsq = kp.zsq.values();
  const ArrayXd z_n = zsq.pow(-0.5 * n);
  const ArrayXd z_n2 = z_n * zsq;

  IdentityTerms out;
  out.lhs = integrate_density(
      data, Field::scalar(data.chart(), z_n * (kp.ric_nuz.values() * zsq +
                                               (n - 2.0) * kp.jerk_nu.values())));
  const auto conf = geometry::conformal_pack(data, geom.metric, geom.curv, kp);
  // g~(Z, nu) = |Z|^{-2} g(Z, nu) = -N |Z|^{-2}
  const ArrayXd gt_znu = -N / zsq;
  out.conformal = integrate_density(
      data, Field::scalar(data.chart(), (conf.ric_tilde_znu.values() -
                                         conf.scal_tilde.values() * gt_znu / n) *
                                            z_n2));
  const Field u = Field::scalar(data.chart(), zsq.sqrt());
  const Field box_u = geometry::dalembert_scalar(geom.metric, u);
  const double rest = integrate_density(
      data,
      Field::scalar(data.chart(), ((n - 2.0) / n * box_u.values() / u.values() -
                                   geom.curv.scal.values() / n) *
                                      z_n2),
      Weight::KillingVolume);
  out.rhs = out.conformal + rest;
  // On flat data every term is roundoff; the floor keeps the quotient meaningful there.
  const double floor =
      1e-8 * integrate_density(data, Field::scalar(data.chart(), z_n2));
  const double scale = std::max({std::abs(out.lhs), std::abs(out.conformal), std::abs(rest), floor});
  out.residual = std::abs(out.lhs - out.rhs) / scale;
  return out;
}

InvarianceReport invariance_suite(const StationaryData& data, const Field& f, double epsilon) {
  InvarianceReport r;
  r.epsilon = epsilon;
  const auto sheared = apply_time_shear(data, {f, epsilon});
  const auto before = coefficient_report(data);
  const auto after = coefficient_report(sheared);
  r.c2_integral = before.c2_tilde_integral;
  r.c2_integral_sheared = after.c2_tilde_integral;
  const auto rel_or_abs = [](double a, double b) {
    // near-vanishing integrals are compared absolutely
    return std::abs(a) < 1e-8 ? std::abs(b - a) : relative_change(a, b);
  };
  r.c2_relative_change = rel_or_abs(before.c2_tilde_integral, after.c2_tilde_integral);
  r.a0_relative_change = rel_or_abs(before.a0, after.a0);
  r.a1_relative_change = rel_or_abs(before.a1, after.a1);
  r.weyl_relative_change = rel_or_abs(before.weyl_constant, after.weyl_constant);
  r.killing_norm_defect = max_abs(sheared.killing_norm_squared() - data.killing_norm_squared());
  r.volume_defect = max_abs(sheared.lapse().values() * sheared.sqrt_det_h() -
                            data.lapse().values() * data.sqrt_det_h());
  const auto id = conformal_identity(data);
  r.identity_lhs = id.lhs;
  r.identity_rhs = id.rhs;
  r.identity_conformal_term = id.conformal;
  r.identity_residual = id.residual;
  r.identity_residual_sheared = conformal_identity(sheared).residual;

  const auto geom = geometry::analyze(data);
  const Field hess = geometry::hessian_phi_z_nu(geom.metric, geom.curv, geom.killing);
  r.hessian_identity =
      max_abs(hess.values() * geom.killing.zsq.values() + geom.killing.jerk_nu.values());
  return r;
}

}  // namespace kleinweyl::coefficients
