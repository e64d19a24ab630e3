#include "kleinweyl/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <lapacke.h>

#include "kleinweyl/coefficients.hpp"
#include "kleinweyl/error.hpp"
#include "kleinweyl/spectral.hpp"

namespace kleinweyl::spectrum {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using cplx = std::complex<double>;
using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

constexpr double kPi = std::numbers::pi;
constexpr double kTailLog = 18.420680743952367;  // ln(1e8)

// Fourier differentiation matrix on an odd grid of M points over period L.
MatrixXd diff_matrix(int M, double L) {
  MatrixXd D = MatrixXd::Zero(M, M);
  const double h = 2.0 * kPi / M;
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      if (i == j) continue;
      const int k = i - j;
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      D(i, j) = 0.5 * sign / std::sin(0.5 * k * h);
    }
  }
  return D * (2.0 * kPi / L);
}

// I x .. x D x .. x I acting on `axis` of a row-major grid.
Sparse axis_operator(const std::vector<int>& sizes, int axis, const MatrixXd& D) {
  Index m = 1;
  for (int s : sizes) m *= s;
  Index stride = 1;
  for (int a = static_cast<int>(sizes.size()) - 1; a > axis; --a) stride *= sizes[a];
  const int M = sizes[axis];
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(m * (M - 1)));
  for (Index p = 0; p < m; ++p) {
    const int i = static_cast<int>((p / stride) % M);
    const Index base = p - i * stride;
    for (int j = 0; j < M; ++j) {
      if (j != i) trip.emplace_back(p, base + j * stride, D(i, j));
    }
  }
  Sparse S(m, m);
  S.setFromTriplets(trip.begin(), trip.end());
  return S;
}

double inf_norm(const MatrixXd& M) { return M.cwiseAbs().rowwise().sum().maxCoeff(); }
double inf_norm(const Eigen::MatrixXcd& M) { return M.cwiseAbs().rowwise().sum().maxCoeff(); }

std::vector<cplx> eig_real(MatrixXd M) {
  const auto n = static_cast<lapack_int>(M.rows());
  std::vector<double> wr(static_cast<std::size_t>(n)), wi(static_cast<std::size_t>(n));
  double dummy = 0.0;
  const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, M.data(), n, wr.data(),
                                        wi.data(), &dummy, 1, &dummy, 1);
  if (info != 0) {
    throw NumericalError("solve_spectrum: dgeev failed with info = " + std::to_string(info));
  }
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (lapack_int i = 0; i < n; ++i) out[i] = {wr[i], wi[i]};
  return out;
}

std::vector<cplx> eig_complex(const Eigen::MatrixXcd& M) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  if (es.info() != Eigen::Success) throw NumericalError("solve_spectrum: complex eigensolver failed");
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace

Pencil Pencil::from_complex(Eigen::MatrixXcd A, Eigen::MatrixXcd B, Eigen::MatrixXcd C) {
  const Index m = A.rows();
  if (A.cols() != m || B.rows() != m || B.cols() != m || C.rows() != m || C.cols() != m) {
    throw DomainError("Pencil: A, B, C must be square of equal size");
  }
  Pencil p;
  p.m = m;
  p.A = std::move(A);
  p.B = std::move(B);
  p.C = std::move(C);
  return p;
}

Pencil build_pencil(const geometry::StationaryData& data, int K) {
  const auto& chart = data.chart();
  const int d = chart.dim();
  if (K < 4) throw DomainError("build_pencil: truncation K must be at least 4");
  for (int a = 0; a < d; ++a) {
    if (2 * K > chart.size(a)) {
      std::ostringstream os;
      os << "build_pencil: truncation K = " << K << " exceeds half the data grid on axis " << a
         << " (" << chart.size(a) << " points); refine the grid or lower K";
      throw DomainError(os.str());
    }
  }
  const int M = 2 * K + 1;
  const std::vector<int> sizes(d, M);
  auto on_grid = [&](const Eigen::ArrayXd& f) { return resample(chart, f, sizes); };

  const Eigen::ArrayXd N = on_grid(data.lapse().values());
  std::vector<Eigen::ArrayXd> w;
  for (int j = 0; j < d; ++j) w.push_back(on_grid(data.shift()[j]));
  std::vector<std::vector<Eigen::ArrayXd>> h(d, std::vector<Eigen::ArrayXd>(d));
  for (int j = 0; j < d; ++j) {
    for (int k = j; k < d; ++k) h[j][k] = h[k][j] = on_grid(data.spatial_metric()(j, k));
  }
  const Eigen::ArrayXd W = on_grid(data.potential().values());
  const Index m = N.size();

  // inverse metric pieces at the collocation points
  VectorXd gtt(m), S(m);
  std::vector<VectorXd> gtj(d, VectorXd(m));
  std::vector<std::vector<VectorXd>> gjk(d, std::vector<VectorXd>(d, VectorXd(m)));
  for (Index p = 0; p < m; ++p) {
    MatrixXd hm(d, d);
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) hm(j, k) = h[j][k][p];
    }
    const MatrixXd hi = hm.inverse();
    const double n2 = N[p] * N[p];
    gtt[p] = -1.0 / n2;
    for (int j = 0; j < d; ++j) {
      gtj[j][p] = w[j][p] / n2;
      for (int k = 0; k < d; ++k) gjk[j][k][p] = hi(j, k) - w[j][p] * w[k][p] / n2;
    }
    S[p] = N[p] * std::sqrt(hm.determinant());
    if (!(S[p] > 0.0) || !std::isfinite(S[p])) {
      throw DomainError("build_pencil: degenerate metric at collocation point " + std::to_string(p));
    }
  }

  std::vector<Sparse> D;
  for (int a = 0; a < d; ++a) D.push_back(axis_operator(sizes, a, diff_matrix(M, chart.period(a))));
  const VectorXd Sinv = S.cwiseInverse();

  MatrixXd b = MatrixXd::Zero(m, m);
  MatrixXd c = MatrixXd::Zero(m, m);
  for (int j = 0; j < d; ++j) {
    const Sparse left = gtj[j].asDiagonal() * D[j];
    const Sparse right = Sinv.asDiagonal() * D[j] * S.cwiseProduct(gtj[j]).asDiagonal();
    b += MatrixXd(left) + MatrixXd(right);
    for (int k = 0; k < d; ++k) {
      const Sparse term =
          Sinv.asDiagonal() * Sparse(D[j] * S.cwiseProduct(gjk[j][k]).asDiagonal()) * D[k];
      c -= MatrixXd(term);
    }
  }
  c.diagonal() += W.matrix();

  Pencil p;
  p.m = m;
  p.real_structure = true;
  p.a_diag = gtt;
  p.b_real = std::move(b);
  p.c_real = std::move(c);
  p.weight = S;
  p.A = gtt.cast<cplx>().asDiagonal();
  p.B = cplx(0.0, 1.0) * p.b_real.cast<cplx>();
  p.C = p.c_real.cast<cplx>();
  p.truncation = K;
  p.grid = sizes;
  p.periods = chart.periods();
  const double max_period = *std::max_element(p.periods.begin(), p.periods.end());
  p.lambda_cut = 0.5 * K * (2.0 * kPi / max_period);
  return p;
}

PencilDiagnostics pencil_diagnostics(const Pencil& p) {
  PencilDiagnostics out;
  if (!p.real_structure) throw DomainError("pencil_diagnostics: needs an assembled pencil");
  out.a_max = p.a_diag.maxCoeff();
  const MatrixXd sb = p.weight.asDiagonal() * p.b_real;
  const MatrixXd sc = p.weight.asDiagonal() * p.c_real;
  const double nb = sb.cwiseAbs().maxCoeff();
  const double nc = sc.cwiseAbs().maxCoeff();
  out.b_asymmetry = nb > 0.0 ? (sb + sb.transpose()).cwiseAbs().maxCoeff() / nb : 0.0;
  out.c_asymmetry = nc > 0.0 ? (sc - sc.transpose()).cwiseAbs().maxCoeff() / nc : 0.0;
  return out;
}

Linearization linearize(const Pencil& p) {
  const Index m = p.m;
  Linearization lin;
  lin.pencil_size = m;
  lin.lambda_cut = p.lambda_cut;
  if (p.real_structure) {
    // lambda = -i nu turns the pencil into -nu^2 A + nu b + C with real factors.
    const double na = p.a_diag.cwiseAbs().maxCoeff();
    const double nc = inf_norm(p.c_real);
    const double gamma = nc > 0.0 ? std::sqrt(nc / na) : 1.0;
    const VectorXd ainv = (gamma * p.a_diag).cwiseInverse();
    lin.real = true;
    lin.scale = gamma;
    lin.rotation = {0.0, -1.0};
    lin.real_matrix = MatrixXd::Zero(2 * m, 2 * m);
    lin.real_matrix.topRightCorner(m, m).setIdentity();
    lin.real_matrix.bottomLeftCorner(m, m) = (ainv / gamma).asDiagonal() * p.c_real;
    lin.real_matrix.bottomRightCorner(m, m) = ainv.asDiagonal() * p.b_real;
    return lin;
  }
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(p.A);
  if (!(std::abs(lu.determinant()) > 0.0)) throw DomainError("linearize: A is singular");
  const double na = inf_norm(p.A);
  const double nc = inf_norm(p.C);
  const double gamma = nc > 0.0 ? std::sqrt(nc / na) : 1.0;
  lin.scale = gamma;
  lin.complex_matrix = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
  lin.complex_matrix.topRightCorner(m, m).setIdentity();
  lin.complex_matrix.bottomLeftCorner(m, m) = -lu.solve(p.C) / (gamma * gamma);
  lin.complex_matrix.bottomRightCorner(m, m) = -lu.solve(p.B) / gamma;
  return lin;
}

std::vector<cplx> linearization_roots(const Linearization& lin) {
  auto mu = lin.real ? eig_real(lin.real_matrix) : eig_complex(lin.complex_matrix);
  for (auto& z : mu) z *= lin.rotation * lin.scale;
  return mu;
}

SpectrumResult solve_spectrum(const Linearization& lin, const SpectrumFilters& filters) {
  SpectrumResult out;
  out.provenance = Provenance::Discretized;
  out.pencil_size = lin.pencil_size;
  out.lambda_cut = lin.lambda_cut;
  const double norm = lin.real ? inf_norm(lin.real_matrix) : inf_norm(lin.complex_matrix);
  out.near_zero_threshold =
      filters.lambda_min + filters.near_zero_safety * lin.scale *
                               std::sqrt(std::numeric_limits<double>::epsilon() * norm);
  const auto roots = linearization_roots(lin);
  std::vector<std::pair<double, double>> kept;
  for (const auto& z : roots) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw NumericalError("solve_spectrum: non-finite eigenvalue");
    }
    if (std::abs(z) < out.near_zero_threshold) {
      out.near_zero.push_back(z);
    } else if (std::abs(z.imag()) > filters.tau_im * (1.0 + std::abs(z))) {
      out.discarded_complex.push_back(z);
    } else {
      kept.emplace_back(z.real(), std::abs(z.imag()));
    }
  }
  std::sort(kept.begin(), kept.end());
  for (const auto& [re, im] : kept) {
    out.lambdas.push_back(re);
    out.im_residual.push_back(im);
  }
  return out;
}

SpectrumResult analytic_spectrum(const AnalyticModel& model, double cutoff) {
  if (!(cutoff > 0.0)) throw DomainError("analytic_spectrum: cutoff must be positive");
  SpectrumResult out;
  out.provenance = Provenance::Analytic;
  out.lambda_cut = cutoff;
  switch (model.kind) {
    case AnalyticModel::Kind::Sphere: {
      const double m2 = model.mass * model.mass;
      for (long l = 0;; ++l) {
        const double lam = std::sqrt(static_cast<double>(l * (l + 1)) + m2);
        if (lam > cutoff) break;
        for (long j = 0; j < 2 * l + 1; ++j) {
          if (lam == 0.0) {
            out.near_zero.emplace_back(0.0, 0.0);
            out.near_zero.emplace_back(0.0, 0.0);
          } else {
            out.lambdas.push_back(lam);
            out.lambdas.push_back(-lam);
          }
        }
      }
      break;
    }
    case AnalyticModel::Kind::FlatTorus:
    case AnalyticModel::Kind::ShiftTorus: {
      const int d = static_cast<int>(model.periods.size());
      if (d < 1 || d > 3) throw DomainError("analytic_spectrum: torus dimension must be 1..3");
      std::vector<double> w = model.shift;
      w.resize(static_cast<std::size_t>(d), 0.0);
      if (model.kind == AnalyticModel::Kind::FlatTorus &&
          std::any_of(w.begin(), w.end(), [](double c) { return c != 0.0; })) {
        throw DomainError("analytic_spectrum: flat torus takes no shift");
      }
      double wnorm = 0.0;
      for (double c : w) wnorm += c * c;
      wnorm = std::sqrt(wnorm);
      if (!(model.lapse > wnorm)) {
        throw DomainError("analytic_spectrum: N <= |w|, the Killing field is not timelike");
      }
      // |lambda| >= (N - |w|)|k| bounds the lattice search
      const double kmax = cutoff / (model.lapse - wnorm);
      std::array<int, 3> range{0, 0, 0};
      std::array<double, 3> omega{1.0, 1.0, 1.0};
      for (int a = 0; a < d; ++a) {
        omega[a] = 2.0 * kPi / model.periods[a];
        range[a] = static_cast<int>(std::floor(kmax / omega[a])) + 1;
      }
      std::array<int, 3> k{};
      for (k[0] = -range[0]; k[0] <= range[0]; ++k[0]) {
        for (k[1] = -range[1]; k[1] <= range[1]; ++k[1]) {
          for (k[2] = -range[2]; k[2] <= range[2]; ++k[2]) {
            double kk = 0.0, wk = 0.0;
            for (int a = 0; a < d; ++a) {
              const double ka = omega[a] * k[a];
              kk += ka * ka;
              wk += w[a] * ka;
            }
            if (kk == 0.0) {
              out.near_zero.emplace_back(0.0, 0.0);
              out.near_zero.emplace_back(0.0, 0.0);
              continue;
            }
            const double r = model.lapse * std::sqrt(kk);
            for (double lam : {-wk + r, -wk - r}) {
              if (std::abs(lam) <= cutoff) out.lambdas.push_back(lam);
            }
          }
        }
      }
      break;
    }
  }
  std::sort(out.lambdas.begin(), out.lambdas.end());
  out.im_residual.assign(out.lambdas.size(), 0.0);
  return out;
}

std::size_t counting_function(const SpectrumResult& spec, double lambda) {
  if (lambda > spec.lambda_cut) {
    std::ostringstream os;
    os << "counting_function: lambda = " << lambda << " is beyond the trust cutoff "
       << spec.lambda_cut;
    throw DomainError(os.str());
  }
  const auto lo = std::upper_bound(spec.lambdas.begin(), spec.lambdas.end(), 0.0);
  const auto hi = std::upper_bound(spec.lambdas.begin(), spec.lambdas.end(), lambda);
  return hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
}

double t_floor(const SpectrumResult& spec) {
  return kTailLog / (spec.lambda_cut * spec.lambda_cut);
}

double heat_trace(const SpectrumResult& spec, double t, bool include_near_zero) {
  const double floor = t_floor(spec);
  if (t < floor) {
    std::ostringstream os;
    os << "heat_trace: t = " << t << " is below the truncation floor; minimum valid t is "
       << floor;
    throw DomainError(os.str());
  }
  double sum = 0.0;
  for (double lam : spec.lambdas) {
    if (std::abs(lam) <= spec.lambda_cut) sum += std::exp(-t * lam * lam);
  }
  if (include_near_zero) {
    for (const auto& b : spec.near_zero) sum += std::exp(-t * std::norm(b));
  }
  return sum;
}

HeatExpansionFit fit_heat_expansion(const SpectrumResult& spec, int n, double t_min, double t_max,
                                    const HeatFitOptions& options) {
  if (n < 2) throw DomainError("fit_heat_expansion: n must be at least 2");
  if (options.samples < 20) throw DomainError("fit_heat_expansion: need at least 20 samples");
  if (!(t_max > t_min)) throw DomainError("fit_heat_expansion: empty window");
  const double floor = t_floor(spec);
  if (t_min < floor) {
    std::ostringstream os;
    os << "fit_heat_expansion: t_min = " << t_min << " is below the truncation floor " << floor;
    throw DomainError(os.str());
  }
  HeatExpansionFit out;
  out.t_min = t_min;
  out.t_max = t_max;
  out.t = log_spaced(t_min, t_max, options.samples);
  for (double t : out.t) out.trace.push_back(heat_trace(spec, t, options.include_near_zero));
  const double lead = -0.5 * (n - 1);
  std::vector<double> powers;
  for (int k = 0; k <= options.k_max; ++k) powers.push_back(lead + k);
  if (options.half_power) powers.push_back(-0.5 * (n - 2));
  out.fit = fit_powers(out.t, out.trace, powers, -lead);
  out.a0 = out.fit.coefficients[0];
  out.a1 = options.k_max >= 1 ? out.fit.coefficients[1] : 0.0;
  out.a_half = options.half_power ? out.fit.coefficients.back() : 0.0;
  out.residual = out.fit.residual_norm;
  const double omitted = lead + options.k_max + 1;
  out.omitted_term = std::max(std::pow(t_min, omitted), std::pow(t_max, omitted));
  return out;
}

WeylCheck weyl_check(const SpectrumResult& spec, int n, double predicted, double lambda_min,
                     double lambda_max, int samples) {
  if (!(lambda_max > lambda_min) || !(lambda_min > 0.0) || samples < 2) {
    throw DomainError("weyl_check: invalid window");
  }
  WeylCheck out;
  out.lambda_min = lambda_min;
  out.lambda_max = lambda_max;
  out.predicted = predicted;
  out.samples = samples;
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double lam = lambda_min + (lambda_max - lambda_min) * i / (samples - 1);
    sum += static_cast<double>(counting_function(spec, lam)) / std::pow(lam, n - 1);
  }
  out.fitted = sum / samples;
  out.relative_error = std::abs(out.fitted - predicted) / std::abs(predicted);
  return out;
}

WeylCheck weyl_check(const SpectrumResult& spec, const geometry::StationaryData& data,
                     double lambda_min, double lambda_max, int samples) {
  const int n = data.spacetime_dim();
  const double predicted =
      coefficients::weyl_constant(data) / std::pow(2.0 * kPi, n - 1);
  return weyl_check(spec, n, predicted, lambda_min, lambda_max, samples);
}

ZetaResidueEstimate zeta_residue_estimate(const SpectrumResult& spec, int n, double lambda_max) {
  if (n < 2 || !(lambda_max > 0.0) || lambda_max > spec.lambda_cut) {
    throw DomainError("zeta_residue_estimate: need n >= 2 and 0 < lambda_max <= lambda_cut");
  }
  ZetaResidueEstimate out;
  out.s = 0.5 * (n - 1);
  out.lambda_max = lambda_max;
  std::vector<double> mags;
  for (double lam : spec.lambdas) {
    const double a = std::abs(lam);
    if (a > 0.0 && a <= lambda_max) mags.push_back(a);
  }
  if (mags.empty()) throw DomainError("zeta_residue_estimate: no eigenvalues below lambda_max");
  // M(lambda) ~ c lambda^{n-1} for the two-sided count
  const double c = static_cast<double>(mags.size()) / std::pow(lambda_max, n - 1);
  for (int i = 0; i < 2; ++i) {
    const double delta = out.deltas[i];
    const double s2 = 2.0 * (out.s + delta);
    double sum = 0.0;
    for (double a : mags) sum += std::pow(a, -s2);
    const double tail = c * (n - 1) * std::pow(lambda_max, n - 1 - s2) / (2.0 * delta);
    out.scaled[i] = delta * (sum + tail);
  }
  // r(delta) = residue + O(delta); deltas[0] = 2 deltas[1]
  out.residue = 2.0 * out.scaled[1] - out.scaled[0];
  return out;
}

}  // namespace kleinweyl::spectrum
