#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kleinweyl/fit.hpp"
#include "kleinweyl/geometry.hpp"

/// Spectrum of the time-translation generator on Klein-Gordon solutions,
/// from a Fourier-collocation quadratic pencil or from closed forms.
namespace kleinweyl::spectrum {

/// Quadratic pencil P(lambda) = lambda^2 A + lambda B + C.
///
/// Pencils assembled from stationary data also keep the real factors
/// A = diag(g^tt), B = i B_r, C = C_r, which allows a real linearization.
struct Pencil {
  Eigen::Index m = 0;
  Eigen::MatrixXcd A, B, C;

  bool real_structure = false;
  Eigen::VectorXd a_diag;  ///< g^tt at the collocation points
  Eigen::MatrixXd b_real;  ///< B = i b_real
  Eigen::MatrixXd c_real;
  Eigen::VectorXd weight;  ///< sqrt|g| at the collocation points

  int truncation = 0;
  std::vector<int> grid;        ///< collocation points per axis, 2K + 1
  std::vector<double> periods;
  double lambda_cut = 0.0;

  static Pencil from_complex(Eigen::MatrixXcd A, Eigen::MatrixXcd B, Eigen::MatrixXcd C);
};

/// Collocation pencil of the stationary Klein-Gordon operator for Fourier
/// modes |k_i| <= K. Rejects K beyond half the data grid, where the data
/// would have to be extrapolated in frequency.
Pencil build_pencil(const geometry::StationaryData& data, int K);

struct PencilDiagnostics {
  double a_max = 0.0;           ///< largest g^tt (must be negative)
  double b_asymmetry = 0.0;     ///< |S b + (S b)^T| / |S b|, S = diag(weight)
  double c_asymmetry = 0.0;     ///< |S C - (S C)^T| / |S C|
};
PencilDiagnostics pencil_diagnostics(const Pencil& p);

/// Companion linearization: eigenvalues mu of `matrix` map to pencil roots
/// lambda = rotation * scale * mu.
struct Linearization {
  bool real = false;
  Eigen::MatrixXd real_matrix;
  Eigen::MatrixXcd complex_matrix;
  std::complex<double> rotation{1.0, 0.0};
  double scale = 1.0;
  Eigen::Index pencil_size = 0;
  double lambda_cut = 0.0;
};

Linearization linearize(const Pencil& p);

/// Pencil roots of the linearization, unsorted.
std::vector<std::complex<double>> linearization_roots(const Linearization& lin);

enum class Provenance { Analytic, Discretized };

struct SpectrumFilters {
  double tau_im = 1e-6;
  double lambda_min = 1e-8;
  /// Multiple of scale * sqrt(eps * |L|) added to lambda_min to catch the
  /// roundoff splitting of the defective zero eigenvalue.
  double near_zero_safety = 100.0;
};

struct SpectrumResult {
  std::vector<double> lambdas;  ///< sorted real eigenvalues
  std::vector<double> im_residual;  ///< |Im| of each retained eigenvalue
  std::vector<std::complex<double>> near_zero;
  std::vector<std::complex<double>> discarded_complex;
  double lambda_cut = 0.0;
  double near_zero_threshold = 0.0;
  Provenance provenance = Provenance::Discretized;
  Eigen::Index pencil_size = 0;  ///< m, zero for analytic spectra

  std::size_t total_count() const {
    return lambdas.size() + near_zero.size() + discarded_complex.size();
  }
};

SpectrumResult solve_spectrum(const Linearization& lin, const SpectrumFilters& filters = {});

/// Constant-coefficient and round-sphere models with closed-form spectra.
struct AnalyticModel {
  enum class Kind { FlatTorus, ShiftTorus, Sphere };
  Kind kind = Kind::FlatTorus;
  std::vector<double> periods{2.0 * std::numbers::pi, 2.0 * std::numbers::pi};
  std::vector<double> shift;  ///< constant w^j (torus kinds)
  double lapse = 1.0;         ///< constant N (torus kinds)
  double mass = 0.0;          ///< sphere: W = mass^2
  std::string name;
};

/// All eigenvalues with |lambda| <= cutoff. Torus: lambda = -w.k +- N|k| for
/// k != 0 on the dual lattice (k = 0 goes to near_zero). Sphere:
/// +-sqrt(l(l+1) + m^2) with multiplicity 2l + 1.
SpectrumResult analytic_spectrum(const AnalyticModel& model, double cutoff);

/// #{j : 0 < lambda_j <= lambda}; DomainError beyond lambda_cut.
std::size_t counting_function(const SpectrumResult& spec, double lambda);

/// Smallest t at which eigenvalues beyond lambda_cut contribute < 1e-8 each.
double t_floor(const SpectrumResult& spec);

/// sum exp(-t lambda_j^2) over |lambda_j| <= lambda_cut, plus the near-zero
/// part when requested.
double heat_trace(const SpectrumResult& spec, double t, bool include_near_zero = true);

struct HeatFitOptions {
  int k_max = 2;
  int samples = 24;
  bool include_near_zero = true;
  bool half_power = true;  ///< adds the t^{-(n-2)/2} diagnostic term
};

struct HeatExpansionFit {
  double t_min = 0.0;
  double t_max = 0.0;
  std::vector<double> t;
  std::vector<double> trace;
  PowerFit fit;
  double a0 = 0.0;
  double a1 = 0.0;
  double a_half = 0.0;
  double residual = 0.0;          ///< max |trace - model|
  double omitted_term = 0.0;      ///< max of t^{first omitted power} on the window
};

HeatExpansionFit fit_heat_expansion(const SpectrumResult& spec, int n, double t_min, double t_max,
                                    const HeatFitOptions& options = {});

struct WeylCheck {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double fitted = 0.0;
  double predicted = 0.0;
  double relative_error = 0.0;
  int samples = 0;
};

/// Least-squares constant for N(lambda) / lambda^{n-1} on the window.
WeylCheck weyl_check(const SpectrumResult& spec, int n, double predicted, double lambda_min,
                     double lambda_max, int samples = 200);
WeylCheck weyl_check(const SpectrumResult& spec, const geometry::StationaryData& data,
                     double lambda_min, double lambda_max, int samples = 200);

/// Numeric residue of sum_j |lambda_j|^{-2s} at s = (n-1)/2 from the spectrum
/// alone: the direct sum over 0 < |lambda| <= lambda_max plus a tail fitted to
/// the counting function at lambda_max, evaluated at s = (n-1)/2 + delta and
/// Richardson-extrapolated in delta.
struct ZetaResidueEstimate {
  double s = 0.0;
  double lambda_max = 0.0;
  std::array<double, 2> deltas{0.02, 0.01};
  std::array<double, 2> scaled{};  ///< delta * zeta(s + delta)
  double residue = 0.0;
};

ZetaResidueEstimate zeta_residue_estimate(const SpectrumResult& spec, int n, double lambda_max);

}  // namespace kleinweyl::spectrum
