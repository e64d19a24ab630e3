#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "kleinweyl/chart.hpp"

namespace kleinweyl {

/// Fourier-collocation derivative of grid samples along `axis`.
/// Exact for trigonometric polynomials resolvable on the grid; the Nyquist
/// mode of an even-sized axis is dropped.
Eigen::ArrayXd spectral_derivative(const PeriodicChart& chart, const Eigen::ArrayXd& f, int axis);
Field spectral_derivative(const Field& f, int axis);

/// Multi-dimensional DFT coefficients normalised so that
/// f(x) = sum_k c_k exp(i k . 2 pi x / L). Frequencies are stored in FFT order.
std::vector<std::complex<double>> fourier_coefficients(const PeriodicChart& chart,
                                                       const Eigen::ArrayXd& f);

/// Trigonometric interpolant of several scalar components sharing one chart.
///
/// Only modes above a relative threshold are retained, so evaluation cost
/// scales with the spectral content of the data rather than the grid size.
class TrigInterpolant {
 public:
  TrigInterpolant() = default;
  TrigInterpolant(const PeriodicChart& chart, std::span<const Eigen::ArrayXd> components,
                  double relative_threshold = 1e-17);

  int dim() const noexcept { return dim_; }
  int component_count() const noexcept { return components_; }
  std::size_t mode_count() const noexcept { return waves_.size(); }

  /// Values at the spatial point `x` (length d). `gradient`, when non-empty,
  /// receives d partial derivatives per component, component-major.
  void evaluate(std::span<const double> x, std::span<double> values,
                std::span<double> gradient = {}) const;

 private:
  int dim_ = 0;
  int components_ = 0;
  std::vector<int> half_;  // N/2 per axis
  std::vector<double> omega_;  // 2 pi / L per axis
  std::vector<std::array<int, 3>> waves_;
  std::vector<std::complex<double>> coefs_;  // mode-major, components fastest
};

/// Samples the trigonometric interpolant of `f` on another chart with the
/// same periods (used to move data onto collocation grids).
Eigen::ArrayXd resample(const PeriodicChart& from, const Eigen::ArrayXd& f,
                        const std::vector<int>& target_sizes);

}  // namespace kleinweyl
