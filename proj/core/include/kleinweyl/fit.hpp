#pragma once

#include <span>
#include <vector>

namespace kleinweyl {

/// Result of a weighted least-squares fit y(t) ~ sum_j c_j t^{p_j}.
struct PowerFit {
  std::vector<double> powers;
  std::vector<double> coefficients;
  std::vector<double> standard_errors;  ///< from the weighted residual variance
  std::vector<double> covariance;       ///< row-major k x k coefficient covariance
  double residual_norm = 0.0;           ///< max_i |y_i - model(t_i)|, unweighted
  double weighted_residual_rms = 0.0;
  double condition = 0.0;  ///< 2-norm condition of the column-equilibrated design matrix

  double coefficient(double power) const;
  double evaluate(double t) const;
};

/// Fits sample pairs (t_i, y_i) with residual weights w_i = t_i^{weight_exponent}.
/// Throws NumericalError when the equilibrated design matrix has condition
/// beyond `max_condition`.
PowerFit fit_powers(std::span<const double> t, std::span<const double> y,
                    std::span<const double> powers, double weight_exponent,
                    double max_condition = 1e10);

/// `count` log-spaced samples in [lo, hi].
std::vector<double> log_spaced(double lo, double hi, int count);

}  // namespace kleinweyl
