#include "kleinweyl/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "kleinweyl/error.hpp"

namespace kleinweyl {

double PowerFit::coefficient(double power) const {
  for (std::size_t j = 0; j < powers.size(); ++j) {
    if (std::abs(powers[j] - power) < 1e-12) return coefficients[j];
  }
  throw DomainError("PowerFit: power not in the fitted basis");
}

double PowerFit::evaluate(double t) const {
  double v = 0.0;
  for (std::size_t j = 0; j < powers.size(); ++j) v += coefficients[j] * std::pow(t, powers[j]);
  return v;
}

PowerFit fit_powers(std::span<const double> t, std::span<const double> y,
                    std::span<const double> powers, double weight_exponent,
                    double max_condition) {
  const auto m = static_cast<Eigen::Index>(t.size());
  const auto k = static_cast<Eigen::Index>(powers.size());
  if (t.size() != y.size()) throw DomainError("fit_powers: sample length mismatch");
  if (m < k) throw DomainError("fit_powers: fewer samples than basis functions");
  Eigen::MatrixXd design(m, k);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(t[i] > 0.0)) throw DomainError("fit_powers: abscissae must be positive");
    const double w = std::pow(t[i], weight_exponent);
    for (Eigen::Index j = 0; j < k; ++j) design(i, j) = w * std::pow(t[i], powers[j]);
    rhs[i] = w * y[i];
  }
  Eigen::VectorXd scale = design.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < k; ++j) {
    if (scale[j] == 0.0) scale[j] = 1.0;
  }
  const Eigen::MatrixXd equilibrated = design * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(equilibrated, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv[k - 1] > 0.0 ? sv[0] / sv[k - 1] : std::numeric_limits<double>::infinity();
  if (cond > max_condition) {
    std::ostringstream os;
    os << "fit_powers: ill-conditioned fit (condition " << cond
       << "); narrow the window or drop basis powers";
    throw NumericalError(os.str());
  }
  const Eigen::VectorXd scaled = svd.solve(rhs);
  const Eigen::VectorXd coef = scaled.cwiseQuotient(scale);

  PowerFit fit;
  fit.powers.assign(powers.begin(), powers.end());
  fit.coefficients.assign(coef.data(), coef.data() + k);
  fit.condition = cond;
  const Eigen::VectorXd wres = rhs - design * coef;
  fit.weighted_residual_rms = std::sqrt(wres.squaredNorm() / static_cast<double>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    fit.residual_norm = std::max(fit.residual_norm, std::abs(y[i] - fit.evaluate(t[i])));
  }
  // covariance sigma^2 (A^T A)^{-1} via the SVD of the equilibrated matrix
  const double dof = static_cast<double>(std::max<Eigen::Index>(1, m - k));
  const double sigma2 = wres.squaredNorm() / dof;
  const Eigen::MatrixXd vs = svd.matrixV() * sv.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd cov =
      sigma2 * scale.cwiseInverse().asDiagonal() * (vs * vs.transpose()) * scale.cwiseInverse().asDiagonal();
  fit.covariance.resize(static_cast<std::size_t>(k * k));
  for (Eigen::Index i = 0; i < k; ++i) {
    fit.standard_errors.push_back(std::sqrt(cov(i, i)));
    for (Eigen::Index j = 0; j < k; ++j) fit.covariance[static_cast<std::size_t>(i * k + j)] = cov(i, j);
  }
  return fit;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw DomainError("log_spaced: bad range");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
  out.back() = hi;
  return out;
}

}  // namespace kleinweyl
