#include "kleinweyl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "kleinweyl/error.hpp"

namespace kleinweyl {
namespace {

using cplx = std::complex<double>;

// Applies a 1D transform along `axis` for every line of the grid.
template <class Op>
void for_each_line(const std::vector<int>& sizes, int axis, std::vector<cplx>& data, Op&& op) {
  const int d = static_cast<int>(sizes.size());
  std::vector<std::size_t> strides(d, 1);
  for (int a = d - 2; a >= 0; --a) strides[a] = strides[a + 1] * sizes[a + 1];
  const std::size_t total = strides[0] * sizes[0];
  const int n = sizes[axis];
  const std::size_t stride = strides[axis];
  std::vector<cplx> line(n), out(n);
  for (std::size_t base = 0; base < total; ++base) {
    if ((base / stride) % n != 0) continue;
    for (int i = 0; i < n; ++i) line[i] = data[base + i * stride];
    op(line, out);
    for (int i = 0; i < n; ++i) data[base + i * stride] = out[i];
  }
}

int signed_frequency(int i, int n) { return i <= (n - 1) / 2 ? i : i - n; }

}  // namespace

Eigen::ArrayXd spectral_derivative(const PeriodicChart& chart, const Eigen::ArrayXd& f, int axis) {
  if (axis < 0 || axis >= chart.dim()) throw DomainError("spectral_derivative: bad axis");
  if (static_cast<std::size_t>(f.size()) != chart.point_count()) {
    throw DomainError("spectral_derivative: sample count mismatch");
  }
  const int n = chart.size(axis);
  const double omega = 2.0 * std::numbers::pi / chart.period(axis);
  std::vector<cplx> data(f.data(), f.data() + f.size());
  Eigen::FFT<double> fft;
  for_each_line(chart.sizes(), axis, data, [&](std::vector<cplx>& line, std::vector<cplx>& out) {
    std::vector<cplx> spec;
    fft.fwd(spec, line);
    for (int i = 0; i < n; ++i) {
      const int k = signed_frequency(i, n);
      spec[i] *= (2 * i == n) ? cplx{0.0, 0.0} : cplx{0.0, omega * k};
    }
    fft.inv(out, spec);
  });
  Eigen::ArrayXd result(f.size());
  for (Eigen::Index p = 0; p < f.size(); ++p) result[p] = data[p].real();
  return result;
}

Field spectral_derivative(const Field& f, int axis) {
  Field out(f.chart(), f.rank(), f.extent());
  for (std::size_t c = 0; c < f.component_count(); ++c) {
    out[static_cast<int>(c)] = spectral_derivative(f.chart(), f[static_cast<int>(c)], axis);
  }
  return out;
}

std::vector<cplx> fourier_coefficients(const PeriodicChart& chart, const Eigen::ArrayXd& f) {
  std::vector<cplx> data(f.data(), f.data() + f.size());
  Eigen::FFT<double> fft;
  for (int a = 0; a < chart.dim(); ++a) {
    for_each_line(chart.sizes(), a, data, [&](std::vector<cplx>& line, std::vector<cplx>& out) {
      fft.fwd(out, line);
    });
  }
  const double scale = 1.0 / static_cast<double>(chart.point_count());
  for (auto& c : data) c *= scale;
  return data;
}

TrigInterpolant::TrigInterpolant(const PeriodicChart& chart,
                                 std::span<const Eigen::ArrayXd> components,
                                 double relative_threshold)
    : dim_(chart.dim()), components_(static_cast<int>(components.size())) {
  for (int a = 0; a < dim_; ++a) {
    half_.push_back(chart.size(a) / 2);
    omega_.push_back(2.0 * std::numbers::pi / chart.period(a));
  }
  std::vector<std::vector<cplx>> spectra;
  double peak = 0.0;
  for (const auto& comp : components) {
    spectra.push_back(fourier_coefficients(chart, comp));
    for (const auto& c : spectra.back()) peak = std::max(peak, std::abs(c));
  }
  const double cutoff = relative_threshold * peak;
  // Nyquist coefficients are split evenly between +N/2 and -N/2 so the
  // interpolant stays real off the grid.
  for (std::size_t p = 0; p < chart.point_count(); ++p) {
    const auto m = chart.multi_index(p);
    bool keep = false;
    for (const auto& s : spectra) keep = keep || std::abs(s[p]) > cutoff;
    if (!keep) continue;
    std::array<int, 3> k{0, 0, 0};
    int nyquist_axes = 0;
    for (int a = 0; a < dim_; ++a) {
      k[a] = signed_frequency(m[a], chart.size(a));
      if (2 * m[a] == chart.size(a)) {
        k[a] = -half_[a];
        ++nyquist_axes;
      }
    }
    const double weight = std::ldexp(1.0, -nyquist_axes);
    const int images = 1 << nyquist_axes;
    for (int img = 0; img < images; ++img) {
      std::array<int, 3> kk = k;
      int bit = 0;
      for (int a = 0; a < dim_; ++a) {
        if (2 * m[a] == chart.size(a)) {
          if (img & (1 << bit)) kk[a] = half_[a];
          ++bit;
        }
      }
      waves_.push_back(kk);
      for (const auto& s : spectra) coefs_.push_back(weight * s[p]);
    }
  }
}

void TrigInterpolant::evaluate(std::span<const double> x, std::span<double> values,
                               std::span<double> gradient) const {
  if (static_cast<int>(x.size()) < dim_ || static_cast<int>(values.size()) < components_) {
    throw DomainError("TrigInterpolant::evaluate: buffer too small");
  }
  const bool want_grad = !gradient.empty();
  std::array<std::vector<cplx>, 3> phase;
  for (int a = 0; a < dim_; ++a) {
    const int h = half_[a];
    phase[a].resize(2 * h + 1);
    phase[a][h] = 1.0;
    for (int k = 1; k <= h; ++k) {
      phase[a][h + k] = std::polar(1.0, omega_[a] * k * x[a]);
      phase[a][h - k] = std::conj(phase[a][h + k]);
    }
  }
  std::fill(values.begin(), values.begin() + components_, 0.0);
  if (want_grad) std::fill(gradient.begin(), gradient.begin() + components_ * dim_, 0.0);
  for (std::size_t m = 0; m < waves_.size(); ++m) {
    const auto& k = waves_[m];
    cplx e = phase[0][k[0] + half_[0]];
    for (int a = 1; a < dim_; ++a) e *= phase[a][k[a] + half_[a]];
    const cplx* c = &coefs_[m * components_];
    for (int j = 0; j < components_; ++j) {
      const cplx v = c[j] * e;
      values[j] += v.real();
      if (want_grad) {
        for (int a = 0; a < dim_; ++a) gradient[j * dim_ + a] -= v.imag() * omega_[a] * k[a];
      }
    }
  }
}

Eigen::ArrayXd resample(const PeriodicChart& from, const Eigen::ArrayXd& f,
                        const std::vector<int>& target_sizes) {
  if (static_cast<int>(target_sizes.size()) != from.dim()) {
    throw DomainError("resample: dimension mismatch");
  }
  const Eigen::ArrayXd* comp = &f;
  TrigInterpolant interp(from, std::span<const Eigen::ArrayXd>(comp, 1));
  std::size_t count = 1;
  for (int s : target_sizes) count *= static_cast<std::size_t>(s);
  Eigen::ArrayXd out(static_cast<Eigen::Index>(count));
  const int d = from.dim();
  std::vector<std::size_t> strides(d, 1);
  for (int a = d - 2; a >= 0; --a) strides[a] = strides[a + 1] * target_sizes[a + 1];
  std::array<double, 3> x{};
  double value = 0.0;
  for (std::size_t p = 0; p < count; ++p) {
    for (int a = 0; a < d; ++a) {
      const auto i = (p / strides[a]) % static_cast<std::size_t>(target_sizes[a]);
      x[a] = from.period(a) * static_cast<double>(i) / target_sizes[a];
    }
    interp.evaluate(std::span<const double>(x.data(), d), std::span<double>(&value, 1));
    out[static_cast<Eigen::Index>(p)] = value;
  }
  return out;
}

}  // namespace kleinweyl
