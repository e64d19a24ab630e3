#include "kleinweyl/chart.hpp"

#include <functional>
#include <numeric>
#include <string>
#include <utility>

#include "kleinweyl/error.hpp"

namespace kleinweyl {

PeriodicChart::PeriodicChart(std::vector<int> sizes, std::vector<double> periods)
    : sizes_(std::move(sizes)), periods_(std::move(periods)) {
  if (sizes_.size() != periods_.size()) {
    throw DomainError("chart: sizes and periods differ in length");
  }
  if (sizes_.size() < 2 || sizes_.size() > 3) {
    throw UnsupportedDimension("chart: spatial dimension must be 2 or 3, got " +
                               std::to_string(sizes_.size()));
  }
  for (std::size_t a = 0; a < sizes_.size(); ++a) {
    if (sizes_[a] < 8 || sizes_[a] % 2 != 0) {
      throw DomainError("chart: axis " + std::to_string(a) +
                        " size must be even and >= 8, got " + std::to_string(sizes_[a]));
    }
    if (!(periods_[a] > 0.0)) {
      throw DomainError("chart: axis " + std::to_string(a) + " period must be positive");
    }
  }
  strides_.assign(sizes_.size(), 1);
  for (int a = static_cast<int>(sizes_.size()) - 2; a >= 0; --a) {
    strides_[a] = strides_[a + 1] * static_cast<std::size_t>(sizes_[a + 1]);
  }
  count_ = std::accumulate(sizes_.begin(), sizes_.end(), std::size_t{1},
                           [](std::size_t acc, int s) { return acc * static_cast<std::size_t>(s); });
}

double PeriodicChart::cell_volume() const noexcept {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= spacing(a);
  return v;
}

double PeriodicChart::coordinate_volume() const noexcept {
  return std::accumulate(periods_.begin(), periods_.end(), 1.0, std::multiplies<>());
}

std::size_t PeriodicChart::index(std::span<const int> multi) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim(); ++a) {
    int i = multi[a] % sizes_[a];
    if (i < 0) i += sizes_[a];
    flat += static_cast<std::size_t>(i) * strides_[a];
  }
  return flat;
}

std::array<int, 3> PeriodicChart::multi_index(std::size_t flat) const {
  std::array<int, 3> m{0, 0, 0};
  for (int a = 0; a < dim(); ++a) {
    m[a] = static_cast<int>((flat / strides_[a]) % static_cast<std::size_t>(sizes_[a]));
  }
  return m;
}

double PeriodicChart::coordinate(std::size_t flat, int axis) const {
  const int i = static_cast<int>((flat / strides_[axis]) % static_cast<std::size_t>(sizes_[axis]));
  return spacing(axis) * i;
}

Field::Field(PeriodicChart chart, Rank rank, int extent)
    : chart_(std::move(chart)), rank_(rank), extent_(rank == Rank::Scalar ? 1 : extent) {
  if (extent_ < 1) throw DomainError("field: extent must be positive");
  std::size_t count = 1;
  switch (rank_) {
    case Rank::Scalar: count = 1; break;
    case Rank::Vector:
    case Rank::Covector: count = static_cast<std::size_t>(extent_); break;
    case Rank::Sym2: count = static_cast<std::size_t>(extent_ * (extent_ + 1) / 2); break;
  }
  comps_.assign(count, Values::Zero(static_cast<Eigen::Index>(chart_.point_count())));
}

Field Field::scalar(const PeriodicChart& chart, Values values) {
  Field f = scalar(chart);
  if (values.size() != f.values().size()) throw DomainError("field: sample count mismatch");
  f.values() = std::move(values);
  return f;
}

std::size_t Field::sym_slot(int i, int j) const {
  if (rank_ != Rank::Sym2) throw DomainError("field: pair index on non-symmetric rank");
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= extent_) throw DomainError("field: index out of range");
  // row-major upper triangle
  return static_cast<std::size_t>(i * extent_ - i * (i - 1) / 2 + (j - i));
}

bool Field::all_finite() const {
  for (const auto& c : comps_) {
    if (!c.isFinite().all()) return false;
  }
  return true;
}

}  // namespace kleinweyl
