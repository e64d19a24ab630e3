#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace kleinweyl {

/// Flat periodic coordinate chart on the Cauchy surface, d in {2, 3}.
///
/// Grid points are stored in row-major order with the last axis fastest.
class PeriodicChart {
 public:
  PeriodicChart() = default;
  PeriodicChart(std::vector<int> sizes, std::vector<double> periods);

  int dim() const noexcept { return static_cast<int>(sizes_.size()); }
  /// Spacetime dimension n = d + 1.
  int spacetime_dim() const noexcept { return dim() + 1; }
  const std::vector<int>& sizes() const noexcept { return sizes_; }
  const std::vector<double>& periods() const noexcept { return periods_; }
  int size(int axis) const { return sizes_.at(axis); }
  double period(int axis) const { return periods_.at(axis); }
  std::size_t point_count() const noexcept { return count_; }

  double spacing(int axis) const { return periods_[axis] / sizes_[axis]; }
  /// Volume of one grid cell (coordinate measure).
  double cell_volume() const noexcept;
  /// Coordinate volume of the chart, the product of the periods.
  double coordinate_volume() const noexcept;

  std::size_t index(std::span<const int> multi) const;
  std::array<int, 3> multi_index(std::size_t flat) const;
  /// Coordinate of grid point `flat` along `axis`.
  double coordinate(std::size_t flat, int axis) const;
  /// Stride of `axis` in the flat index.
  std::size_t stride(int axis) const { return strides_.at(axis); }

  bool operator==(const PeriodicChart&) const = default;

 private:
  std::vector<int> sizes_;
  std::vector<double> periods_;
  std::vector<std::size_t> strides_;
  std::size_t count_ = 0;
};

/// Tensor type of a Field. `extent` of the field is the index range
/// (d for spatial tensors, d + 1 for spacetime tensors).
enum class Rank { Scalar, Vector, Covector, Sym2 };

/// Grid samples of a tensor on a PeriodicChart; one Eigen array per stored
/// component. Symmetric 2-tensors store the upper triangle only, so symmetry
/// holds by construction.
class Field {
 public:
  using Values = Eigen::ArrayXd;

  Field() = default;
  Field(PeriodicChart chart, Rank rank, int extent);

  static Field scalar(const PeriodicChart& chart) { return {chart, Rank::Scalar, 1}; }
  static Field scalar(const PeriodicChart& chart, Values values);
  static Field vector(const PeriodicChart& chart, int extent) { return {chart, Rank::Vector, extent}; }
  static Field covector(const PeriodicChart& chart, int extent) { return {chart, Rank::Covector, extent}; }
  static Field sym2(const PeriodicChart& chart, int extent) { return {chart, Rank::Sym2, extent}; }

  const PeriodicChart& chart() const noexcept { return chart_; }
  Rank rank() const noexcept { return rank_; }
  int extent() const noexcept { return extent_; }
  std::size_t component_count() const noexcept { return comps_.size(); }

  Values& values() { return comps_.front(); }
  const Values& values() const { return comps_.front(); }
  Values& operator[](int i) { return comps_.at(static_cast<std::size_t>(i)); }
  const Values& operator[](int i) const { return comps_.at(static_cast<std::size_t>(i)); }
  Values& operator()(int i, int j) { return comps_[sym_slot(i, j)]; }
  const Values& operator()(int i, int j) const { return comps_[sym_slot(i, j)]; }

  bool all_finite() const;

 private:
  std::size_t sym_slot(int i, int j) const;

  PeriodicChart chart_;
  Rank rank_ = Rank::Scalar;
  int extent_ = 1;
  std::vector<Values> comps_;
};

}  // namespace kleinweyl
