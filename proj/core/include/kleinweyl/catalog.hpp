#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "kleinweyl/geometry.hpp"
#include "kleinweyl/spectrum.hpp"

namespace kleinweyl::harness {

enum class ModelKind {
  FlatTorusUltrastatic,
  ShiftTorus,
  LapseTorus,
  LapseShiftTorus,
  CurvedHUltrastatic,
  GenericTorus,
  SphereUltrastatic,
};

const std::vector<std::string>& model_kind_names();
std::string to_string(ModelKind kind);
/// ConfigError listing the valid kinds when `name` is unknown.
ModelKind parse_model_kind(const std::string& name);

/// amp * cos(2 pi k.x / L + phase)
struct TrigTerm {
  std::vector<int> k;
  double amplitude = 0.0;
  double phase = 0.0;
};
using TrigSeries = std::vector<TrigTerm>;

/// Constant plus trigonometric terms.
TrigSeries constant(double c, int dim);
Eigen::ArrayXd sample(const TrigSeries& series, const PeriodicChart& chart);

struct ModelSpec {
  std::string name;
  ModelKind kind = ModelKind::FlatTorusUltrastatic;
  std::vector<double> periods;
  TrigSeries lapse;
  std::vector<TrigSeries> shift;                ///< w^j, one series per axis
  std::vector<std::vector<TrigSeries>> metric;  ///< h_jk, symmetric
  TrigSeries potential;
  double mass = 0.0;  ///< sphere only
  int l_max = 200;    ///< sphere only

  int dim() const { return static_cast<int>(periods.size()); }
  bool analytic_only() const { return kind == ModelKind::SphereUltrastatic; }
  bool ultrastatic() const;
};

/// Reference parameters of each kind for d spatial dimensions (periods 2 pi).
ModelSpec default_model(ModelKind kind, int dim = 2);

/// Grid model or analytic handle built from a spec.
struct Model {
  ModelSpec spec;
  std::optional<geometry::StationaryData> data;
  /// Closed-form spectrum when one exists (flat and constant-shift tori, sphere).
  std::optional<spectrum::AnalyticModel> analytic;

  /// DomainError for analytic-only models.
  const geometry::StationaryData& require_data() const;
};

Model build_model(const ModelSpec& spec, const std::vector<int>& grid);

/// Heat coefficients of the analytic sphere, W = m^2.
std::array<double, 2> sphere_heat_coefficients(double mass);

}  // namespace kleinweyl::harness
