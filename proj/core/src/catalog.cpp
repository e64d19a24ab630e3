#include "kleinweyl/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kleinweyl/error.hpp"

namespace kleinweyl::harness {
namespace {

constexpr double kPi = std::numbers::pi;

struct KindName {
  ModelKind kind;
  const char* name;
};
constexpr KindName kKinds[] = {
    {ModelKind::FlatTorusUltrastatic, "flat_torus_ultrastatic"},
    {ModelKind::ShiftTorus, "shift_torus"},
    {ModelKind::LapseTorus, "lapse_torus"},
    {ModelKind::LapseShiftTorus, "lapse_shift_torus"},
    {ModelKind::CurvedHUltrastatic, "curved_h_ultrastatic"},
    {ModelKind::GenericTorus, "generic_torus"},
    {ModelKind::SphereUltrastatic, "sphere_ultrastatic"},
};

TrigTerm term(int dim, std::vector<int> k, double amp, double phase = 0.0) {
  k.resize(static_cast<std::size_t>(dim), 0);
  return {std::move(k), amp, phase};
}

// sin(theta) = cos(theta - pi/2)
constexpr double kSin = -0.5 * kPi;

bool is_constant(const TrigSeries& s, double* value) {
  double v = 0.0;
  for (const auto& t : s) {
    if (std::any_of(t.k.begin(), t.k.end(), [](int c) { return c != 0; })) return false;
    v += t.amplitude * std::cos(t.phase);
  }
  if (value) *value = v;
  return true;
}

}  // namespace

const std::vector<std::string>& model_kind_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& k : kKinds) out.emplace_back(k.name);
    return out;
  }();
  return names;
}

std::string to_string(ModelKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& name) {
  for (const auto& k : kKinds) {
    if (name == k.name) return k.kind;
  }
  std::ostringstream os;
  os << "unknown model kind \"" << name << "\"; valid kinds are:";
  for (const auto& k : kKinds) os << ' ' << k.name;
  throw ConfigError(os.str());
}

TrigSeries constant(double c, int dim) { return {term(dim, {}, c)}; }

Eigen::ArrayXd sample(const TrigSeries& series, const PeriodicChart& chart) {
  const auto np = static_cast<Eigen::Index>(chart.point_count());
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(np);
  for (const auto& t : series) {
    if (static_cast<int>(t.k.size()) != chart.dim()) {
      throw ConfigError("trigonometric term has " + std::to_string(t.k.size()) +
                        " wave-vector components, expected " + std::to_string(chart.dim()));
    }
    for (Eigen::Index p = 0; p < np; ++p) {
      double arg = t.phase;
      for (int a = 0; a < chart.dim(); ++a) {
        arg += 2.0 * kPi * t.k[a] * chart.coordinate(static_cast<std::size_t>(p), a) /
               chart.period(a);
      }
      out[p] += t.amplitude * std::cos(arg);
    }
  }
  return out;
}

bool ModelSpec::ultrastatic() const {
  double n = 0.0;
  if (!is_constant(lapse, &n) || n != 1.0) return false;
  for (const auto& s : shift) {
    double w = 0.0;
    if (!is_constant(s, &w) || w != 0.0) return false;
  }
  return true;
}

ModelSpec default_model(ModelKind kind, int dim) {
  if (dim != 2 && dim != 3) throw ConfigError("model dimension must be 2 or 3");
  ModelSpec m;
  m.kind = kind;
  m.name = to_string(kind);
  m.periods.assign(static_cast<std::size_t>(dim), 2.0 * kPi);
  m.lapse = constant(1.0, dim);
  m.shift.assign(static_cast<std::size_t>(dim), TrigSeries{});
  m.metric.assign(static_cast<std::size_t>(dim), std::vector<TrigSeries>(dim));
  for (int j = 0; j < dim; ++j) m.metric[j][j] = constant(1.0, dim);
  m.potential = {};
  const bool d3 = dim == 3;
  switch (kind) {
    case ModelKind::FlatTorusUltrastatic:
      break;
    case ModelKind::ShiftTorus:
      m.shift[0] = constant(0.5, dim);
      break;
    case ModelKind::LapseTorus:
      m.lapse.push_back(term(dim, {1}, 0.2));
      break;
    case ModelKind::LapseShiftTorus:
      m.lapse.push_back(term(dim, {1}, 0.2));
      m.shift[0] = {term(dim, {}, 0.3), term(dim, {0, 1}, 0.1)};
      for (int j = 0; j < dim; ++j) m.metric[j][j].push_back(term(dim, {1}, 0.1));
      if (d3) m.lapse.push_back(term(dim, {0, 0, 1}, 0.1));
      break;
    case ModelKind::CurvedHUltrastatic:
      for (int j = 0; j < dim; ++j) {
        m.metric[j][j].push_back(term(dim, {1}, 0.2));
        m.metric[j][j].push_back(term(dim, {0, 1}, 0.15, kSin));
      }
      if (d3) m.metric[2][2].push_back(term(dim, {0, 0, 1}, 0.1));
      m.potential = {term(dim, {0, 1}, 0.1)};
      break;
    case ModelKind::GenericTorus:
      m.lapse = {term(dim, {}, 1.0), term(dim, {1}, 0.15), term(dim, {0, 1}, 0.1, kSin)};
      m.shift[0] = {term(dim, {}, 0.2), term(dim, {0, 1}, 0.1, kSin)};
      m.shift[1] = {term(dim, {1}, 0.1)};
      m.metric[0][0].push_back(term(dim, {0, 1}, 0.1));
      m.metric[1][1].push_back(term(dim, {1}, 0.1));
      m.metric[0][1] = {term(dim, {1}, 0.05, kSin)};
      m.potential = constant(0.2, dim);
      if (d3) {
        m.lapse.push_back(term(dim, {0, 0, 1}, 0.05));
        m.shift[2] = {term(dim, {1}, 0.05, kSin)};
        m.metric[2][2].push_back(term(dim, {0, 1}, 0.1));
        m.metric[0][2] = {term(dim, {0, 0, 1}, 0.03)};
      }
      break;
    case ModelKind::SphereUltrastatic:
      m.periods.clear();
      m.lapse.clear();
      m.shift.clear();
      m.metric.clear();
      break;
  }
  return m;
}

const geometry::StationaryData& Model::require_data() const {
  if (!data) {
    throw DomainError("model \"" + spec.name + "\" (" + to_string(spec.kind) +
                      ") is analytic-only; grid operations are not available");
  }
  return *data;
}

Model build_model(const ModelSpec& spec, const std::vector<int>& grid) {
  Model model;
  model.spec = spec;
  if (spec.analytic_only()) {
    if (spec.mass < 0.0) throw ConfigError("sphere mass must be non-negative");
    if (spec.l_max < 1) throw ConfigError("sphere l_max must be at least 1");
    spectrum::AnalyticModel a;
    a.kind = spectrum::AnalyticModel::Kind::Sphere;
    a.mass = spec.mass;
    a.name = spec.name;
    a.periods.clear();
    model.analytic = a;
    return model;
  }
  const int d = spec.dim();
  if (static_cast<int>(grid.size()) != d) {
    throw ConfigError("grid has " + std::to_string(grid.size()) + " axes but the model has " +
                      std::to_string(d));
  }
  if (static_cast<int>(spec.shift.size()) != d || static_cast<int>(spec.metric.size()) != d) {
    throw ConfigError("model \"" + spec.name + "\": shift/metric do not match the dimension");
  }
  PeriodicChart chart(grid, spec.periods);
  Field lapse = Field::scalar(chart, sample(spec.lapse, chart));
  Field shift = Field::vector(chart, d);
  for (int j = 0; j < d; ++j) shift[j] = sample(spec.shift[j], chart);
  Field h = Field::sym2(chart, d);
  for (int j = 0; j < d; ++j) {
    for (int k = j; k < d; ++k) {
      const auto& s = spec.metric[j][k].empty() && k != j ? spec.metric[k][j] : spec.metric[j][k];
      h(j, k) = sample(s, chart);
    }
  }
  Field W = Field::scalar(chart, sample(spec.potential, chart));
  model.data.emplace(chart, std::move(lapse), std::move(shift), std::move(h), std::move(W));

  // closed-form spectrum for constant-coefficient, unit-metric tori
  double nconst = 0.0;
  bool constant_coeffs = is_constant(spec.lapse, &nconst);
  std::vector<double> w(static_cast<std::size_t>(d), 0.0);
  for (int j = 0; j < d && constant_coeffs; ++j) constant_coeffs = is_constant(spec.shift[j], &w[j]);
  for (int j = 0; j < d && constant_coeffs; ++j) {
    for (int k = 0; k < d && constant_coeffs; ++k) {
      double v = 0.0;
      constant_coeffs = is_constant(spec.metric[j][k], &v) && v == (j == k ? 1.0 : 0.0);
    }
  }
  double wconst = 0.0;
  constant_coeffs = constant_coeffs && is_constant(spec.potential, &wconst) && wconst == 0.0;
  if (constant_coeffs) {
    spectrum::AnalyticModel a;
    const bool shifted = std::any_of(w.begin(), w.end(), [](double c) { return c != 0.0; });
    a.kind = shifted ? spectrum::AnalyticModel::Kind::ShiftTorus
                     : spectrum::AnalyticModel::Kind::FlatTorus;
    a.periods = spec.periods;
    a.shift = w;
    a.lapse = nconst;
    a.name = spec.name;
    model.analytic = a;
  }
  return model;
}

std::array<double, 2> sphere_heat_coefficients(double mass) {
  // |Z| = 1, N = 1, area 4 pi, c2_tilde = scal/6 - m^2 with scal = 2
  const double area = 4.0 * kPi;
  const double pref = 2.0 / (4.0 * kPi);
  return {pref * area, pref * area * (1.0 / 3.0 - mass * mass)};
}

}  // namespace kleinweyl::harness
