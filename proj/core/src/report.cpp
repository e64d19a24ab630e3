#include "kleinweyl/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "kleinweyl/catalog.hpp"
#include "kleinweyl/coefficients.hpp"
#include "kleinweyl/error.hpp"
#include "kleinweyl/geometry.hpp"
#include "kleinweyl/hadamard.hpp"
#include "kleinweyl/parallel.hpp"
#include "kleinweyl/special.hpp"
#include "kleinweyl/spectrum.hpp"

namespace kleinweyl::harness {
namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

// Analytic torus spectra used by the verify suite are cut off here.
constexpr double kAnalyticTorusCutoff = 80.0;
constexpr std::array<double, 2> kSphereHeatWindow{0.01, 0.2};
constexpr std::array<double, 2> kTorusHeatWindow{0.005, 0.2};
constexpr double kDiscretizedHeatTmax = 0.7;

Check make_check(std::string name, double value, double expected, double tolerance,
                 bool relative = false, std::string note = {}) {
  Check c{std::move(name), value, expected, tolerance, relative, false, std::move(note)};
  double err = std::abs(value - expected);
  if (relative) err /= std::max(std::abs(expected), std::numeric_limits<double>::min());
  c.passed = std::isfinite(value) && err <= tolerance;
  return c;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string grid_label(const RunConfig& config) {
  std::string s;
  for (std::size_t i = 0; i < config.grid.size(); ++i) {
    if (i) s += 'x';
    s += std::to_string(config.grid[i]);
  }
  return s;
}

class Context {
 public:
  explicit Context(const RunConfig& config)
      : config_(config), model_(build_model(config.model, config.grid)) {}

  const RunConfig& config() const { return config_; }
  const Model& model() const { return model_; }
  int n() const {
    return model_.spec.analytic_only() ? 3 : model_.require_data().spacetime_dim();
  }
  double tol(double t) const { return t * config_.tolerance_scale; }
  const Tolerances& tolerances() const { return config_.tolerances; }

 private:
  const RunConfig& config_;
  Model model_;
};

// ---------------------------------------------------------------------------
// coefficients

void add_row(Table& t, const Context& ctx, const std::string& quantity, double value,
             const std::string& tolerance = {}) {
  t.rows.push_back({quantity, format_number(value), std::to_string(ctx.n()), ctx.model().spec.name,
                    ctx.model().spec.analytic_only() ? "analytic" : grid_label(ctx.config()),
                    tolerance});
}

void coefficients_suite(const Context& ctx, SuiteResult& out) {
  out.table.header = {"quantity", "value", "n", "model", "grid", "tolerance_used"};
  const auto& tols = ctx.tolerances();
  const Model& model = ctx.model();

  if (model.spec.analytic_only()) {
    const auto a = sphere_heat_coefficients(model.spec.mass);
    const double weyl = unit_ball_volume(2) * 4.0 * kPi;
    add_row(out.table, ctx, "weyl_constant", weyl);
    add_row(out.table, ctx, "a0", a[0]);
    add_row(out.table, ctx, "a1", a[1]);
    for (const auto& z : coefficients::zeta_residues({a[0], a[1]}, 3)) {
      add_row(out.table, ctx, "zeta_residue_s=" + format_number(z.s), z.residue);
    }
    return;
  }

  const auto& data = model.require_data();
  const auto rep = coefficients::coefficient_report(data);
  const int n = rep.n;
  std::vector<std::pair<std::string, double>> values = {
      {"c0_integral", rep.c0_integral},   {"c2_tilde_integral", rep.c2_tilde_integral},
      {"weyl_constant", rep.weyl_constant}, {"a0", rep.a0},
      {"a1", rep.a1}};
  for (const auto& z : rep.zeta_residues) {
    values.emplace_back("zeta_residue_s=" + format_number(z.s), z.residue);
  }
  const std::string id_tol = format_number(ctx.tol(tols.identity));
  const bool closed_form = model.analytic.has_value();
  for (const auto& [q, v] : values) {
    const bool checked = closed_form && (q == "weyl_constant" || q == "a0" || q == "a1");
    add_row(out.table, ctx, q, v, checked ? id_tol : std::string{});
    if (!std::isfinite(v)) out.checks.push_back(make_check(q + " finite", v, 0.0, 0.0));
  }

  if (closed_form) {
    // constant N and w on the unit-metric torus
    const auto& a = *model.analytic;
    double w2 = 0.0;
    for (double w : a.shift) w2 += w * w;
    const double zinv = std::pow(a.lapse * a.lapse - w2, -0.5 * n);
    const double volume = data.chart().coordinate_volume();
    const double weyl = unit_ball_volume(n - 1) * a.lapse * zinv * volume;
    const double a0 = 2.0 / std::pow(4.0 * kPi, 0.5 * (n - 1)) * a.lapse * zinv * volume;
    out.checks.push_back(make_check("weyl_constant closed form", rep.weyl_constant, weyl,
                                    ctx.tol(tols.identity), true));
    out.checks.push_back(make_check("a0 closed form", rep.a0, a0, ctx.tol(tols.identity), true));
    out.checks.push_back(make_check("a1 vanishes", rep.a1, 0.0, ctx.tol(tols.identity)));
  }
  if (model.spec.ultrastatic()) {
    const auto geom = geometry::analyze(data);
    const Eigen::ArrayXd expected = geom.curv.scal.values() / 6.0 - data.potential().values();
    const double err = (rep.c2_tilde_density.values() - expected).abs().maxCoeff();
    out.checks.push_back(make_check("c2_tilde = scal/6 - W", err, 0.0, ctx.tol(tols.reduction),
                                    false, "max pointwise deviation"));
  }
}

// ---------------------------------------------------------------------------
// spectrum and verify share the eigenvalues

struct SpectrumBundle {
  spectrum::SpectrumResult spec;
  std::optional<spectrum::PencilDiagnostics> diagnostics;
  std::size_t expected_total = 0;
};

SpectrumBundle compute_spectrum(const Context& ctx) {
  const Model& model = ctx.model();
  SpectrumBundle b;
  if (model.spec.analytic_only()) {
    const double l = model.spec.l_max;
    b.spec = spectrum::analytic_spectrum(*model.analytic,
                                         std::sqrt(l * (l + 1.0) + model.spec.mass * model.spec.mass));
    b.expected_total = b.spec.total_count();
    return b;
  }
  const auto pencil = spectrum::build_pencil(model.require_data(), ctx.config().truncation);
  b.diagnostics = spectrum::pencil_diagnostics(pencil);
  b.spec = spectrum::solve_spectrum(spectrum::linearize(pencil));
  b.expected_total = static_cast<std::size_t>(2 * pencil.m);
  return b;
}

const char* provenance_name(spectrum::Provenance p) {
  return p == spectrum::Provenance::Analytic ? "analytic" : "discretized";
}

void spectrum_suite(const Context& ctx, const SpectrumBundle& b, SuiteResult& out) {
  const auto& s = b.spec;
  const auto& tols = ctx.tolerances();
  out.table.header = {"index", "class", "re", "im"};
  std::size_t idx = 0;
  auto row = [&](const char* cls, double re, double im) {
    out.table.rows.push_back({std::to_string(idx++), cls, format_number(re), format_number(im)});
  };
  for (std::size_t i = 0; i < s.lambdas.size(); ++i) row("real", s.lambdas[i], s.im_residual[i]);
  for (const auto& z : s.near_zero) row("near_zero", z.real(), z.imag());
  for (const auto& z : s.discarded_complex) row("complex", z.real(), z.imag());

  out.checks.push_back(make_check("eigenvalue count", static_cast<double>(s.total_count()),
                                  static_cast<double>(b.expected_total), 0.0, false,
                                  std::string(provenance_name(s.provenance)) + " spectrum"));
  if (!b.diagnostics) return;

  out.checks.push_back(make_check("near-zero count", static_cast<double>(s.near_zero.size()), 2.0,
                                  0.0, false, "constant solutions 1 and t"));
  out.checks.push_back(make_check("g^tt < 0", b.diagnostics->a_max < 0.0 ? 0.0 : 1.0, 0.0, 0.0,
                                  false, "a_max = " + format_number(b.diagnostics->a_max)));
  out.checks.push_back(make_check("B_r anti-self-adjoint", b.diagnostics->b_asymmetry, 0.0,
                                  ctx.tol(tols.identity)));
  out.checks.push_back(make_check("C self-adjoint", b.diagnostics->c_asymmetry, 0.0,
                                  ctx.tol(tols.identity)));

  const auto& model = ctx.model();
  if (!model.analytic) return;
  // closed-form comparison below an edge kept clear of exact eigenvalues
  const auto exact = spectrum::analytic_spectrum(*model.analytic, 2.0 * s.lambda_cut);
  double edge = s.lambda_cut;
  auto near_edge = [&](double e) {
    return std::any_of(exact.lambdas.begin(), exact.lambdas.end(),
                       [&](double l) { return std::abs(std::abs(l) - e) < 1e-6; });
  };
  while (near_edge(edge)) edge -= 1e-3;
  auto within = [&](const std::vector<double>& v) {
    std::vector<double> r;
    std::copy_if(v.begin(), v.end(), std::back_inserter(r),
                 [&](double l) { return std::abs(l) <= edge; });
    return r;
  };
  const auto a = within(s.lambdas);
  const auto e = within(exact.lambdas);
  out.checks.push_back(make_check("eigenvalues below cutoff", static_cast<double>(a.size()),
                                  static_cast<double>(e.size()), 0.0, false, "closed form count"));
  if (a.size() == e.size()) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      worst = std::max(worst, std::abs(a[i] - e[i]) / std::max(std::abs(e[i]), 1.0));
    }
    out.checks.push_back(make_check("closed-form eigenvalues", worst, 0.0, ctx.tol(tols.eigen),
                                    false, "max relative deviation"));
  }
}

struct HeatReference {
  double a0 = 0.0;
  double a1 = 0.0;
  double weyl = 0.0;  ///< predicted N(lambda) / lambda^{n-1}
};

HeatReference heat_reference(const Context& ctx) {
  const Model& model = ctx.model();
  if (model.spec.analytic_only()) {
    const auto a = sphere_heat_coefficients(model.spec.mass);
    return {a[0], a[1], 1.0};
  }
  const auto& data = model.require_data();
  const auto geom = geometry::analyze(data);
  const auto h = coefficients::heat_coefficients(data, geom.curv, geom.killing);
  const int n = data.spacetime_dim();
  return {h.a0, h.a1, coefficients::weyl_constant(data) / std::pow(2.0 * kPi, n - 1)};
}

void verify_suite(const Context& ctx, const SpectrumBundle& b, SuiteResult& out) {
  const auto& tols = ctx.tolerances();
  const Model& model = ctx.model();
  const int n = ctx.n();
  const HeatReference ref = heat_reference(ctx);

  // closed-form spectra where they exist, otherwise the discretized one
  const bool sphere = model.spec.analytic_only();
  const bool analytic = sphere || model.analytic.has_value();
  const spectrum::SpectrumResult spec =
      (analytic && !sphere) ? spectrum::analytic_spectrum(*model.analytic, kAnalyticTorusCutoff)
                            : b.spec;

  std::array<double, 2> tw;
  if (ctx.config().t_window) {
    tw = *ctx.config().t_window;
  } else if (sphere) {
    tw = kSphereHeatWindow;
  } else if (analytic) {
    tw = kTorusHeatWindow;
  } else {
    tw = {spectrum::t_floor(spec), kDiscretizedHeatTmax};
  }
  if (!(tw[0] < tw[1])) {
    throw NumericalError("heat fit window [" + format_number(tw[0]) + ", " +
                         format_number(tw[1]) + "] is empty; raise the truncation");
  }
  const auto fit = spectrum::fit_heat_expansion(spec, n, tw[0], tw[1]);

  std::array<double, 2> lw;
  if (ctx.config().lambda_window) {
    lw = *ctx.config().lambda_window;
  } else {
    lw = {0.375 * spec.lambda_cut, (analytic ? 1.0 : 0.9) * spec.lambda_cut};
  }
  const auto weyl = spectrum::weyl_check(spec, n, ref.weyl, lw[0], lw[1]);

  const std::string window = "t in [" + short_number(tw[0]) + ", " + short_number(tw[1]) + "]";
  if (sphere) {
    out.checks.push_back(make_check("heat a0", fit.a0, ref.a0, ctx.tol(tols.heat_a0), false, window));
    out.checks.push_back(make_check("heat a1", fit.a1, ref.a1, ctx.tol(tols.heat_a1), false, window));
  } else if (analytic) {
    out.checks.push_back(make_check("heat a0", fit.a0, ref.a0, ctx.tol(tols.heat_a0), true, window));
    out.checks.push_back(make_check("heat a1", fit.a1, ref.a1, ctx.tol(tols.heat_a1), false, window));
  } else {
    out.checks.push_back(
        make_check("heat a0", fit.a0, ref.a0, ctx.tol(10.0 * tols.heat_a0), true, window));
    out.checks.push_back(
        make_check("heat a1", fit.a1, ref.a1, ctx.tol(tols.heat_discretized), true, window));
  }
  out.checks.push_back(make_check("half-power coefficient / a0", std::abs(fit.a_half) / fit.a0, 0.0,
                                  ctx.tol(tols.heat_half), false, window));
  out.checks.push_back(make_check("weyl constant", weyl.fitted, ref.weyl,
                                  ctx.tol(analytic ? tols.weyl : tols.weyl_discretized), true,
                                  "lambda in [" + short_number(lw[0]) + ", " +
                                      short_number(lw[1]) + "]"));

  if (analytic && !sphere) {
    // residue of the Epstein-type sum at s = (n-1)/2 against a0 / Gamma((n-1)/2)
    const auto est = spectrum::zeta_residue_estimate(spec, n, spec.lambda_cut);
    out.checks.push_back(make_check("zeta residue (Epstein sum)", est.residue,
                                    ref.a0 / std::tgamma(0.5 * (n - 1)), ctx.tol(tols.zeta), true,
                                    "direct sum to lambda = " + short_number(spec.lambda_cut)));
  }
}

// ---------------------------------------------------------------------------
// expansion

void expansion_suite(const Context& ctx, SuiteResult& out) {
  const auto& cfg = ctx.config().expansion;
  const hadamard::LocalModel local(ctx.model().require_data());
  std::mt19937 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, local.data().chart().point_count() - 1);
  std::vector<std::size_t> points(static_cast<std::size_t>(cfg.points));
  for (auto& p : points) p = pick(rng);
  const auto t = log_spaced(cfg.t_window[0], cfg.t_window[1], cfg.samples);

  std::vector<hadamard::DiagonalExpansion> results(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    results[i] = hadamard::diagonal_expansions(local, points[i], t);
  });

  out.table.header = {"model", "point", "quantity", "power", "fitted", "predicted", "rel_err"};
  const double tol = ctx.tol(ctx.tolerances().expansion);
  for (const auto& e : results) {
    const std::string at = " at point " + std::to_string(e.point);
    if (!e.complete) {
      std::string why;
      for (const auto& f : e.failures) why += (why.empty() ? "" : "; ") + f;
      out.checks.push_back(make_check("geodesic shooting" + at, 1.0, 0.0, 0.0, false, why));
    }
    for (const auto* f : {&e.gamma, &e.dnu_gamma, &e.v0}) {
      const auto errs = hadamard::coefficient_errors(*f);
      for (std::size_t j = 0; j < errs.size(); ++j) {
        const double power = f->fit.powers[j];
        out.table.rows.push_back({ctx.model().spec.name, std::to_string(e.point), f->quantity,
                                  format_number(power), format_number(f->fit.coefficients[j]),
                                  format_number(f->predicted[j]), format_number(errs[j])});
        if (!f->asserted[j]) continue;
        out.checks.push_back(make_check(f->quantity + " t^" + format_number(power) + at, errs[j],
                                        0.0, tol, false, "scale-floored relative error"));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// invariance

void invariance_suite(const Context& ctx, SuiteResult& out) {
  const auto& data = ctx.model().require_data();
  const auto& tols = ctx.tolerances();
  const auto& shear = ctx.config().shear;
  const Field f = Field::scalar(data.chart(), sample(shear.f, data.chart()));
  const auto r = coefficients::invariance_suite(data, f, shear.epsilon);
  const double inv = ctx.tol(tols.invariance);
  const double exact = ctx.tol(tols.exact);
  out.checks.push_back(make_check("c2_tilde integral change", r.c2_relative_change, 0.0, inv));
  out.checks.push_back(make_check("a0 change", r.a0_relative_change, 0.0, inv));
  out.checks.push_back(make_check("a1 change", r.a1_relative_change, 0.0, inv));
  out.checks.push_back(make_check("weyl constant change", r.weyl_relative_change, 0.0, inv));
  out.checks.push_back(make_check("N^2 - |w|^2 defect", r.killing_norm_defect, 0.0, exact));
  out.checks.push_back(make_check("N sqrt det h defect", r.volume_defect, 0.0, exact));
  out.checks.push_back(make_check("conformal identity residual", r.identity_residual, 0.0, inv));
  out.checks.push_back(
      make_check("conformal identity residual (sheared)", r.identity_residual_sheared, 0.0, inv));

  const bool trivial = (f.values() == 0.0).all() || shear.epsilon == 0.0;
  if (trivial) return;
  const auto v = coefficients::variation_check(data, f);
  for (const auto& e : v.entries) {
    std::string note = "sigma = " + std::to_string(v.sigma) + ", scale " + short_number(e.scale);
    if (!e.note.empty()) note += "; " + e.note;
    if (!e.asserted) note += "; diagnostic only";
    Check c = make_check(e.name, e.deviation, 0.0, ctx.tol(tols.variation), false, note);
    if (!e.asserted) c.passed = true;
    out.checks.push_back(std::move(c));
  }
  out.checks.push_back(make_check("delta(N^2 - |w|^2)", v.killing_norm_variation, 0.0,
                                  ctx.tol(tols.variation_zero)));
  out.checks.push_back(make_check("delta(N sqrt det h)", v.volume_variation, 0.0,
                                  ctx.tol(tols.variation_zero)));
}

// ---------------------------------------------------------------------------

void fill_check_table(SuiteResult& s) {
  s.table.header = {"name", "value", "expected", "tolerance", "relative", "passed"};
  s.table.rows.clear();
  for (const auto& c : s.checks) {
    s.table.rows.push_back({c.name, format_number(c.value), format_number(c.expected),
                            format_number(c.tolerance), c.relative ? "1" : "0",
                            c.passed ? "1" : "0"});
  }
}

bool needs_grid(const std::string& suite) {
  return suite == "expansion" || suite == "invariance";
}

template <class F>
void guarded(SuiteResult& s, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const ConfigError& e) {
    s.error = e.what();
    s.error_code = kExitConfig;
  } catch (const std::exception& e) {
    s.error = e.what();
    s.error_code = kExitNumerical;
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

json number_json(double v) { return std::isfinite(v) ? json(v) : json(format_number(v)); }

}  // namespace

bool SuiteResult::passed() const {
  if (skipped) return true;
  if (!error.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

RunReport run_suites(const RunConfig& config) {
  RunReport report;
  report.config = config;
  const Context ctx(config);
  const bool grid = !ctx.model().spec.analytic_only();

  report.suites.resize(config.suites.size());
  std::optional<std::size_t> spectrum_slot, verify_slot;
  std::vector<std::function<void()>> tasks;
  for (std::size_t i = 0; i < config.suites.size(); ++i) {
    SuiteResult& s = report.suites[i];
    s.name = config.suites[i];
    if (needs_grid(s.name) && !grid) {
      s.skipped = true;
      s.skip_reason = "model \"" + ctx.model().spec.name + "\" is analytic-only";
      continue;
    }
    if (s.name == "spectrum") {
      spectrum_slot = i;
    } else if (s.name == "verify") {
      verify_slot = i;
    } else if (s.name == "coefficients") {
      tasks.emplace_back([&ctx, &s] { guarded(s, [&] { coefficients_suite(ctx, s); }); });
    } else if (s.name == "expansion") {
      tasks.emplace_back([&ctx, &s] { guarded(s, [&] { expansion_suite(ctx, s); }); });
    } else if (s.name == "invariance") {
      tasks.emplace_back([&ctx, &s] { guarded(s, [&] { invariance_suite(ctx, s); }); });
    }
  }
  if (spectrum_slot || verify_slot) {
    tasks.emplace_back([&] {
      std::optional<SpectrumBundle> bundle;
      std::string failure;
      int code = kExitOk;
      auto run = [&](std::size_t slot, auto&& suite) {
        SuiteResult& s = report.suites[slot];
        guarded(s, [&] {
          if (!bundle && failure.empty()) {
            try {
              bundle = compute_spectrum(ctx);
            } catch (const ConfigError& e) {
              failure = e.what();
              code = kExitConfig;
            } catch (const std::exception& e) {
              failure = e.what();
              code = kExitNumerical;
            }
          }
          if (!bundle) {
            s.error = "spectrum unavailable: " + failure;
            s.error_code = code;
            return;
          }
          suite(ctx, *bundle, s);
        });
      };
      if (spectrum_slot) run(*spectrum_slot, spectrum_suite);
      if (verify_slot) run(*verify_slot, verify_suite);
    });
  }
  parallel_for(tasks.size(), [&](std::size_t i) { tasks[i](); });

  for (auto& s : report.suites) {
    if (s.name != "spectrum" && s.name != "expansion" && s.name != "coefficients") {
      fill_check_table(s);
    }
    if (s.passed()) continue;
    if (report.first_failing_suite.empty()) {
      report.first_failing_suite = s.name;
      report.exit_code = s.error.empty() ? kExitTolerance : s.error_code;
    }
  }
  return report;
}

std::string summary_text(const RunReport& report) {
  std::ostringstream os;
  os << "model " << report.config.model.name << " (" << to_string(report.config.model.kind)
     << "), ";
  if (report.config.model.analytic_only()) {
    os << "analytic spectrum";
  } else {
    os << "grid " << grid_label(report.config);
  }
  os << ", truncation " << report.config.truncation << ", tolerance scale "
     << format_number(report.config.tolerance_scale) << "\n\n";
  char line[512];
  for (const auto& s : report.suites) {
    std::snprintf(line, sizeof line, "== %s: %s (%.2f s)\n", s.name.c_str(),
                  s.skipped ? "SKIPPED" : (s.passed() ? "PASS" : "FAIL"), s.seconds);
    os << line;
    if (s.skipped) os << "   " << s.skip_reason << "\n";
    if (!s.error.empty()) os << "   error: " << s.error << "\n";
    for (const auto& c : s.checks) {
      std::snprintf(line, sizeof line, "   %-4s %-44s %14.6g  expected %-12.6g tol %-9.3g%s\n",
                    c.passed ? "ok" : "FAIL", c.name.c_str(), c.value, c.expected, c.tolerance,
                    c.relative ? " rel" : "");
      os << line;
      if (!c.note.empty()) os << "        " << c.note << "\n";
    }
    os << "\n";
  }
  if (report.exit_code == kExitOk) {
    os << "all suites passed\n";
  } else {
    os << "first failing suite: " << report.first_failing_suite << " (exit code "
       << report.exit_code << ")\n";
  }
  return os.str();
}

void write_artifacts(const RunReport& report, const std::string& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw ConfigError("cannot create output directory \"" + directory + "\": " + ec.message());
  auto open = [&](const std::string& name) {
    std::ofstream f(fs::path(directory) / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + (fs::path(directory) / name).string());
    return f;
  };

  for (const auto& s : report.suites) {
    if (s.skipped) continue;
    auto f = open(s.name + ".csv");
    auto write_row = [&](const std::vector<std::string>& row) {
      for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << csv_field(row[i]);
      f << '\n';
    };
    write_row(s.table.header);
    for (const auto& r : s.table.rows) write_row(r);
  }

  json j;
  j["config"] = json::parse(to_json(report.config));
  j["exit_code"] = report.exit_code;
  j["first_failing_suite"] = report.first_failing_suite.empty()
                                 ? json(nullptr)
                                 : json(report.first_failing_suite);
  j["suites"] = json::array();
  for (const auto& s : report.suites) {
    json js;
    js["name"] = s.name;
    js["status"] = s.skipped ? "skipped" : (s.passed() ? "pass" : "fail");
    js["seconds"] = s.seconds;
    if (s.skipped) js["skip_reason"] = s.skip_reason;
    if (!s.error.empty()) js["error"] = s.error;
    js["checks"] = json::array();
    for (const auto& c : s.checks) {
      js["checks"].push_back({{"name", c.name},
                              {"value", number_json(c.value)},
                              {"expected", number_json(c.expected)},
                              {"tolerance", number_json(c.tolerance)},
                              {"relative", c.relative},
                              {"passed", c.passed},
                              {"note", c.note}});
    }
    j["suites"].push_back(std::move(js));
  }
  open("report.json") << j.dump(2) << '\n';
  open("summary.txt") << summary_text(report);
}

int run_report(const RunConfig& config) {
  const RunReport report = run_suites(config);
  write_artifacts(report, config.output_dir);
  return report.exit_code;
}

}  // namespace kleinweyl::harness
