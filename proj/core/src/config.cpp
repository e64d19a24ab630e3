#include "kleinweyl/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kleinweyl/error.hpp"

namespace kleinweyl::harness {
namespace {

using nlohmann::json;

const std::vector<std::string> kSuites = {"coefficients", "spectrum", "verify", "expansion",
                                          "invariance"};

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config field \"" + field + "\": " + what);
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
      std::string msg = "unknown key \"" + key + "\"; accepted keys are:";
      for (const char* k : keys) msg += std::string(" ") + k;
      fail(where, msg);
    }
  }
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

int integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<int>();
}

std::array<double, 2> window(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) fail(field, "expected [lo, hi]");
  std::array<double, 2> w{number(j[0], field + "[0]"), number(j[1], field + "[1]")};
  if (!(w[0] > 0.0 && w[0] < w[1])) fail(field, "window must satisfy 0 < lo < hi");
  return w;
}

/// A number is a constant; otherwise a list of {k, amplitude, phase} terms.
TrigSeries series(const json& j, int dim, const std::string& field) {
  if (j.is_number()) return constant(number(j, field), dim);
  if (!j.is_array()) fail(field, "expected a number or a list of {k, amplitude, phase} terms");
  TrigSeries out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    check_keys(j[i], f, {"k", "amplitude", "phase"});
    TrigTerm t;
    if (j[i].contains("k")) {
      const auto& k = j[i]["k"];
      if (!k.is_array() || static_cast<int>(k.size()) > dim) {
        fail(f + ".k", "expected at most " + std::to_string(dim) + " integer components");
      }
      for (std::size_t a = 0; a < k.size(); ++a) t.k.push_back(integer(k[a], f + ".k"));
    }
    t.k.resize(static_cast<std::size_t>(dim), 0);
    if (!j[i].contains("amplitude")) fail(f, "missing \"amplitude\"");
    t.amplitude = number(j[i]["amplitude"], f + ".amplitude");
    if (j[i].contains("phase")) t.phase = number(j[i]["phase"], f + ".phase");
    out.push_back(std::move(t));
  }
  return out;
}

json series_json(const TrigSeries& s) {
  json out = json::array();
  for (const auto& t : s) out.push_back({{"k", t.k}, {"amplitude", t.amplitude}, {"phase", t.phase}});
  return out;
}

ModelSpec parse_model(const json& j) {
  check_keys(j, "model",
             {"kind", "name", "periods", "lapse", "shift", "metric", "potential", "mass", "l_max"});
  if (!j.contains("kind") || !j["kind"].is_string()) fail("model.kind", "required string");
  const ModelKind kind = parse_model_kind(j["kind"].get<std::string>());

  int dim = 2;
  if (j.contains("periods")) {
    if (!j["periods"].is_array()) fail("model.periods", "expected a list of numbers");
    dim = static_cast<int>(j["periods"].size());
  }
  if (kind == ModelKind::SphereUltrastatic) {
    ModelSpec m = default_model(kind, 2);
    for (const char* key : {"periods", "lapse", "shift", "metric", "potential"}) {
      if (j.contains(key)) fail(std::string("model.") + key, "not accepted for the analytic sphere");
    }
    if (j.contains("name")) m.name = j["name"].get<std::string>();
    if (j.contains("mass")) m.mass = number(j["mass"], "model.mass");
    if (j.contains("l_max")) m.l_max = integer(j["l_max"], "model.l_max");
    return m;
  }
  if (dim != 2 && dim != 3) fail("model.periods", "spatial dimension must be 2 or 3");
  ModelSpec m = default_model(kind, dim);
  if (j.contains("name")) {
    if (!j["name"].is_string()) fail("model.name", "expected a string");
    m.name = j["name"].get<std::string>();
  }
  if (j.contains("periods")) {
    for (int a = 0; a < dim; ++a) {
      m.periods[a] = number(j["periods"][a], "model.periods");
      if (!(m.periods[a] > 0.0)) fail("model.periods", "periods must be positive");
    }
  }
  if (j.contains("lapse")) m.lapse = series(j["lapse"], dim, "model.lapse");
  if (j.contains("shift")) {
    const auto& s = j["shift"];
    if (!s.is_array() || static_cast<int>(s.size()) != dim) {
      fail("model.shift", "expected " + std::to_string(dim) + " components");
    }
    for (int a = 0; a < dim; ++a) {
      m.shift[a] = series(s[a], dim, "model.shift[" + std::to_string(a) + "]");
    }
  }
  if (j.contains("metric")) {
    const auto& h = j["metric"];
    if (!h.is_array() || static_cast<int>(h.size()) != dim) {
      fail("model.metric", "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " array");
    }
    for (int a = 0; a < dim; ++a) {
      if (!h[a].is_array() || static_cast<int>(h[a].size()) != dim) {
        fail("model.metric", "row " + std::to_string(a) + " has the wrong length");
      }
      for (int b = 0; b < dim; ++b) {
        m.metric[a][b] = series(h[a][b], dim,
                                "model.metric[" + std::to_string(a) + "][" + std::to_string(b) + "]");
      }
    }
  }
  if (j.contains("potential")) m.potential = series(j["potential"], dim, "model.potential");
  if (j.contains("mass")) fail("model.mass", "only accepted for sphere_ultrastatic");
  if (j.contains("l_max")) fail("model.l_max", "only accepted for sphere_ultrastatic");
  return m;
}

void parse_tolerances(const json& j, Tolerances& t) {
  check_keys(j, "tolerances",
             {"weyl", "weyl_discretized", "eigen", "heat_a0", "heat_a1", "heat_half",
              "heat_discretized", "identity", "reduction", "expansion", "invariance", "exact",
              "variation", "variation_zero", "zeta"});
  auto set = [&](const char* key, double& dst) {
    if (j.contains(key)) {
      dst = number(j[key], std::string("tolerances.") + key);
      if (!(dst > 0.0)) fail(std::string("tolerances.") + key, "must be positive");
    }
  };
  set("weyl", t.weyl);
  set("weyl_discretized", t.weyl_discretized);
  set("eigen", t.eigen);
  set("heat_a0", t.heat_a0);
  set("heat_a1", t.heat_a1);
  set("heat_half", t.heat_half);
  set("heat_discretized", t.heat_discretized);
  set("identity", t.identity);
  set("reduction", t.reduction);
  set("expansion", t.expansion);
  set("invariance", t.invariance);
  set("exact", t.exact);
  set("variation", t.variation);
  set("variation_zero", t.variation_zero);
  set("zeta", t.zeta);
}

std::vector<int> parse_grid(const json& j, int dim) {
  std::vector<int> g;
  if (j.is_number_integer()) {
    g.assign(static_cast<std::size_t>(dim), j.get<int>());
  } else if (j.is_array()) {
    for (const auto& v : j) g.push_back(integer(v, "grid"));
  } else {
    fail("grid", "expected an integer or a list of integers");
  }
  return g;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

TrigSeries default_shear_function(int dim) {
  // 0.3 sin x
  TrigTerm t;
  t.k.assign(static_cast<std::size_t>(dim), 0);
  t.k[0] = 1;
  t.amplitude = 0.3;
  t.phase = -0.5 * std::numbers::pi;
  return {t};
}

}  // namespace

const std::vector<std::string>& suite_names() { return kSuites; }

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error at line " + std::to_string(line_of(json_text, e.byte)) +
                      ": " + e.what());
  }
  try {
    check_keys(j, "<root>",
               {"schema_version", "model", "grid", "truncation", "t_window", "lambda_window",
                "tolerances", "tolerance_scale", "output", "suites", "shear", "expansion"});
    RunConfig c;
    if (j.contains("schema_version")) {
      c.schema_version = integer(j["schema_version"], "schema_version");
      if (c.schema_version != kSchemaVersion) {
        fail("schema_version", "unsupported version " + std::to_string(c.schema_version) +
                                   " (expected " + std::to_string(kSchemaVersion) + ")");
      }
    }
    if (!j.contains("model")) fail("model", "required");
    c.model = parse_model(j["model"]);
    const int dim = c.model.analytic_only() ? 2 : c.model.dim();
    c.grid = j.contains("grid") ? parse_grid(j["grid"], dim)
                                : std::vector<int>(static_cast<std::size_t>(dim), 64);
    if (j.contains("truncation")) c.truncation = integer(j["truncation"], "truncation");
    if (j.contains("t_window") && !j["t_window"].is_null()) c.t_window = window(j["t_window"], "t_window");
    if (j.contains("lambda_window") && !j["lambda_window"].is_null())
      c.lambda_window = window(j["lambda_window"], "lambda_window");
    if (j.contains("tolerances")) parse_tolerances(j["tolerances"], c.tolerances);
    if (j.contains("tolerance_scale")) c.tolerance_scale = number(j["tolerance_scale"], "tolerance_scale");
    if (j.contains("output")) {
      if (!j["output"].is_string()) fail("output", "expected a directory path");
      c.output_dir = j["output"].get<std::string>();
    }
    if (j.contains("suites")) {
      if (!j["suites"].is_array()) fail("suites", "expected a list of suite names");
      for (const auto& s : j["suites"]) {
        if (!s.is_string()) fail("suites", "expected strings");
        c.suites.push_back(s.get<std::string>());
      }
    } else {
      c.suites = kSuites;
    }
    c.shear.f = default_shear_function(dim);
    if (j.contains("shear")) {
      check_keys(j["shear"], "shear", {"f", "epsilon"});
      if (j["shear"].contains("f")) c.shear.f = series(j["shear"]["f"], dim, "shear.f");
      if (j["shear"].contains("epsilon")) c.shear.epsilon = number(j["shear"]["epsilon"], "shear.epsilon");
    }
    if (j.contains("expansion")) {
      const auto& e = j["expansion"];
      check_keys(e, "expansion", {"points", "seed", "t_window", "samples"});
      if (e.contains("points")) c.expansion.points = integer(e["points"], "expansion.points");
      if (e.contains("seed")) c.expansion.seed = static_cast<unsigned>(integer(e["seed"], "expansion.seed"));
      if (e.contains("t_window")) c.expansion.t_window = window(e["t_window"], "expansion.t_window");
      if (e.contains("samples")) c.expansion.samples = integer(e["samples"], "expansion.samples");
    }
    validate(c);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

void validate(RunConfig& c) {
  std::set<std::string> seen;
  for (const auto& s : c.suites) {
    if (std::find(kSuites.begin(), kSuites.end(), s) == kSuites.end()) {
      std::string msg = "unknown suite \"" + s + "\"; valid suites are:";
      for (const auto& k : kSuites) msg += " " + k;
      fail("suites", msg);
    }
    if (!seen.insert(s).second) fail("suites", "suite \"" + s + "\" listed twice");
  }
  if (!(c.tolerance_scale > 0.0)) fail("tolerance_scale", "must be positive");
  if (c.truncation < 4) fail("truncation", "must be at least 4");
  if (c.expansion.points < 1) fail("expansion.points", "must be at least 1");
  if (c.expansion.samples < 6) fail("expansion.samples", "need at least 6 samples for the fits");
  if (c.output_dir.empty()) fail("output", "must not be empty");
  if (c.model.analytic_only()) {
    build_model(c.model, c.grid);
    return;
  }
  const int dim = c.model.dim();
  if (static_cast<int>(c.grid.size()) != dim) {
    fail("grid", "has " + std::to_string(c.grid.size()) + " axes, model dimension is " +
                     std::to_string(dim));
  }
  for (int g : c.grid) {
    if (g < 8 || g % 2 != 0) fail("grid", "every size must be even and at least 8");
    if (2 * c.truncation + 1 > g) {
      fail("truncation", "K = " + std::to_string(c.truncation) + " needs 2K+1 <= grid size " +
                             std::to_string(g));
    }
  }
  if (static_cast<int>(c.shear.f.size()) > 0 && c.shear.f.front().k.size() != static_cast<std::size_t>(dim)) {
    fail("shear.f", "wave vectors do not match the model dimension");
  }
  try {
    build_model(c.model, c.grid);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("model \"" + c.model.name + "\" is invalid: " + e.what());
  }
}

std::string to_json(const RunConfig& c) {
  json model = {{"kind", to_string(c.model.kind)}, {"name", c.model.name}};
  if (c.model.analytic_only()) {
    model["mass"] = c.model.mass;
    model["l_max"] = c.model.l_max;
  } else {
    model["periods"] = c.model.periods;
    model["lapse"] = series_json(c.model.lapse);
    json shift = json::array();
    for (const auto& s : c.model.shift) shift.push_back(series_json(s));
    model["shift"] = shift;
    json metric = json::array();
    for (const auto& row : c.model.metric) {
      json r = json::array();
      for (const auto& s : row) r.push_back(series_json(s));
      metric.push_back(r);
    }
    model["metric"] = metric;
    model["potential"] = series_json(c.model.potential);
  }
  const auto& t = c.tolerances;
  json out = {
      {"schema_version", c.schema_version},
      {"model", model},
      {"grid", c.grid},
      {"truncation", c.truncation},
      {"tolerance_scale", c.tolerance_scale},
      {"output", c.output_dir},
      {"suites", c.suites},
      {"tolerances",
       {{"weyl", t.weyl}, {"weyl_discretized", t.weyl_discretized}, {"eigen", t.eigen},
        {"heat_a0", t.heat_a0}, {"heat_a1", t.heat_a1}, {"heat_half", t.heat_half},
        {"heat_discretized", t.heat_discretized}, {"identity", t.identity},
        {"reduction", t.reduction}, {"expansion", t.expansion}, {"invariance", t.invariance},
        {"exact", t.exact}, {"variation", t.variation}, {"variation_zero", t.variation_zero},
        {"zeta", t.zeta}}},
      {"shear", {{"f", series_json(c.shear.f)}, {"epsilon", c.shear.epsilon}}},
      {"expansion",
       {{"points", c.expansion.points}, {"seed", c.expansion.seed},
        {"t_window", c.expansion.t_window}, {"samples", c.expansion.samples}}},
  };
  out["t_window"] = c.t_window ? json(*c.t_window) : json(nullptr);
  out["lambda_window"] = c.lambda_window ? json(*c.lambda_window) : json(nullptr);
  return out.dump(2);
}

}  // namespace kleinweyl::harness
