#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "kleinweyl/config.hpp"
#include "kleinweyl/error.hpp"
#include "kleinweyl/report.hpp"
#include "support.hpp"

namespace hn = kleinweyl::harness;
namespace fs = std::filesystem;
using hn::ModelKind;

namespace {

std::string model_config(const std::string& model, const std::string& suites,
                         const std::string& extra = "") {
  return R"({"schema_version": 1, "model": )" + model + R"(, "suites": [)" + suites + "]" + extra + "}";
}

const std::string kFlat = R"({"kind": "flat_torus_ultrastatic", "periods": [6.283185307179586, 6.283185307179586]})";
const std::string kSphere = R"({"kind": "sphere_ultrastatic", "mass": 0.0})";
const std::string kReference = R"({"kind": "lapse_shift_torus"})";

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("kleinweyl_test_" + name);
  fs::remove_all(dir);
  return dir;
}

const hn::SuiteResult& suite(const hn::RunReport& r, const std::string& name) {
  for (const auto& s : r.suites) {
    if (s.name == name) return s;
  }
  throw std::runtime_error("suite missing: " + name);
}

double row_value(const hn::Table& t, const std::string& quantity) {
  for (const auto& row : t.rows) {
    if (row.at(0) == quantity) return std::stod(row.at(1));
  }
  throw std::runtime_error("row missing: " + quantity);
}

std::string error_message(const std::string& json) {
  try {
    hn::parse_config(json);
  } catch (const kleinweyl::ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, MinimalDefaults) {
  const auto c = hn::parse_config(R"({"model": {"kind": "flat_torus_ultrastatic", "periods": [6.2832, 6.2832]},
                                      "suites": ["coefficients"]})");
  EXPECT_EQ(c.schema_version, 1);
  EXPECT_EQ(c.grid, (std::vector<int>{64, 64}));
  EXPECT_EQ(c.truncation, 12);
  EXPECT_EQ(c.suites, (std::vector<std::string>{"coefficients"}));
  EXPECT_DOUBLE_EQ(c.model.periods[0], 6.2832);
  EXPECT_FALSE(c.t_window.has_value());
  EXPECT_DOUBLE_EQ(c.tolerance_scale, 1.0);
}

TEST(Config, UnknownKindListsValidKinds) {
  const auto msg = error_message(R"({"model": {"kind": "klein_bottle"}})");
  for (const auto& name : hn::model_kind_names()) EXPECT_NE(msg.find(name), std::string::npos) << name;
}

TEST(Config, SpacelikeShiftRejectedAtLoad) {
  const auto msg = error_message(
      R"({"model": {"kind": "shift_torus", "shift": [[{"amplitude": 1.2}], [{"amplitude": 0.0}]]}})");
  EXPECT_FALSE(msg.empty());
  EXPECT_NE(msg.find("timelike"), std::string::npos) << msg;
}

TEST(Config, ErrorsNameLineAndField) {
  EXPECT_NE(error_message("{\n  \"model\": {\"kind\": \"lapse_torus\"},\n  \"grid\": [32,\n}").find("line 4"),
            std::string::npos);
  EXPECT_NE(error_message(R"({"model": {"kind": "lapse_torus"}, "gird": 32})").find("gird"),
            std::string::npos);
  EXPECT_NE(error_message(R"({"schema_version": 2, "model": {"kind": "lapse_torus"}})").find("schema_version"),
            std::string::npos);
  EXPECT_NE(error_message(R"({"model": {"kind": "lapse_torus"}, "grid": 8, "truncation": 12})").find("truncation"),
            std::string::npos);
  EXPECT_NE(error_message(R"({"model": {"kind": "lapse_torus"}, "t_window": [0.2, 0.1]})").find("t_window"),
            std::string::npos);
  EXPECT_THROW(hn::load_config("/nonexistent/kleinweyl.json"), kleinweyl::ConfigError);
}

TEST(Config, EchoRoundTrips) {
  const auto c = hn::parse_config(model_config(kReference, R"("verify")", R"(, "t_window": [0.01, 0.5])"));
  const auto text = hn::to_json(c);
  EXPECT_EQ(hn::to_json(hn::parse_config(text)), text);
}

TEST(Catalog, ReferenceModelIsTimelike) {
  const auto data = kwtest::catalog_data(ModelKind::LapseShiftTorus, 64);
  EXPECT_GT(data.killing_norm_squared().minCoeff(), 0.4);
  const auto& x = data.chart();
  for (std::size_t p = 0; p < x.point_count(); p += 97) {
    const double cx = std::cos(x.coordinate(p, 0)), cy = std::cos(x.coordinate(p, 1));
    const auto i = static_cast<Eigen::Index>(p);
    EXPECT_NEAR(data.lapse().values()[i], 1 + 0.2 * cx, 1e-14);
    EXPECT_NEAR(data.shift()[0][i], 0.3 + 0.1 * cy, 1e-14);
    EXPECT_NEAR(data.spatial_metric()(1, 1)[i], 1 + 0.1 * cx, 1e-14);
  }
}

TEST(Catalog, FlatTorusAndSphere) {
  const auto flat = kwtest::catalog_data(ModelKind::FlatTorusUltrastatic, 8);
  EXPECT_EQ(kwtest::max_abs(flat.lapse().values() - 1.0), 0.0);
  EXPECT_EQ(kwtest::max_abs(flat.shift()[1]), 0.0);
  EXPECT_EQ(kwtest::max_abs(flat.spatial_metric()(0, 1)), 0.0);
  const auto sphere = hn::build_model(hn::default_model(ModelKind::SphereUltrastatic), {});
  EXPECT_TRUE(sphere.analytic.has_value());
  EXPECT_THROW(sphere.require_data(), kleinweyl::DomainError);
}

TEST(Report, FormatNumber) {
  EXPECT_EQ(hn::format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(hn::format_number(std::nan("")), "nan");
  EXPECT_EQ(std::stod(hn::format_number(M_PI)), M_PI);
}

TEST(Report, FlatTorusCoefficients) {
  const auto r = hn::run_suites(hn::parse_config(model_config(kFlat, R"("coefficients")")));
  EXPECT_EQ(r.exit_code, hn::kExitOk);
  const auto& s = suite(r, "coefficients");
  EXPECT_TRUE(s.passed());
  EXPECT_NEAR(row_value(s.table, "weyl_constant"), 124.025, 1e-3);
  EXPECT_NEAR(row_value(s.table, "a0"), 6.28319, 1e-5);
  EXPECT_NEAR(row_value(s.table, "a1"), 0.0, 1e-10);
}

TEST(Report, SphereVerify) {
  const auto r = hn::run_suites(hn::parse_config(model_config(kSphere, R"("verify")")));
  EXPECT_EQ(r.exit_code, hn::kExitOk) << hn::summary_text(r);
  for (const auto& c : suite(r, "verify").checks) {
    if (c.name == "a0") EXPECT_NEAR(c.value, 2.0, 1e-3);
    if (c.name == "a1") EXPECT_NEAR(c.value, 2.0 / 3.0, 5e-3);
  }
}

TEST(Report, SphereSkipsGridSuites) {
  const auto r = hn::run_suites(hn::parse_config(model_config(kSphere, R"("expansion")")));
  EXPECT_TRUE(suite(r, "expansion").skipped);
  EXPECT_EQ(r.exit_code, hn::kExitOk);
}

TEST(Report, ZeroShearInvariance) {
  const auto r = hn::run_suites(hn::parse_config(
      model_config(kReference, R"("invariance")", R"(, "grid": 32, "shear": {"f": []})")));
  EXPECT_EQ(r.exit_code, hn::kExitOk) << hn::summary_text(r);
  EXPECT_FALSE(suite(r, "invariance").checks.empty());
}

TEST(Report, ToleranceBreachNamesSuite) {
  auto c = hn::parse_config(model_config(kFlat, R"("spectrum", "coefficients")", R"(, "grid": 16, "truncation": 6)"));
  c.tolerance_scale = 1e-300;
  c.tolerances.identity = 1e-300;
  const auto r = hn::run_suites(c);
  EXPECT_EQ(r.exit_code, hn::kExitTolerance);
  EXPECT_FALSE(r.first_failing_suite.empty());
  EXPECT_NE(hn::summary_text(r).find(r.first_failing_suite), std::string::npos);
}

TEST(Report, NumericalFailureExitCode) {
  // a lambda window entirely beyond the cutoff leaves nothing to fit
  const auto r = hn::run_suites(hn::parse_config(model_config(
      kReference, R"("verify")", R"(, "grid": 16, "truncation": 4, "t_window": [0.6, 0.7], "lambda_window": [3.9, 4.0])")));
  EXPECT_NE(r.exit_code, hn::kExitOk);
}

TEST(Report, ArtifactsAreDeterministic) {
  const auto c = hn::parse_config(model_config(
      kReference, R"("coefficients", "spectrum", "expansion")", R"(, "grid": 16, "truncation": 5, "expansion": {"points": 2})"));
  const auto a = scratch("det_a"), b = scratch("det_b");
  hn::write_artifacts(hn::run_suites(c), a.string());
  hn::write_artifacts(hn::run_suites(c), b.string());
  for (const char* name : {"coefficients.csv", "spectrum.csv", "expansion.csv"}) {
    ASSERT_TRUE(fs::exists(a / name)) << name;
    EXPECT_EQ(read_file(a / name), read_file(b / name)) << name;
  }
  EXPECT_TRUE(fs::exists(a / "report.json"));
  EXPECT_TRUE(fs::exists(a / "summary.txt"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Report, RunReportWritesArtifacts) {
  auto c = hn::parse_config(model_config(kFlat, R"("coefficients")", R"(, "grid": 16, "truncation": 6)"));
  const auto dir = scratch("run_report");
  c.output_dir = dir.string();
  EXPECT_EQ(hn::run_report(c), hn::kExitOk);
  EXPECT_NE(read_file(dir / "report.json").find("\"schema_version\""), std::string::npos);
  fs::remove_all(dir);
}

TEST(Golden, ReferenceModelCoefficients) {
  const auto r = hn::run_suites(hn::parse_config(model_config(kReference, R"("coefficients")")));
  std::istringstream golden(read_file(fs::path(KLEINWEYL_TEST_DATA_DIR) / "golden_lapse_shift_coefficients.csv"));
  std::string line;
  std::getline(golden, line);
  int compared = 0;
  while (std::getline(golden, line)) {
    const auto comma = line.find(',');
    const auto rest = line.substr(comma + 1);
    const double want = std::stod(rest.substr(0, rest.find(',')));
    const double got = row_value(suite(r, "coefficients").table, line.substr(0, comma));
    EXPECT_NEAR(got, want, 1e-10 * std::max(1.0, std::abs(want))) << line;
    ++compared;
  }
  EXPECT_GT(compared, 5);
}
