#include "cli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace arcszego;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Invocation {
  int status = -1;
  std::string out;
  std::string err;
};

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("arcszego-cli-" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

Invocation invoke(const std::string& args, const fs::path& dir) {
  const std::string cmd = std::string(ARCSZEGO_CLI) + " " + args + " >" + (dir / "stdout").string() + " 2>" +
                          (dir / "stderr").string();
  const int raw = std::system(cmd.c_str());
  Invocation r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(dir / "stdout");
  r.err = slurp(dir / "stderr");
  return r;
}

std::string config(const std::string& name) { return std::string(ARCSZEGO_TEST_CONFIGS) + "/" + name; }

int config_error_line(const std::string& text) {
  try {
    cli::parse_config(text);
  } catch (const cli::ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Cli, DensityStrings) {
  auto d = cli::parse_density("poly(1, 0,0.5)");
  EXPECT_EQ(d.kind, "poly");
  EXPECT_EQ(d.params, (std::vector<double>{1, 0, 0.5}));
  d = cli::parse_density("one");
  EXPECT_EQ(d.kind, "one");
  EXPECT_TRUE(d.params.empty());
  d = cli::parse_density("jacobi(0.5,-0.5)");
  EXPECT_EQ(d.params, (std::vector<double>{0.5, -0.5}));
  EXPECT_THROW(cli::parse_density("poly(1,x)"), DomainError);
  EXPECT_THROW(cli::parse_density("poly(1,2"), DomainError);
}

TEST(Cli, ErrorsPointAtTheOffendingLine) {
  const std::string text =
      "{\n"
      "  \"arc\": {\"kind\": \"segment\"},\n"
      "  \"measure\": {\n"
      "    \"density\": \"one\",\n"
      "    \"atoms\": [[1.5, 0.2]]\n"
      "  }\n"
      "}\n";
  EXPECT_EQ(config_error_line(text), 5);
  EXPECT_EQ(config_error_line("{\n  \"degrees\": [4, 8],\n  \"colour\": 1\n}\n"), 3);
  EXPECT_EQ(config_error_line("{\n  \"nodes\": 100\n}\n"), 2);
  EXPECT_EQ(config_error_line("{\n  \"degrees\": [4, 8],\n  \"nodes\": ]\n}\n"), 3);
  EXPECT_EQ(cli::locate_key("{\"a\": {\"b\": 1,\n \"c\": 2}}", "a.c"), 2);
  EXPECT_EQ(cli::locate_key("{}", "missing"), 0);
}

TEST(Cli, ConfigFields) {
  const auto cfg = cli::parse_config(R"({
    "arc": {"kind": "parabola", "A": [-1, 0], "B": [1, 0], "bend": 0.3},
    "base": [0.3, 0.8],
    "measure": {"density": {"kind": "poly", "params": [1, 0, 0.5], "normalize": true}, "atoms": [[0.5, 0.1]]},
    "degrees": [5, 10],
    "precision": "high",
    "placement": "poisson",
    "tolerances": {"widom_rel": 0.5, "strict_trend": true}
  })");
  EXPECT_EQ(cfg.arc.kind, "parabola");
  EXPECT_DOUBLE_EQ(cfg.arc.bend, 0.3);
  ASSERT_TRUE(cfg.base.has_value());
  EXPECT_EQ(*cfg.base, std::complex<double>(0.3, 0.8));
  EXPECT_TRUE(cfg.measure.density.normalize);
  EXPECT_EQ(cfg.measure.atoms.size(), 1u);
  EXPECT_EQ(cfg.precision, "high");
  EXPECT_TRUE(cfg.tol.strict_trend);
  EXPECT_DOUBLE_EQ(cfg.tol.widom_rel, 0.5);
  EXPECT_FALSE(cli::parse_config(R"({"base": "inf"})").base.has_value());
  EXPECT_THROW(cli::parse_config(R"({"base": "zero"})"), cli::ConfigError);
}

TEST(Cli, CsvFormat) {
  ConvergenceReport rep;
  DegreeRecord r;
  r.n = 3;
  r.lambda = 0.1;
  r.widom_sq = 2;
  rep.records.push_back(r);
  EXPECT_EQ(cli::series_csv(rep),
            "n,lambda,widom_sq,limit_A,limit_B,err_abs,err_rel,l2_err,sup_err\n"
            "3,0.10000000000000001,2,nan,nan,nan,nan,nan,nan\n");
}

TEST(Cli, HashIsFnv1a) {
  EXPECT_EQ(cli::fnv1a(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(cli::fnv1a("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(cli::fnv1a("foobar"), 0x85944171f73967e8ull);
}

TEST(Cli, ChebyshevRunSucceeds) {
  const auto dir = scratch("chebyshev");
  const auto r = invoke("widom-sweep --config " + config("chebyshev.json") + " --out " + dir.string(), dir);
  EXPECT_EQ(r.status, 0) << r.err;
  const auto rep = nlohmann::json::parse(slurp(dir / "report.json"));
  EXPECT_TRUE(rep["all_pass"].get<bool>());
  for (const auto& rec : rep["records"]) EXPECT_LT(rec["err_rel"].get<double>(), 1e-8);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["subcommand"], "widom-sweep");
  EXPECT_EQ(manifest["config_hash"].get<std::string>().size(), 16u);
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST(Cli, SeriesIsReproducible) {
  const auto a = scratch("repro-a"), b = scratch("repro-b");
  const std::string args = "widom-sweep --config " + config("identity_parabola_z_expcos.json") + " --out ";
  ASSERT_EQ(invoke(args + a.string(), a).status, 0);
  ASSERT_EQ(invoke(args + b.string(), b).status, 0);
  const auto sa = slurp(a / "series.csv");
  EXPECT_FALSE(sa.empty());
  EXPECT_EQ(sa, slurp(b / "series.csv"));
  const auto ma = nlohmann::json::parse(slurp(a / "manifest.json"));
  const auto mb = nlohmann::json::parse(slurp(b / "manifest.json"));
  EXPECT_EQ(ma["config_hash"], mb["config_hash"]);
}

TEST(Cli, OverridesChangeTheHash) {
  const auto a = scratch("override-a"), b = scratch("override-b");
  const std::string args = "widom-sweep --config " + config("chebyshev.json") + " --out ";
  ASSERT_EQ(invoke(args + a.string(), a).status, 0);
  ASSERT_EQ(invoke(args + b.string() + " --degrees 2,4,8", b).status, 0);
  const auto mb = nlohmann::json::parse(slurp(b / "manifest.json"));
  EXPECT_NE(nlohmann::json::parse(slurp(a / "manifest.json"))["config_hash"], mb["config_hash"]);
  EXPECT_EQ(nlohmann::json::parse(slurp(b / "report.json"))["records"].size(), 3u);
}

TEST(Cli, BasePointOnArcExitsTwo) {
  const auto dir = scratch("on-arc");
  const auto r = invoke("widom-sweep --config " + config("base_on_arc.json") + " --out " + dir.string(), dir);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("base point on arc"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("base_on_arc.json:"), std::string::npos) << r.err;
}

TEST(Cli, VanishingDensityExitsThree) {
  const auto dir = scratch("vanishing");
  const auto r = invoke("strong-asymptotics --config " + config("vanishing.json") + " --out " + dir.string(), dir);
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.err.find("strong asymptotics undefined (R_f = 0)"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrorsExitTwo) {
  const auto dir = scratch("usage");
  EXPECT_EQ(invoke("widom-sweep", dir).status, 2);
  EXPECT_EQ(invoke("widom-sweep --config " + (dir / "absent.json").string(), dir).status, 2);
  EXPECT_EQ(invoke("no-such-command", dir).status, 2);
  EXPECT_EQ(invoke("widom-sweep --config " + config("chebyshev.json") + " --degrees 3,x --out " + dir.string(), dir)
                .status,
            2);
}

TEST(Cli, SampledArcMatchesThePreset) {
  // The parabola preset, written out as 129 Chebyshev samples.
  nlohmann::json samples = nlohmann::json::array();
  for (int j = 0; j <= 128; ++j) {
    const double t = j == 128 ? 1.0 : 0.5 - 0.5 * std::cos(M_PI * j / 128);
    const double x = 2 * t - 1;
    samples.push_back({t, x, 0.3 * (x * x - 1)});
  }
  nlohmann::json doc = {{"arc", {{"kind", "general"}, {"samples", samples}}},
                        {"base", {0.3, 0.8}},
                        {"measure", {{"density", "exp_cos(1)"}}},
                        {"degrees", {10, 20}}};
  const auto general = run_widom_sweep(cli::parse_config(doc.dump()));
  doc["arc"] = {{"kind", "parabola"}, {"A", {-1, 0}}, {"B", {1, 0}}, {"bend", 0.3}};
  const auto preset = run_widom_sweep(cli::parse_config(doc.dump()));
  EXPECT_NEAR(general.scalars.at("limit_A") / preset.scalars.at("limit_A"), 1.0, 1e-10);
  EXPECT_NEAR(general.records.back().widom_sq / preset.records.back().widom_sq, 1.0, 1e-10);

  doc["arc"] = {{"kind", "general"}, {"samples", {{0, -1, 0}, {1, 1, 0}}}};
  try {
    cli::parse_config(doc.dump(2));
    FAIL() << "expected ConfigError";
  } catch (const cli::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("arc.samples"), std::string::npos);
    EXPECT_GT(e.line(), 0);
  }
}
