#include <gtest/gtest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "wgeom/cli.hpp"
#include "wgeom/io.hpp"

namespace fs = std::filesystem;
using wgeom::io::json;

namespace {

fs::path scratch(const std::string& name) { return fs::path(::testing::TempDir()) / "wgeom_cli" / name; }

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "wgeom");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return wgeom::cli::run(static_cast<int>(argv.size()), argv.data());
}

json report(const fs::path& dir, const std::string& sub) {
  return json::parse(wgeom::io::read_text(dir / (sub + ".json")));
}

fs::path write_config(const std::string& name, const json& j) {
  const fs::path p = scratch(name);
  wgeom::io::write_text(p, j.dump());
  return p;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}), wgeom::cli::kUsageError);
  EXPECT_EQ(run({"nonsense"}), wgeom::cli::kUsageError);
  EXPECT_EQ(run({"metric", "--n", "abc"}), wgeom::cli::kUsageError);
}

TEST(Cli, MissingConfigFileIsUsageError) {
  EXPECT_EQ(run({"metric", "--config", scratch("does_not_exist.json").string(), "--out", scratch("m0").string()}),
            wgeom::cli::kUsageError);
}

TEST(Cli, BadConfigsAreUsageErrors) {
  const fs::path out = scratch("bad");
  EXPECT_EQ(run({"metric", "--config", write_config("unknown.json", {{"colour", 1}}).string(), "--out", out.string()}),
            wgeom::cli::kUsageError);
  EXPECT_EQ(run({"metric", "--config", write_config("neg.json", {{"tolerances", {{"action", -1.0}}}}).string(), "--out",
                 out.string()}),
            wgeom::cli::kUsageError);
  EXPECT_EQ(run({"metric", "--config", write_config("odd.json", {{"n", 33}}).string(), "--out", out.string()}),
            wgeom::cli::kUsageError);
  wgeom::io::write_text(scratch("broken.json"), "{\"n\": ");
  EXPECT_EQ(run({"metric", "--config", scratch("broken.json").string(), "--out", out.string()}), wgeom::cli::kUsageError);
  EXPECT_EQ(run({"bracket", "--N", "2", "--out", out.string(), "--config",
                 write_config("mode.json", {{"potential", {{{"mode", 3}, {"parity", "cos"}, {"amplitude", 1.0}}}}})
                     .string()}),
            wgeom::cli::kUsageError);
}

TEST(Cli, MetricReport) {
  const fs::path out = scratch("metric");
  ASSERT_EQ(run({"metric", "--out", out.string(), "--N", "4"}), wgeom::cli::kOk);
  const json r = report(out, "metric");
  EXPECT_EQ(r["schema_version"], wgeom::io::kSchemaVersion);
  EXPECT_EQ(r["config"]["N"], 4);
  EXPECT_EQ(r["status"], "ok");
  EXPECT_TRUE(r["tolerances"].contains("gram_vol_diagonal"));
  EXPECT_EQ(r["config_hash"].get<std::string>().size(), 16u);
  EXPECT_TRUE(fs::exists(out / "metric_gram.csv"));
}

TEST(Cli, ReportsAreByteDeterministic) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  ASSERT_EQ(run({"christoffel", "--out", a.string(), "--N", "3", "--n", "64"}), wgeom::cli::kOk);
  ASSERT_EQ(run({"christoffel", "--out", b.string(), "--N", "3", "--n", "64"}), wgeom::cli::kOk);
  for (const char* f : {"christoffel.json", "christoffel.csv"})
    EXPECT_EQ(wgeom::io::read_text(a / f), wgeom::io::read_text(b / f)) << f;
}

TEST(Cli, ConfigHashTracksOverrides) {
  const fs::path a = scratch("hash_a"), b = scratch("hash_b");
  ASSERT_EQ(run({"metric", "--out", a.string(), "--N", "3"}), wgeom::cli::kOk);
  ASSERT_EQ(run({"metric", "--out", b.string(), "--N", "4"}), wgeom::cli::kOk);
  EXPECT_NE(report(a, "metric")["config_hash"], report(b, "metric")["config_hash"]);
}

TEST(Cli, CurvatureSectionalIsThree) {
  const fs::path out = scratch("curvature");
  ASSERT_EQ(run({"curvature", "--out", out.string(), "--n", "128"}), wgeom::cli::kOk);
  EXPECT_NEAR(report(out, "curvature")["results"]["sectional_cos1_sin1"].get<double>(), 3.0, 1e-9);
}

TEST(Cli, ToleranceBreachExitsOne) {
  const fs::path out = scratch("breach");
  const fs::path cfg = write_config("tight.json", {{"tolerances", {{"fd_relative", 1e-12}}}});
  EXPECT_EQ(run({"curvature", "--out", out.string(), "--n", "128", "--config", cfg.string()}),
            wgeom::cli::kToleranceBreach);
  EXPECT_EQ(report(out, "curvature")["status"], "tolerance_breach");
}

TEST(Cli, CausticExitsThree) {
  const fs::path cfg =
      write_config("caustic.json", {{"potential", {{{"mode", 1}, {"parity", "cos"}, {"amplitude", 2.0}}}}});
  EXPECT_EQ(run({"geodesic", "--out", scratch("caustic").string(), "--n", "64", "--N", "4", "--config", cfg.string()}),
            wgeom::cli::kNumericalFailure);
}

TEST(Cli, DensityFromCsvRelativeToConfig) {
  const fs::path dir = scratch("csvcfg");
  std::string csv = "node,value\n";
  for (int j = 0; j < 64; ++j) csv += std::to_string(j) + "," + std::to_string(1.0 + 0.3 * std::cos(6.283185307179586 * j / 64)) + "\n";
  wgeom::io::write_text(dir / "rho.csv", csv);
  wgeom::io::write_text(dir / "cfg.json", json{{"n", 64}, {"N", 4}, {"density", {{"family", "csv"}, {"path", "rho.csv"}}}}.dump());
  EXPECT_EQ(run({"metric", "--config", (dir / "cfg.json").string(), "--out", (dir / "out").string()}), wgeom::cli::kOk);
  EXPECT_EQ(run({"metric", "--config", (dir / "cfg.json").string(), "--n", "128", "--out", (dir / "out").string()}),
            wgeom::cli::kUsageError);
}

TEST(Cli, DensityFromJson) {
  const fs::path dir = scratch("jsoncfg");
  std::vector<double> values(64);
  for (int j = 0; j < 64; ++j) values[j] = 2.0 + std::sin(6.283185307179586 * j / 64);
  wgeom::io::write_text(dir / "rho.json", json{{"values", values}}.dump());
  wgeom::io::write_text(dir / "cfg.json", json{{"n", 64}, {"N", 4}, {"density", {{"family", "json"}, {"path", "rho.json"}}}}.dump());
  EXPECT_EQ(run({"metric", "--config", (dir / "cfg.json").string(), "--out", (dir / "out").string()}), wgeom::cli::kOk);
}

TEST(Cli, DistanceAndTransport) {
  const fs::path out = scratch("dt");
  EXPECT_EQ(run({"distance", "--out", out.string(), "--n", "128"}), wgeom::cli::kOk);
  const json d = report(out, "distance");
  EXPECT_GT(d["results"]["w2_exact"].get<double>(), 0.0);
  EXPECT_TRUE(d["results"]["lp_cost_not_above_product"].get<bool>());
  EXPECT_EQ(run({"bracket", "--out", out.string(), "--n", "64", "--N", "4"}), wgeom::cli::kOk);
  EXPECT_TRUE(fs::exists(out / "bracket_vector.json"));
}

TEST(Cli, GeodesicSmallGrid) {
  const fs::path out = scratch("geo");
  EXPECT_EQ(run({"geodesic", "--out", out.string(), "--n", "64", "--N", "6"}), wgeom::cli::kOk);
  for (const char* f : {"geodesic_hamilton-jacobi.csv", "geodesic_christoffel.manifest.json", "geodesic_speed.csv"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
}
