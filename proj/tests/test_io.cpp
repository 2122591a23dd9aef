#include <gtest/gtest.h>

#include <filesystem>

#include "test_support.hpp"
#include "wgeom/connection.hpp"
#include "wgeom/errors.hpp"
#include "wgeom/geodesics.hpp"
#include "wgeom/io.hpp"

using namespace wgeom;
using wgeom::testing::bump;
using wgeom::testing::cosine;

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) { return fs::path(::testing::TempDir()) / "wgeom_io" / name; }

}  // namespace

TEST(Io, NumbersRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) EXPECT_EQ(std::stod(io::format_number(v)), v);
  EXPECT_EQ(io::format_number(1.0), "1");
}

TEST(Io, HashFormatting) {
  EXPECT_EQ(io::hash_hex(255), "00000000000000ff");
  EXPECT_EQ(io::fnv1a_hex(""), "cbf29ce484222325");
}

TEST(Io, DensityCsvRoundTrip) {
  const Density mu = bump(make_grid(64), 0.3, 2, 0.1);
  const fs::path p = scratch("density.csv");
  io::write_text(p, io::density_csv(mu));
  const Density back = io::read_density_csv(p);
  EXPECT_EQ(back, mu);
  EXPECT_EQ(io::read_text(p).substr(0, 11), "node,value\n");
}

TEST(Io, DensityCsvErrors) {
  const fs::path p = scratch("bad.csv");
  io::write_text(p, "node,value\n0,1\n1,x\n");
  EXPECT_THROW(io::read_density_csv(p), ConfigError);
  EXPECT_THROW(io::read_density_csv(scratch("missing.csv")), ConfigError);
}

TEST(Io, DensityJsonRoundTrip) {
  const Density mu = bump(make_grid(32), 0.5);
  const auto j = io::density_json(mu);
  EXPECT_EQ(j["n"], 32);
  EXPECT_EQ(io::density_from_json(j), mu);
  EXPECT_THROW(io::density_from_json(io::json{{"n", 4}}), ConfigError);
}

TEST(Io, TangentJsonRoundTrip) {
  const Density mu = bump(make_grid(64), 0.2);
  Eigen::VectorXd c(6);
  c << 1, -2, 0.5, 0, 0.25, 3;
  const TangentVector v(mu, c);
  const auto j = io::tangent_json(v);
  EXPECT_EQ(j["N"], 3);
  EXPECT_EQ(j["ordering"][1], basis_label(1));
  EXPECT_EQ(io::tangent_from_json(j, mu).coeffs(), c);
  auto bad = j;
  bad["coeffs"].push_back(1.0);
  EXPECT_THROW(io::tangent_from_json(bad, mu), ConfigError);
}

TEST(Io, ChristoffelHeader) {
  const Density mu = bump(make_grid(64), 0.2);
  const ChristoffelTensor gamma = christoffel(WeightedOperatorContext(mu, 2));
  const auto j = io::christoffel_json(gamma);
  EXPECT_EQ(j["header"]["N"], 2);
  EXPECT_EQ(j["header"]["base_density_hash"], io::hash_hex(density_hash(mu)));
  EXPECT_DOUBLE_EQ(j["gamma"][2][1][3].get<double>(), gamma(2, 1, 3));
}

TEST(Io, PathCsvAndManifest) {
  const GridSpec g = make_grid(32);
  const GeodesicPath p = displacement_path(uniform_density(g), cosine(g, 1, 0.1), uniform_times(3));
  const std::string csv = io::path_csv(p);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 * 32);
  const auto m = io::path_manifest(p, "p.csv");
  EXPECT_EQ(m["route"], p.route);
  EXPECT_EQ(m["density_hashes"].size(), 3u);
}

TEST(Io, WriteTextCreatesDirectories) {
  const fs::path p = scratch("deep/er/file.txt");
  fs::remove_all(scratch("deep"));
  io::write_text(p, "x");
  EXPECT_EQ(io::read_text(p), "x");
}
