#include "wgeom/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wgeom/errors.hpp"

namespace wgeom::io {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return hash_hex(h);
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::error_code ec;
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path(), ec);
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + file.string());
  out << text;
  if (!out) throw ConfigError("failed writing " + file.string());
}

std::string read_text(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string density_csv(const Density& mu) {
  std::string s = "node,value\n";
  for (int j = 0; j < mu.size(); ++j) s += std::to_string(j) + "," + format_number(mu[j]) + "\n";
  return s;
}

Density read_density_csv(const std::filesystem::path& file) {
  std::istringstream in(read_text(file));
  std::string line;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    const std::string cell = comma == std::string::npos ? line : line.substr(comma + 1);
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    while (first < last && *first == ' ') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc()) {
      if (values.empty()) continue;  // header
      throw ConfigError("bad density value '" + cell + "' in " + file.string());
    }
    values.push_back(v);
  }
  const GridSpec grid = make_grid(static_cast<int>(values.size()));
  return make_density(ScalarField(grid, std::move(values)));
}

json density_json(const Density& mu) {
  return {{"n", mu.size()},
          {"values", std::vector<double>(mu.rho().values().begin(), mu.rho().values().end())},
          {"hash", hash_hex(density_hash(mu))}};
}

Density density_from_json(const json& j) {
  try {
    std::vector<double> values = j.at("values").get<std::vector<double>>();
    const GridSpec grid = make_grid(static_cast<int>(values.size()));
    return make_density(ScalarField(grid, std::move(values)));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed density JSON: ") + e.what());
  }
}

json tangent_json(const TangentVector& v) {
  const auto& c = v.coeffs();
  return {{"N", v.truncation()},
          {"ordering", basis_ordering(v.truncation())},
          {"coeffs", std::vector<double>(c.data(), c.data() + c.size())},
          {"base_density_hash", hash_hex(density_hash(v.base()))}};
}

TangentVector tangent_from_json(const json& j, const Density& base) {
  try {
    const int n = j.at("N").get<int>();
    const auto coeffs = j.at("coeffs").get<std::vector<double>>();
    if (static_cast<int>(coeffs.size()) != basis_size(n))
      throw ConfigError("tangent vector has " + std::to_string(coeffs.size()) + " coefficients for N=" +
                        std::to_string(n));
    if (j.contains("ordering") && j.at("ordering").get<std::vector<std::string>>() != basis_ordering(n))
      throw ConfigError("tangent vector uses an unknown basis ordering");
    return TangentVector(base, Eigen::Map<const Eigen::VectorXd>(coeffs.data(), coeffs.size()));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed tangent vector JSON: ") + e.what());
  }
}

json christoffel_json(const ChristoffelTensor& gamma) {
  const int m = gamma.dim();
  json g = json::array();
  for (int k = 0; k < m; ++k) {
    json rows = json::array();
    for (int i = 0; i < m; ++i) {
      std::vector<double> row(m);
      for (int j = 0; j < m; ++j) row[j] = gamma(k, i, j);
      rows.push_back(row);
    }
    g.push_back(std::move(rows));
  }
  return {{"header",
           {{"N", gamma.truncation()},
            {"ordering", basis_ordering(gamma.truncation())},
            {"base_density_hash", hash_hex(density_hash(gamma.base()))},
            {"layout", "gamma[k][i][j]: nabla_{V_i} V_j = sum_k gamma[k][i][j] V_k"}}},
          {"gamma", std::move(g)}};
}

std::string path_csv(const GeodesicPath& path) {
  path.validate();
  std::string s = "time,node,density,potential\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    const std::string t = format_number(path.times[i]);
    for (int j = 0; j < path.densities[i].size(); ++j)
      s += t + "," + std::to_string(j) + "," + format_number(path.densities[i][j]) + "," +
           format_number(path.potentials[i][j]) + "\n";
  }
  return s;
}

json path_manifest(const GeodesicPath& path, const std::string& csv_name) {
  std::vector<std::string> hashes;
  for (const auto& d : path.densities) hashes.push_back(hash_hex(density_hash(d)));
  return {{"route", path.route},
          {"truncation", path.truncation},
          {"n", path.densities.empty() ? 0 : path.densities.front().size()},
          {"times", path.times},
          {"density_hashes", hashes},
          {"data", csv_name},
          {"columns", {"time", "node", "density", "potential"}}};
}

std::string coupling_csv(const Coupling& pi) {
  std::string s;
  for (int i = 0; i < pi.matrix.rows(); ++i) {
    for (int j = 0; j < pi.matrix.cols(); ++j) {
      if (j) s += ",";
      s += format_number(pi.matrix(i, j));
    }
    s += "\n";
  }
  return s;
}

}  // namespace wgeom::io
