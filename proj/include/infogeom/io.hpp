#pragma once
// Deterministic text I/O shared by the CLI and the tests: shortest
// round-trip number formatting, field/trajectory/histogram CSV, and JSON
// conversions. Reruns with identical inputs must be byte-identical, so all
// numbers go through format_double and JSON objects keep sorted keys.

#include <cstdint>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "infogeom/errors.hpp"
#include "infogeom/field.hpp"
#include "infogeom/text.hpp"
#include "infogeom/trajectories.hpp"
#include "json.hpp"

namespace infogeom {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// ---- field CSV: header x[,y],value; rows in row-major grid order. ----

inline std::string field_csv(const ScalarField& f) {
  const GridSpec& g = f.grid();
  std::ostringstream out;
  out << (g.dims == 1 ? "x,value\n" : "x,y,value\n");
  for (int i = 0; i < g.shape[0]; ++i) {
    for (int j = 0; j < g.shape[1]; ++j) {
      out << format_double(g.coord(0, i)) << ',';
      if (g.dims == 2) out << format_double(g.coord(1, j)) << ',';
      out << format_double(g.dims == 1 ? f.at(i) : f.at(i, j)) << '\n';
    }
  }
  return out.str();
}

inline nlohmann::json field_meta_json(const ScalarField& f) {
  const GridSpec& g = f.grid();
  nlohmann::json m;
  m["name"] = f.name();
  m["dims"] = g.dims;
  m["origin"] = std::vector<double>(g.origin.begin(), g.origin.begin() + g.dims);
  m["spacing"] = std::vector<double>(g.spacing.begin(), g.spacing.begin() + g.dims);
  m["shape"] = std::vector<int>(g.shape.begin(), g.shape.begin() + g.dims);
  return m;
}

inline std::filesystem::path field_meta_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".meta.json");
  return p;
}

inline void write_field_csv(const std::filesystem::path& path, const ScalarField& f) {
  write_text_file(path, field_csv(f));
  write_text_file(field_meta_path(path), field_meta_json(f).dump(2) + "\n");
}

// Rebuilds the grid from the coordinate columns and cross-checks it against
// the lattice implied by (origin, spacing); the sidecar only supplies the name.
inline ScalarField read_field_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty field file: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  int dims = 0;
  if (line == "x,value") dims = 1;
  else if (line == "x,y,value") dims = 2;
  else throw IoError("bad field header '" + line + "' in " + path.string());

  std::vector<std::array<double, 2>> coords;
  std::vector<double> vals;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != dims + 1)
      throw IoError("bad field row '" + line + "' in " + path.string());
    std::array<double, 2> c{parse_double(cells[0]), 0.0};
    if (dims == 2) c[1] = parse_double(cells[1]);
    coords.push_back(c);
    vals.push_back(parse_double(cells[static_cast<size_t>(dims)]));
  }
  if (vals.size() < 5) throw IoError("field too small: " + path.string());

  GridSpec g;
  g.dims = dims;
  g.origin = coords.front();
  if (dims == 1) {
    g.shape = {static_cast<int>(vals.size()), 1};
    g.spacing = {coords[1][0] - coords[0][0], 1.0};
  } else {
    size_t ny = 1;
    while (ny < coords.size() && coords[ny][0] == coords[0][0]) ++ny;
    if (ny < 2 || coords.size() % ny != 0)
      throw IoError("field rows are not a row-major lattice: " + path.string());
    g.shape = {static_cast<int>(coords.size() / ny), static_cast<int>(ny)};
    g.spacing = {coords[ny][0] - coords[0][0], coords[1][1] - coords[0][1]};
  }
  g.validate();
  for (size_t k = 0; k < coords.size(); ++k) {
    int i = static_cast<int>(k) / g.shape[1];
    int j = static_cast<int>(k) % g.shape[1];
    double tol0 = 1e-9 * std::max(1.0, std::abs(g.coord(0, i)));
    if (std::abs(coords[k][0] - g.coord(0, i)) > tol0 ||
        (dims == 2 &&
         std::abs(coords[k][1] - g.coord(1, j)) > 1e-9 * std::max(1.0, std::abs(g.coord(1, j)))))
      throw IoError("field coordinates are not an even lattice: " + path.string());
  }

  std::string name;
  auto meta = field_meta_path(path);
  if (std::filesystem::exists(meta)) {
    auto m = nlohmann::json::parse(read_text_file(meta), nullptr, false);
    if (m.is_discarded()) throw IoError("bad sidecar JSON: " + meta.string());
    if (m.contains("name")) name = m["name"].get<std::string>();
  }
  ScalarField f(g, name);
  f.values() = std::move(vals);
  return f;
}

inline nlohmann::json field_to_json(const ScalarField& f) {
  nlohmann::json j = field_meta_json(f);
  j["values"] = f.values();
  return j;
}

// ---- trajectory CSV: t,particle_id,x[,y]; records grouped by particle. ----

inline std::string trajectory_csv(const TrajectoryEnsemble& e) {
  std::ostringstream out;
  out << (e.dims == 1 ? "t,particle_id,x\n" : "t,particle_id,x,y\n");
  for (size_t p = 0; p < e.paths.size(); ++p) {
    for (size_t r = 0; r < e.paths[p].size(); ++r) {
      out << format_double(e.times[r]) << ',' << p << ','
          << format_double(e.paths[p][r][0]);
      if (e.dims == 2) out << ',' << format_double(e.paths[p][r][1]);
      out << '\n';
    }
  }
  return out.str();
}

inline void write_trajectory_csv(const std::filesystem::path& path,
                                 const TrajectoryEnsemble& e) {
  write_text_file(path, trajectory_csv(e));
}

// ---- histogram CSV: bin_center,count,normalized. ----

inline std::string histogram_csv(const Histogram& h) {
  std::ostringstream out;
  out << "bin_center,count,normalized\n";
  auto norm = h.normalized();
  for (int i = 0; i < h.nbins; ++i)
    out << format_double(h.bin_center(i)) << ',' << h.counts[static_cast<size_t>(i)] << ','
        << format_double(norm[static_cast<size_t>(i)]) << '\n';
  return out.str();
}

inline void write_histogram_csv(const std::filesystem::path& path, const Histogram& h) {
  write_text_file(path, histogram_csv(h));
}

// ---- dense matrix CSV: header-less rows of values. ----

inline std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  return out.str();
}

inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace infogeom
