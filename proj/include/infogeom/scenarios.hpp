#pragma once
// Scenario orchestration: strict config in, module pipelines in the middle,
// deterministic artifacts out (CSV fields/trajectories/histograms plus a
// JSON run report). All artifact bytes are fixed by (config, seed); the
// report's wall_time_ms is the single nondeterministic field and is
// excluded from byte-identity comparisons.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "infogeom/checks.hpp"
#include "infogeom/config.hpp"
#include "infogeom/constants.hpp"
#include "infogeom/entropy_fisher.hpp"
#include "infogeom/errors.hpp"
#include "infogeom/field.hpp"
#include "infogeom/geometrodynamics.hpp"
#include "infogeom/io.hpp"
#include "infogeom/quantum_potential.hpp"
#include "infogeom/trajectories.hpp"

namespace infogeom {

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "fisher",       "qpotential",   "energy-conservation", "trajectories",
      "double-slit",  "relativistic", "validate"};
  return names;
}

struct CliOverrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
};

struct ScenarioConfig {
  std::string scenario;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  PhysicalConstants constants;
  Tolerances tolerances;
  std::string config_echo;
  Config config;  // scenario sections are consumed by the runner

  static ScenarioConfig load(const std::string& text, const CliOverrides& cli = {}) {
    ScenarioConfig sc;
    sc.config_echo = text;
    sc.config = Config::from_text(text);
    Config& c = sc.config;

    sc.scenario = c.get_string("run", "scenario");
    bool known = false;
    for (const auto& n : scenario_names()) known = known || n == sc.scenario;
    if (!known) throw ConfigError("unknown scenario '" + sc.scenario + "'");

    sc.seed = cli.seed ? *cli.seed : c.get_u64_or("run", "seed", 20240817u);

    std::string out;
    if (cli.out_dir) {
      out = *cli.out_dir;
      c.get_string_or("run", "out_dir", "");  // consumed even when overridden
    } else {
      out = c.get_string_or("run", "out_dir", "");
      if (out.empty()) {
        const char* env = std::getenv("INFOGEOM_OUT");
        out = env && *env ? env : ".";
      }
    }
    sc.out_dir = out;

    sc.constants.hbar = c.get_double_or("constants", "hbar", 1.0);
    sc.constants.mass = c.get_double_or("constants", "mass", 1.0);
    sc.constants.c = c.get_double_or("constants", "c", 1.0);
    sc.constants.k_boltz = c.get_double_or("constants", "k_boltz", 1.0);
    try {
      sc.constants.validate();
    } catch (const Error& e) {
      throw ConfigError(std::string("bad [constants]: ") + e.what());
    }

    for (const auto& [k, v] : sc.config.consume_section("tolerances")) {
      try {
        sc.tolerances.set(k, parse_double(v));
      } catch (const IoError&) {
        throw ConfigError("tolerance '" + k + "' is not a number: '" + v + "'");
      }
    }
    return sc;
  }
};

struct ReportFile {
  std::string name;
  std::uint64_t bytes = 0;
};

struct RunReport {
  std::string scenario;
  std::uint64_t seed = 0;
  double wall_time_ms = 0.0;
  std::vector<CheckResult> checks;
  std::vector<ReportFile> files;
  std::string config_echo;

  bool all_passed() const {
    for (const auto& ch : checks)
      if (!ch.pass) return false;
    return true;
  }
};

// wall_time_ms is the one run-varying field; determinism comparisons drop it.
inline nlohmann::json report_to_json(const RunReport& r, bool include_wall_time = true) {
  nlohmann::json j;
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  if (include_wall_time) j["wall_time_ms"] = r.wall_time_ms;
  j["all_passed"] = r.all_passed();
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& ch : r.checks) {
    nlohmann::json row;
    row["name"] = ch.name;
    row["module"] = ch.module;
    row["value"] = ch.value;
    row["tolerance"] = ch.tolerance;
    row["pass"] = ch.pass;
    row["detail"] = ch.detail;
    checks.push_back(std::move(row));
  }
  j["checks"] = std::move(checks);
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : r.files) {
    nlohmann::json row;
    row["name"] = f.name;
    row["bytes"] = f.bytes;
    files.push_back(std::move(row));
  }
  j["files"] = std::move(files);
  j["config"] = r.config_echo;
  return j;
}

// Re-checks that every manifest entry still exists with the recorded size.
inline std::vector<std::string> verify_manifest(const std::filesystem::path& out_dir,
                                                const RunReport& r) {
  std::vector<std::string> problems;
  for (const auto& f : r.files) {
    auto p = out_dir / f.name;
    std::error_code ec;
    auto size = std::filesystem::file_size(p, ec);
    if (ec)
      problems.push_back("missing: " + f.name);
    else if (size != f.bytes)
      problems.push_back("size mismatch: " + f.name + " (manifest " +
                         std::to_string(f.bytes) + ", on disk " + std::to_string(size) + ")");
  }
  return problems;
}

namespace detail {

// Artifacts are rendered to strings first; nothing touches the filesystem
// until the whole scenario (including config strictness) has succeeded.
struct PendingOutputs {
  std::vector<std::pair<std::string, std::string>> items;

  void add(std::string name, std::string content) {
    items.emplace_back(std::move(name), std::move(content));
  }
  void add_field(const std::string& base, const ScalarField& f) {
    add(base + ".csv", field_csv(f));
    add(base + ".meta.json", field_meta_json(f).dump(2) + "\n");
  }
};

inline CheckResult make_check(std::string name, std::string module, double value, double tol,
                              std::string det) {
  CheckResult r;
  r.name = std::move(name);
  r.module = std::move(module);
  r.value = value;
  r.tolerance = tol;
  r.pass = r.value <= r.tolerance;
  r.detail = std::move(det);
  return r;
}

inline GridSpec grid_from_config(Config& c, double dmin, double dmax, double dh) {
  double mn = c.get_double_or("grid", "min", dmin);
  double mx = c.get_double_or("grid", "max", dmax);
  double h = c.get_double_or("grid", "h", dh);
  bool two_d = c.has("grid", "ymin") || c.has("grid", "ymax") || c.has("grid", "hy");
  try {
    if (!two_d) return GridSpec::line(mn, mx, h);
    double ymn = c.get_double_or("grid", "ymin", mn);
    double ymx = c.get_double_or("grid", "ymax", mx);
    double hy = c.get_double_or("grid", "hy", h);
    return GridSpec::rectangle(mn, mx, h, ymn, ymx, hy);
  } catch (const GridMismatch& e) {
    throw ConfigError(std::string("bad [grid]: ") + e.what());
  }
}

// ---- fisher ----

inline void run_fisher(ScenarioConfig& sc, PendingOutputs& out,
                       std::vector<CheckResult>& checks) {
  Config& c = sc.config;
  std::string family = c.get_string_or("fisher", "family", "gaussian");
  ParametricDistribution dist;
  Eigen::VectorXd theta;
  if (family == "gaussian") {
    dist = gaussian_distribution();
    theta = Eigen::VectorXd(2);
    theta << c.get_double_or("fisher", "mu", 0.3), c.get_double_or("fisher", "sigma", 1.3);
  } else if (family == "exponential") {
    dist = exponential_distribution();
    theta = Eigen::VectorXd(1);
    theta << c.get_double_or("fisher", "rate", 1.0);
  } else if (family == "uniform") {
    dist = uniform_distribution();
    theta = Eigen::VectorXd(2);
    theta << c.get_double_or("fisher", "a", 0.0), c.get_double_or("fisher", "b", 1.0);
  } else {
    throw ConfigError("unknown fisher family '" + family + "'");
  }
  try {
    dist.validate_theta(theta);
  } catch (const Error& e) {
    throw ConfigError(std::string("bad [fisher] parameters: ") + e.what());
  }

  auto f = score_fisher_oracle(dist, theta);
  out.add("fisher.csv", matrix_csv(f.f));
  nlohmann::json j;
  j["family"] = family;
  j["theta"] = std::vector<double>(theta.data(), theta.data() + theta.size());
  j["fisher"] = matrix_to_json(f.f);
  out.add("fisher.json", j.dump(2) + "\n");

  double min_eig =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(f.f).eigenvalues().minCoeff();
  checks.push_back(make_check("psd_floor", "entropy_fisher", std::max(0.0, -min_eig),
                              sc.tolerances.get("psd_floor"),
                              "negative-eigenvalue excess of the computed fisher matrix"));
  if (family == "gaussian") {
    double s = theta(1);
    Eigen::MatrixXd exact(2, 2);
    exact << 1.0 / (s * s), 0.0, 0.0, 2.0 / (s * s);
    double rel = (f.f - exact).cwiseAbs().maxCoeff() / exact.cwiseAbs().maxCoeff();
    checks.push_back(make_check("gaussian_oracle", "entropy_fisher", rel,
                                sc.tolerances.get("gaussian_oracle"),
                                "score-quadrature fisher vs diag(1/s^2, 2/s^2)"));
  }
}

// ---- qpotential ----

inline void run_qpotential(ScenarioConfig& sc, PendingOutputs& out,
                           std::vector<CheckResult>& checks) {
  Config& c = sc.config;
  auto grid = grid_from_config(c, -5.0, 5.0, 0.01);
  if (grid.dims != 1) throw ConfigError("qpotential scenario expects a 1D grid");
  double sigma = c.get_double_or("qpotential", "sigma", 1.0);
  if (!(sigma > 0.0)) throw ConfigError("[qpotential] sigma must be > 0");
  QpMode mode = qp_mode_from_string(c.get_string_or("qpotential", "mode", "microstate"));
  double scale = c.get_double_or("qpotential", "gauge_scale", 3.7);
  if (!(scale > 0.0)) throw ConfigError("[qpotential] gauge_scale must be > 0");

  auto w = ScalarField::from_function(
      grid, [sigma](double x) { return std::exp(-0.5 * x * x / (sigma * sigma)); });
  w.set_name("W");
  auto qp = quantum_potential_w(w, sc.constants, mode);
  auto weyl = weyl_vector(w);
  out.add_field("w", w);
  out.add_field("q", qp.scalar);
  out.add_field("weyl_b0", weyl[0]);

  // Gauge invariance under W -> scale W, on the fixed unit-width probe grid
  // (h = 0.1). A finer spacing would push the stencil's ~12 eps / h^2
  // rounding amplification of sqrt(scale W) above the 1e-12 contract even
  // though the identity itself is exact.
  auto probe_grid = GridSpec::line(-5.0, 5.0, 0.1);
  auto wp = ScalarField::from_function(probe_grid,
                                       [](double x) { return std::exp(-0.5 * x * x); });
  auto q_probe = quantum_potential_w(wp, sc.constants, mode);
  auto q_scaled = quantum_potential_w(wp * scale, sc.constants, mode);
  double gauge = (q_probe.scalar - q_scaled.scalar).max_abs();
  gauge = std::max(gauge, (weyl_vector(wp)[0] - weyl_vector(wp * scale)[0]).max_abs());
  checks.push_back(make_check("gauge_invariance", "quantum_potential", gauge,
                              sc.tolerances.get("gauge_invariance"),
                              "potential and weyl vector under W -> " + format_double(scale) +
                                  " W on the h = 0.1 probe"));

  auto micro = mode == QpMode::microstate
                   ? qp.scalar
                   : quantum_potential_w(w, sc.constants, QpMode::microstate).scalar;
  auto bohm = mode == QpMode::bohm ? qp.scalar
                                   : quantum_potential_w(w, sc.constants, QpMode::bohm).scalar;
  double hb = sc.constants.hbar;
  double bridge = (micro - bohm * (4.0 / (hb * hb))).max_abs() / micro.max_abs();
  checks.push_back(make_check("coefficient_bridge", "quantum_potential", bridge,
                              sc.tolerances.get("coefficient_bridge"),
                              "microstate potential vs (4/hbar^2) x bohm potential"));

  // Microstate closed form for a gaussian W of any width:
  // Q = (2/m)(1/(2 s^2) - x^2/(4 s^4)).
  double m = sc.constants.mass, s2 = sigma * sigma;
  auto exact = ScalarField::from_function(grid, [m, s2](double x) {
    return (2.0 / m) * (0.5 / s2 - 0.25 * x * x / (s2 * s2));
  });
  double err = (micro - exact).max_abs(1);
  checks.push_back(make_check("closed_form", "quantum_potential", err,
                              sc.tolerances.get("closed_form"),
                              "microstate potential vs the gaussian closed form, interior"));
}

// ---- energy-conservation ----

inline void run_energy(ScenarioConfig& sc, PendingOutputs& out,
                       std::vector<CheckResult>& checks) {
  Config& c = sc.config;
  auto grid = grid_from_config(c, -4.0, 4.0, 0.01);
  if (grid.dims != 1) throw ConfigError("energy-conservation scenario expects a 1D grid");

  // Harmonic ground state in bohm mode: W = e^{-x^2}, V = x^2/2, S = -t/2.
  auto w = ScalarField::from_function(grid, [](double x) { return std::exp(-x * x); });
  w.set_name("W");
  auto v = ScalarField::from_function(grid, [](double x) { return 0.5 * x * x; });
  v.set_name("V");
  PhaseSeries s;
  s.times = {0.0, 0.05, 0.1};
  for (double t : s.times) {
    ScalarField f(grid, "S");
    for (auto& x : f.values()) x = -0.5 * t;
    s.slices.push_back(std::move(f));
  }
  auto r = hj_energy_residual(s, w, v, sc.constants, QpMode::bohm);
  r.set_name("residual");
  out.add_field("w", w);
  out.add_field("v", v);
  out.add_field("residual", r);
  checks.push_back(make_check("energy_residual", "quantum_potential", r.max_abs(1),
                              sc.tolerances.get("energy_residual"),
                              "harmonic stationary-state balance, interior"));

  auto [pw, pw_detail] = detail::check_plane_wave_residual();
  checks.push_back(make_check("plane_wave_residual", "quantum_potential", pw,
                              sc.tolerances.get("plane_wave_residual"), pw_detail));
}

// ---- trajectories ----

inline void run_trajectories(ScenarioConfig& sc, PendingOutputs& out,
                             std::vector<CheckResult>& checks) {
  Config& c = sc.config;
  GaussianPacket p;
  p.sigma0 = c.get_double_or("trajectories", "sigma0", 0.7);
  p.center = c.get_double_or("trajectories", "center", 0.0);
  p.momentum = c.get_double_or("trajectories", "momentum", 0.0);
  p.mass = sc.constants.mass;
  p.hbar = sc.constants.hbar;
  long long n = c.get_int_or("trajectories", "n_particles", 2000);
  double t_final = c.get_double_or("trajectories", "t_final", 1.0);
  double dt = c.get_double_or("trajectories", "dt", 1e-3);
  long long stride = c.get_int_or("trajectories", "record_stride", 100);
  long long nbins = c.get_int_or("trajectories", "bins", 40);
  try {
    p.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("bad [trajectories] packet: ") + e.what());
  }
  if (n < 1 || nbins < 1 || stride < 1)
    throw ConfigError("[trajectories] n_particles, bins, record_stride must be >= 1");

  std::vector<Vec2> init(static_cast<size_t>(n));
  for (long long i = 0; i < n; ++i) {
    Rng rng(sc.seed, static_cast<std::uint64_t>(i));
    init[static_cast<size_t>(i)] = {p.center + p.sigma0 * rng.normal(), 0.0};
  }
  TrajectoryEnsemble ens;
  try {
    ens = bohmian_trajectories(guidance_from_packet(p), init, dt, t_final,
                               static_cast<int>(stride));
  } catch (const StepInvalid& e) {
    throw ConfigError(std::string("bad [trajectories] stepping: ") + e.what());
  }
  out.add("trajectories.csv", trajectory_csv(ens));

  std::vector<double> finals;
  finals.reserve(init.size());
  for (const auto& path : ens.paths) finals.push_back(path.back()[0]);
  double st = p.sigma_t(t_final), drift = p.drift(t_final);
  auto hist =
      make_histogram(finals, drift - 6.0 * st, drift + 6.0 * st, static_cast<int>(nbins));
  out.add("arrivals.csv", histogram_csv(hist));
  auto rho_final = ScalarField::from_function(
      GridSpec::line(drift - 6.0 * st, drift + 6.0 * st, 12.0 * st / 400.0),
      [&](double x) { return p.rho(x, t_final); });
  rho_final.set_name("rho_final");
  out.add_field("rho_final", rho_final);

  // Spreading law on three probe particles: x(t) = drift + (x0 - x_c) s_t/s_0.
  double worst = 0.0;
  std::vector<Vec2> probes = {{p.center + p.sigma0, 0.0},
                              {p.center - 1.5 * p.sigma0, 0.0},
                              {p.center + 2.0 * p.sigma0, 0.0}};
  int probe_stride = static_cast<int>(std::llround(t_final / dt));
  auto probe_ens =
      bohmian_trajectories(guidance_from_packet(p), probes, dt, t_final, probe_stride);
  for (size_t i = 0; i < probes.size(); ++i) {
    double exact = drift + (probes[i][0] - p.center) * st / p.sigma0;
    worst = std::max(worst, std::abs(probe_ens.paths[i].back()[0] - exact) /
                                std::max(1.0, std::abs(exact)));
  }
  checks.push_back(make_check("spreading", "trajectories", worst,
                              sc.tolerances.get("spreading"),
                              "probe paths vs the analytic spreading law at t_final"));

  double tv = tv_distance_to_density(hist, [&](double x) { return p.rho(x, t_final); });
  checks.push_back(make_check("equivariance", "trajectories", tv,
                              sc.tolerances.get("equivariance"),
                              "ensemble arrivals vs |psi|^2 at t_final"));
}

// ---- double-slit ----

inline void run_double_slit(ScenarioConfig& sc, PendingOutputs& out,
                            std::vector<CheckResult>& checks) {
  Config& c = sc.config;
  DoubleSlitParams p;
  p.slit_separation = c.get_double_or("double_slit", "separation", p.slit_separation);
  p.slit_width_sigma = c.get_double_or("double_slit", "slit_sigma", p.slit_width_sigma);
  p.packet_momentum = c.get_double_or("double_slit", "momentum", p.packet_momentum);
  p.longitudinal_sigma = c.get_double_or("double_slit", "longitudinal_sigma",
                                         p.longitudinal_sigma);
  p.screen_time = c.get_double_or("double_slit", "screen_time", p.screen_time);
  p.dt = c.get_double_or("double_slit", "dt", p.dt);
  p.n_particles = static_cast<int>(c.get_int_or("double_slit", "n_particles", p.n_particles));
  p.record_stride = static_cast<int>(c.get_int_or("double_slit", "record_stride",
                                                  p.record_stride));
  p.histogram_bins = static_cast<int>(c.get_int_or("double_slit", "bins", p.histogram_bins));
  p.histogram_halfwidth =
      c.get_double_or("double_slit", "histogram_halfwidth", p.histogram_halfwidth);
  p.seed = sc.seed;
  try {
    p.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("bad [double_slit]: ") + e.what());
  }

  auto r = double_slit_scenario(p, sc.constants);
  out.add("trajectories.csv", trajectory_csv(r.ensemble));
  out.add("arrivals.csv", histogram_csv(r.arrivals));
  out.add_field("rho_initial", r.rho_initial);
  out.add_field("rho_screen", r.rho_screen);
  out.add_field("rho_2d", r.rho_2d);
  out.add_field("phase_2d", r.phase_2d);
  out.add_field("q_two_slit", r.q_two_slit);
  out.add_field("q_one_slit", r.q_one_slit);

  checks.push_back(make_check("tv_distance", "trajectories", r.tv_distance,
                              sc.tolerances.get("tv_distance"),
                              "arrival histogram vs |psi|^2 at the screen"));
  checks.push_back(make_check("axis_crossings", "trajectories",
                              static_cast<double>(r.axis_crossings),
                              sc.tolerances.get("axis_crossings"),
                              "trajectories crossing the symmetry axis"));
  checks.push_back(make_check(
      "q_difference", "trajectories", std::max(0.0, 0.1 - r.q_max_abs_difference),
      sc.tolerances.get("q_difference"),
      "max |Q_two_slit - Q_one_slit| = " + format_double(r.q_max_abs_difference) +
          ", required > 0.1"));
}

// ---- relativistic ----

inline ScalarField field_from_metric_entry(const nlohmann::json& entry, const GridSpec& grid,
                                           const std::filesystem::path& base_dir) {
  if (entry.is_number()) {
    ScalarField f(grid);
    for (auto& v : f.values()) v = entry.get<double>();
    return f;
  }
  if (entry.is_string()) {
    auto f = read_field_csv(base_dir / entry.get<std::string>());
    if (!f.grid().same_as(grid))
      throw ConfigError("metric component file '" + entry.get<std::string>() +
                        "' does not match the declared grid");
    return f;
  }
  throw ConfigError("metric components must be numbers or CSV file names");
}

// Metric JSON: {"grid": {origin, spacing, shape}, "metric": "minkowski" |
// {"diag": [...]} | {"components": [[...], ...]}}; entries are constants or
// CSV field files resolved relative to the JSON file.
inline std::pair<GridSpec, SpacetimeMetric> load_metric_json(
    const std::filesystem::path& path) {
  auto j = nlohmann::json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded()) throw IoError("metric file is not valid JSON: " + path.string());
  if (!j.contains("grid") || !j.contains("metric"))
    throw ConfigError("metric file needs 'grid' and 'metric': " + path.string());

  GridSpec grid;
  try {
    auto origin = j["grid"].at("origin").get<std::vector<double>>();
    auto spacing = j["grid"].at("spacing").get<std::vector<double>>();
    auto shape = j["grid"].at("shape").get<std::vector<int>>();
    if (origin.size() != spacing.size() || origin.size() != shape.size() ||
        origin.empty() || origin.size() > 2)
      throw ConfigError("metric grid must be 1D or 2D with matching array lengths");
    if (origin.size() == 1)
      grid = GridSpec::make_1d(origin[0], spacing[0], shape[0]);
    else
      grid = GridSpec::make_2d(origin[0], origin[1], spacing[0], spacing[1], shape[0],
                               shape[1]);
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("bad metric grid spec in " + path.string());
  } catch (const GridMismatch& e) {
    throw ConfigError("bad metric grid spec: " + std::string(e.what()));
  }

  auto base_dir = path.parent_path();
  const auto& spec = j["metric"];
  if (spec.is_string()) {
    if (spec.get<std::string>() != "minkowski")
      throw ConfigError("unknown metric name '" + spec.get<std::string>() + "'");
    return {grid, SpacetimeMetric::minkowski(grid, grid.dims)};
  }
  if (spec.is_object() && spec.contains("diag")) {
    std::vector<ScalarField> diag;
    for (const auto& entry : spec["diag"])
      diag.push_back(field_from_metric_entry(entry, grid, base_dir));
    return {grid, SpacetimeMetric::diagonal_fields(grid, std::move(diag))};
  }
  if (spec.is_object() && spec.contains("components")) {
    std::vector<ScalarField> comps;
    int dim = static_cast<int>(spec["components"].size());
    for (const auto& row : spec["components"]) {
      if (static_cast<int>(row.size()) != dim)
        throw ConfigError("metric components must form a square matrix");
      for (const auto& entry : row)
        comps.push_back(field_from_metric_entry(entry, grid, base_dir));
    }
    return {grid, SpacetimeMetric::full(grid, std::move(comps))};
  }
  throw ConfigError("metric must be 'minkowski', {'diag': ...}, or {'components': ...}");
}

inline void run_relativistic(ScenarioConfig& sc, PendingOutputs& out,
                             std::vector<CheckResult>& checks) {
  Config& c = sc.config;
  GridSpec grid;
  std::optional<SpacetimeMetric> metric;
  std::string metric_file = c.get_string_or("relativistic", "metric_file", "");
  bool minkowski_metric;
  if (!metric_file.empty()) {
    auto [g, m] = load_metric_json(metric_file);
    grid = g;
    minkowski_metric = false;
    metric.emplace(std::move(m));
  } else {
    // (t, x) rectangle; single-axis keys apply to both axes unless the
    // y-axis keys override them.
    double mn = c.get_double_or("grid", "min", 0.0);
    double mx = c.get_double_or("grid", "max", 1.0);
    double h = c.get_double_or("grid", "h", 0.01);
    try {
      grid = GridSpec::rectangle(mn, mx, h, c.get_double_or("grid", "ymin", mn),
                                 c.get_double_or("grid", "ymax", mx),
                                 c.get_double_or("grid", "hy", h));
    } catch (const GridMismatch& e) {
      throw ConfigError(std::string("bad [grid]: ") + e.what());
    }
    std::string name = c.get_string_or("relativistic", "metric", "minkowski");
    if (name == "minkowski") {
      metric.emplace(SpacetimeMetric::minkowski(grid, grid.dims));
      minkowski_metric = true;
    } else if (name == "diag") {
      std::vector<double> entries;
      for (const auto& tok : split_csv_line(c.get_string("relativistic", "diag")))
        entries.push_back(parse_double(trim(tok)));
      if (static_cast<int>(entries.size()) != grid.dims)
        throw ConfigError("[relativistic] diag needs one entry per grid axis");
      metric.emplace(SpacetimeMetric::diagonal_constant(grid, entries));
      minkowski_metric = false;
    } else {
      throw ConfigError("[relativistic] metric must be 'minkowski' or 'diag'");
    }
  }
  if (grid.dims != 2)
    throw ConfigError("relativistic scenario expects a 2D (t, x) grid");

  std::string phase = c.get_string_or("relativistic", "phase", "mass_shell");
  double qv = c.get_double_or("relativistic", "q_value", 0.4);
  std::string qkind = c.get_string_or("relativistic", "q", "constant");

  ScalarField q(grid, "Q");
  if (qkind == "constant") {
    for (auto& v : q.values()) v = qv;
  } else if (qkind == "smooth") {
    q = ScalarField::from_function(
        grid, [qv](double t, double x) { return qv * std::sin(x) * std::cos(t) + 0.1; });
    q.set_name("Q");
  } else {
    throw ConfigError("[relativistic] q must be 'constant' or 'smooth'");
  }

  ScalarField s(grid, "S");
  bool on_shell = false;
  if (phase == "mass_shell") {
    if (!minkowski_metric || qkind != "constant")
      throw ConfigError(
          "[relativistic] phase = mass_shell needs the minkowski metric and constant q");
    // p_t^2 - p_x^2 = m^2 c^2 e^Q with p_x = 1 picks p_t for an exact shell.
    double mc = sc.constants.mass * sc.constants.c;
    double pt = std::sqrt(1.0 + mc * mc * std::exp(qv));
    s = ScalarField::from_function(grid, [pt](double t, double x) { return pt * t + x; });
    s.set_name("S");
    on_shell = true;
  } else if (phase == "smooth") {
    s = ScalarField::from_function(grid, [](double t, double x) {
      return 0.7 * t + 0.3 * x + 0.1 * std::sin(t) * std::cos(x);
    });
    s.set_name("S");
  } else {
    throw ConfigError("[relativistic] phase must be 'mass_shell' or 'smooth'");
  }

  auto mass = quantum_mass(q, sc.constants.mass);
  auto scaled = conformal_metric(*metric, mass);
  auto ro = kg_hj_residual(*metric, s, q, sc.constants, KgForm::original);
  ro.set_name("residual_original");
  auto rc = kg_hj_residual(*metric, s, q, sc.constants, KgForm::conformal);
  rc.set_name("residual_conformal");
  auto det0 = metric->det_field();
  det0.set_name("det_original");
  auto det1 = scaled.det_field();
  det1.set_name("det_scaled");

  out.add_field("q", q);
  out.add_field("s", s);
  out.add_field("m_squared", mass.m_squared);
  out.add_field("residual_original", ro);
  out.add_field("residual_conformal", rc);
  out.add_field("det_original", det0);
  out.add_field("det_scaled", det1);

  checks.push_back(make_check("conformal_equivalence", "geometrodynamics",
                              (ro - rc).max_abs(), sc.tolerances.get("conformal_equivalence"),
                              "original vs conformal residual, pointwise"));
  auto det_exact = det0.zip(q, [&](double d, double qq) {
    return std::exp(grid.dims * qq) * d;
  });
  checks.push_back(make_check("det_law", "geometrodynamics",
                              (det1 - det_exact).max_abs() / det_exact.max_abs(),
                              sc.tolerances.get("det_law"),
                              "det of the scaled metric vs e^{dim Q} det g"));
  if (on_shell)
    checks.push_back(make_check("mass_shell", "geometrodynamics", ro.max_abs(),
                                sc.tolerances.get("mass_shell"),
                                "constructed mass-shell residual"));
}

}  // namespace detail

// Executes the named scenario: compute everything, enforce config strictness,
// then write artifacts and the report. A config error never leaves files.
inline RunReport run_scenario(ScenarioConfig& sc) {
  auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.scenario = sc.scenario;
  rep.seed = sc.seed;
  rep.config_echo = sc.config_echo;

  detail::PendingOutputs out;
  if (sc.scenario == "fisher") {
    detail::run_fisher(sc, out, rep.checks);
  } else if (sc.scenario == "qpotential") {
    detail::run_qpotential(sc, out, rep.checks);
  } else if (sc.scenario == "energy-conservation") {
    detail::run_energy(sc, out, rep.checks);
  } else if (sc.scenario == "trajectories") {
    detail::run_trajectories(sc, out, rep.checks);
  } else if (sc.scenario == "double-slit") {
    detail::run_double_slit(sc, out, rep.checks);
  } else if (sc.scenario == "relativistic") {
    detail::run_relativistic(sc, out, rep.checks);
  } else if (sc.scenario == "validate") {
    std::string filter = sc.config.get_string_or("validate", "filter", "");
    rep.checks = run_validation_checks(filter, sc.tolerances);
  } else {
    throw ConfigError("unknown scenario '" + sc.scenario + "'");
  }
  sc.config.require_fully_consumed();

  std::error_code ec;
  std::filesystem::create_directories(sc.out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + sc.out_dir.string());
  for (const auto& [name, content] : out.items) {
    write_text_file(sc.out_dir / name, content);
    rep.files.push_back({name, content.size()});
  }

  rep.wall_time_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  write_text_file(sc.out_dir / "report.json", report_to_json(rep).dump(2) + "\n");
  return rep;
}

}  // namespace infogeom
