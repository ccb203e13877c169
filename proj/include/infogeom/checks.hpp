#pragma once
// Cross-module validation suite. Every check reduces to a nonnegative-ish
// violation measure `value` with pass <=> value <= tolerance; ratio-window
// and lower-bound criteria are folded into that shape (distance from the
// window center, shortfall below the required minimum). `detail` carries
// the raw observables for the report.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "infogeom/constants.hpp"
#include "infogeom/entropy_fisher.hpp"
#include "infogeom/errors.hpp"
#include "infogeom/field.hpp"
#include "infogeom/geometrodynamics.hpp"
#include "infogeom/morphogenetic.hpp"
#include "infogeom/quantum_potential.hpp"
#include "infogeom/rng.hpp"
#include "infogeom/text.hpp"
#include "infogeom/trajectories.hpp"

namespace infogeom {

class Tolerances {
 public:
  Tolerances() : t_(defaults()) {}

  static const std::map<std::string, double>& defaults() {
    static const std::map<std::string, double> d = {
        {"moore_penrose", 1e-9},        {"projection", 1e-10},
        {"square_case", 1e-9},          {"metric_identity", 1e-10},
        {"gaussian_oracle", 1e-6},      {"psd_floor", 1e-12},
        {"cramer_rao", 0.0},            {"gauge_invariance", 1e-12},
        {"coefficient_bridge", 1e-8},   {"closed_form", 1e-3},
        {"convergence_ratio", 0.5},     {"energy_residual", 1e-3},
        {"plane_wave_residual", 1e-12}, {"stationarity_slope", 0.2},
        {"stationarity_shifted", 0.0},  {"spreading", 1e-3},
        {"tv_distance", 0.05},          {"axis_crossings", 0.0},
        {"q_difference", 0.0},          {"equivariance", 0.05},
        {"conformal_equivalence", 1e-12}, {"mass_shell", 1e-10},
        {"det_law", 1e-10},             {"signature_preservation", 0.0},
    };
    return d;
  }

  double get(const std::string& name) const {
    auto it = t_.find(name);
    if (it == t_.end()) throw ConfigError("unknown tolerance name '" + name + "'");
    return it->second;
  }

  void set(const std::string& name, double value) {
    auto it = t_.find(name);
    if (it == t_.end()) throw ConfigError("unknown tolerance name '" + name + "'");
    if (!std::isfinite(value) || value < 0.0)
      throw ConfigError("tolerance '" + name + "' must be finite and >= 0");
    it->second = value;
  }

  const std::map<std::string, double>& all() const { return t_; }

 private:
  std::map<std::string, double> t_;
};

struct CheckResult {
  std::string name;
  std::string module;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline Eigen::MatrixXd random_full_rank(Rng& rng, int m, int n) {
  while (true) {
    Eigen::MatrixXd j(m, n);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < n; ++c) j(r, c) = rng.uniform(-1.0, 1.0);
    if (RectJacobian(j).gram_condition() < 1e8) return j;
  }
}

inline double inf_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// -------- morphogenetic --------

inline std::pair<double, std::string> check_moore_penrose() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    Rng rng(1001, s);
    int n = 1 + static_cast<int>(s % 6);
    int m = std::min(8, n + static_cast<int>(s % 3));
    RectJacobian jac(random_full_rank(rng, m, n));
    Eigen::MatrixXd j = jac.entries(), p = pseudo_inverse(jac);
    worst = std::max({worst, inf_norm(j * p * j - j), inf_norm(p * j * p - p),
                      inf_norm((j * p).transpose() - j * p),
                      inf_norm((p * j).transpose() - p * j)});
  }
  return {worst, "max of the four defining identities over 200 seeded jacobians"};
}

inline std::pair<double, std::string> check_projection() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    Rng rng(1002, s);
    int n = 1 + static_cast<int>(s % 5);
    int m = std::min(8, n + 1 + static_cast<int>(s % 3));
    RectJacobian jac(random_full_rank(rng, m, n));
    auto proj = projection_operator(jac);
    worst = std::max({worst, inf_norm(proj.q * proj.q - proj.q),
                      inf_norm(proj.q.transpose() - proj.q)});
  }
  return {worst, "idempotency and symmetry of Q = J J+ over 200 seeded jacobians"};
}

inline std::pair<double, std::string> check_square_case() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    Rng rng(1003, s);
    int n = 2 + static_cast<int>(s % 5);
    RectJacobian jac(random_full_rank(rng, n, n));
    worst = std::max(worst, inf_norm(pseudo_inverse(jac) - jac.entries().inverse()));
  }
  return {worst, "J+ vs inverse on 200 seeded square jacobians"};
}

inline std::pair<double, std::string> check_metric_identity() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    Rng rng(1004, s);
    int n = 1 + static_cast<int>(s % 6);
    int m = std::min(8, n + static_cast<int>(s % 4));
    RectJacobian jac(random_full_rank(rng, m, n));
    auto mt = metric_tensor(jac);
    worst = std::max(
        worst, inf_norm(mt.g_inv * mt.g - Eigen::MatrixXd::Identity(n, n)));
  }
  return {worst, "g_inv g vs identity over 200 seeded jacobians"};
}

// -------- entropy_fisher --------

inline std::pair<double, std::string> check_gaussian_oracle() {
  double mu = 0.3, sigma = 1.3;
  Eigen::VectorXd theta(2);
  theta << mu, sigma;
  auto f = score_fisher_oracle(gaussian_distribution(), theta);
  Eigen::MatrixXd exact(2, 2);
  exact << 1.0 / (sigma * sigma), 0.0, 0.0, 2.0 / (sigma * sigma);
  double rel = inf_norm(f.f - exact) / inf_norm(exact);
  return {rel, "score-quadrature fisher vs diag(1/s^2, 2/s^2) at (0.3, 1.3)"};
}

inline std::pair<double, std::string> check_psd_floor() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(2001, s);
    int p = 1 + static_cast<int>(s % 3);
    int m = p + static_cast<int>(s % 4);
    std::vector<Eigen::VectorXd> coeffs;
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd a(p);
      for (int k = 0; k < p; ++k) a(k) = rng.uniform(-1.0, 1.0);
      coeffs.push_back(a);
    }
    auto fam = MicrostateFamily::exponential(coeffs);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
    Eigen::MatrixXd f = fisher_matrix(fam, theta).f;
    double asym = inf_norm(f - f.transpose());
    double min_eig =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(f).eigenvalues().minCoeff();
    worst = std::max({worst, asym, std::max(0.0, -min_eig)});
  }
  return {worst, "symmetry defect and negative-eigenvalue excess over 100 seeded families"};
}

inline std::pair<double, std::string> check_cramer_rao() {
  double mu = 0.5, sigma = 1.3;
  int n_samples = 10000, n_trials = 1000;
  Eigen::VectorXd theta(2);
  theta << mu, sigma;
  auto g = gaussian_distribution();
  Eigen::MatrixXd cov = mc_estimator_covariance(g, theta, gaussian_mle_estimator(),
                                                n_samples, n_trials, 90210);
  Eigen::MatrixXd per_experiment(2, 2);
  per_experiment << 1.0 / (sigma * sigma), 0.0, 0.0, 2.0 / (sigma * sigma);
  FisherMatrix f{static_cast<double>(n_samples) * per_experiment, theta};
  double gap = cramer_rao_gap(f, cov);
  double stderr_scale = 0.0;
  for (int i = 0; i < 2; ++i)
    stderr_scale = std::max(stderr_scale, cov(i, i) * std::sqrt(2.0 / (n_trials - 1)));
  double value = std::max(0.0, -gap - 3.0 * stderr_scale);
  std::ostringstream d;
  d << "min eig(cov - F^-1/n) = " << format_double(gap) << ", 3*mc_stderr = "
    << format_double(3.0 * stderr_scale);
  return {value, d.str()};
}

// -------- quantum_potential --------

inline ScalarField detail_gaussian_w(const GridSpec& g) {
  return ScalarField::from_function(g, [](double x) { return std::exp(-0.5 * x * x); });
}

// Probe spacing h = 0.1 is part of the check definition: the identity is
// exact, but the second-difference stencil amplifies the per-point rounding
// of sqrt(c W) by ~12 eps / h^2, which must stay below the 1e-12 contract
// (3e-13 at h = 0.1; already 3e-11 at h = 0.01).
inline std::pair<double, std::string> check_gauge_invariance() {
  PhysicalConstants pc;
  auto g = GridSpec::line(-5.0, 5.0, 0.1);
  auto w = detail_gaussian_w(g);
  auto scaled = w * 3.7;
  double worst = 0.0;
  auto b0 = weyl_vector(w)[0], b1 = weyl_vector(scaled)[0];
  worst = std::max(worst, (b0 - b1).max_abs());
  for (auto mode : {QpMode::microstate, QpMode::bohm}) {
    auto q0 = quantum_potential_w(w, pc, mode).scalar;
    auto q1 = quantum_potential_w(scaled, pc, mode).scalar;
    worst = std::max(worst, (q0 - q1).max_abs());
  }
  return {worst, "weyl vector and both potentials under W -> 3.7 W, h = 0.1 probe"};
}

inline std::pair<double, std::string> check_coefficient_bridge() {
  PhysicalConstants pc;
  pc.mass = 1.7;  // hbar = 1; the x4 bridge is mass-independent
  auto g = GridSpec::line(-5.0, 5.0, 0.01);
  auto w = detail_gaussian_w(g);
  auto micro = quantum_potential_w(w, pc, QpMode::microstate).scalar;
  auto bohm = quantum_potential_w(w, pc, QpMode::bohm).scalar;
  double rel = (micro - bohm * 4.0).max_abs() / micro.max_abs();
  return {rel, "microstate potential vs 4x bohm potential at hbar = 1"};
}

inline double detail_closed_form_err(double h) {
  PhysicalConstants pc;
  auto g = GridSpec::line(-5.0, 5.0, h);
  auto q = quantum_potential_w(detail_gaussian_w(g), pc, QpMode::microstate).scalar;
  auto exact = ScalarField::from_function(g, [](double x) { return 1.0 - 0.5 * x * x; });
  return (q - exact).max_abs(1);
}

inline std::pair<double, std::string> check_closed_form() {
  return {detail_closed_form_err(0.01), "gaussian-W microstate potential vs 1 - x^2/2 at h = 0.01"};
}

inline std::pair<double, std::string> check_convergence_ratio() {
  double ratio = detail_closed_form_err(0.02) / detail_closed_form_err(0.01);
  std::ostringstream d;
  d << "closed-form error ratio under h -> h/2: " << format_double(ratio)
    << " (second order means ~4)";
  return {std::abs(ratio - 4.0), d.str()};
}

inline PhaseSeries detail_harmonic_series(const GridSpec& g, double e) {
  PhaseSeries s;
  s.times = {0.0, 0.05, 0.1};
  for (double t : s.times) {
    ScalarField f(g, "S");
    for (auto& v : f.values()) v = -e * t;
    s.slices.push_back(std::move(f));
  }
  return s;
}

inline std::pair<double, std::string> check_energy_residual() {
  PhysicalConstants pc;
  auto g = GridSpec::line(-4.0, 4.0, 0.01);
  auto w = ScalarField::from_function(g, [](double x) { return std::exp(-x * x); });
  auto v = ScalarField::from_function(g, [](double x) { return 0.5 * x * x; });
  auto r = hj_energy_residual(detail_harmonic_series(g, 0.5), w, v, pc, QpMode::bohm);
  return {r.max_abs(1), "harmonic ground state balance at h = 0.01, interior"};
}

inline std::pair<double, std::string> check_plane_wave_residual() {
  PhysicalConstants pc;
  auto g = GridSpec::line(-4.0, 4.0, 0.01);
  double p = 1.3, e = 0.5 * p * p;
  PhaseSeries s;
  s.times = {0.0, 0.05, 0.1};
  for (double t : s.times)
    s.slices.push_back(
        ScalarField::from_function(g, [&](double x) { return p * x - e * t; }));
  ScalarField w(g);
  for (auto& vv : w.values()) vv = 1.0;
  auto r = hj_energy_residual(s, w, ScalarField(g), pc, QpMode::bohm);
  return {r.max_abs(), "free plane wave with E = p^2/2m"};
}

struct StationarityProbe {
  GridSpec g = GridSpec::line(-8.0, 8.0, 2e-3);
  ScalarField rho{g};
  ScalarField v{g};
  PhaseSeries s;
  PhysicalConstants pc;

  explicit StationarityProbe(double shift) {
    rho = ScalarField::from_function(
        g, [shift](double x) { return std::exp(-0.5 * (x - shift) * (x - shift)); });
    rho = rho * (1.0 / rho.integral());
    v = ScalarField::from_function(g, [](double x) { return 0.5 * x * x; });
    s = detail_harmonic_series(g, 1.0);
  }

  double variation(double eps) const { return action_stationarity(rho, s, v, pc, eps); }
};

inline std::pair<double, std::string> check_stationarity_slope() {
  StationarityProbe probe(0.0);
  std::vector<double> eps = {1e-2, 1e-3, 1e-4};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double e : eps) {
    double x = std::log10(e), y = std::log10(std::abs(probe.variation(e)));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  double n = static_cast<double>(eps.size());
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  std::ostringstream d;
  d << "log-log slope of |dA/eps| at the extremal state: " << format_double(slope);
  return {std::abs(slope - 1.0), d.str()};
}

inline std::pair<double, std::string> check_stationarity_shifted() {
  StationarityProbe probe(0.5);
  double r = std::abs(probe.variation(1e-4));
  std::ostringstream d;
  d << "first variation at a shifted state stays finite: |r(1e-4)| = " << format_double(r)
    << ", required > 0.01";
  return {std::max(0.0, 0.01 - r), d.str()};
}

// -------- trajectories --------

inline std::pair<double, std::string> check_spreading() {
  GaussianPacket p;
  p.sigma0 = 0.7;
  std::vector<Vec2> init = {{0.5, 0.0}, {-1.2, 0.0}, {2.0, 0.0}};
  auto e = bohmian_trajectories(guidance_from_packet(p), init, 1e-3, 1.0, 1000);
  double factor = std::sqrt(1.0 + 1.0 / (4.0 * std::pow(p.sigma0, 4)));
  double worst = 0.0;
  for (size_t i = 0; i < init.size(); ++i) {
    double exact = init[i][0] * factor;
    worst = std::max(worst, std::abs(e.paths[i].back()[0] - exact) / std::abs(exact));
  }
  return {worst, "free-packet paths vs the analytic spreading law at t = 1"};
}

inline const DoubleSlitResult& detail_double_slit() {
  static const DoubleSlitResult r = double_slit_scenario({}, PhysicalConstants{});
  return r;
}

inline std::pair<double, std::string> check_tv_distance() {
  const auto& r = detail_double_slit();
  std::ostringstream d;
  d << "arrival histogram vs |psi|^2 over " << r.params.n_particles << " particles";
  return {r.tv_distance, d.str()};
}

inline std::pair<double, std::string> check_axis_crossings() {
  const auto& r = detail_double_slit();
  return {static_cast<double>(r.axis_crossings),
          "trajectories crossing the symmetry axis (must be none)"};
}

inline std::pair<double, std::string> check_q_difference() {
  const auto& r = detail_double_slit();
  std::ostringstream d;
  d << "max |Q_two_slit - Q_one_slit| = " << format_double(r.q_max_abs_difference)
    << ", required > 0.1";
  return {std::max(0.0, 0.1 - r.q_max_abs_difference), d.str()};
}

inline std::pair<double, std::string> check_equivariance() {
  GaussianPacket p;
  int n = 10000;
  std::vector<Vec2> init(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Rng rng(777, static_cast<std::uint64_t>(i));
    init[static_cast<size_t>(i)] = {p.center + p.sigma0 * rng.normal(), 0.0};
  }
  auto e = bohmian_trajectories(guidance_from_packet(p), init, 1e-3, 1.0, 1000);
  std::vector<double> finals;
  finals.reserve(init.size());
  for (const auto& path : e.paths) finals.push_back(path.back()[0]);
  double s1 = p.sigma_t(1.0);
  auto h = make_histogram(finals, -6.0 * s1, 6.0 * s1, 40);
  double tv = tv_distance_to_density(h, [&](double x) { return p.rho(x, 1.0); });
  return {tv, "|psi|^2-distributed ensemble stays |psi|^2 at t = 1 (10000 particles)"};
}

// -------- geometrodynamics --------

inline std::pair<double, std::string> check_conformal_equivalence() {
  PhysicalConstants pc;
  auto grid = GridSpec::rectangle(0.0, 1.0, 0.02, 0.0, 1.0, 0.02);
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 3; ++k) {
    Rng rng(7001, k);
    double a0 = rng.uniform(0.1, 0.4), a1 = rng.uniform(0.1, 0.4);
    double aq = rng.uniform(0.1, 0.4), off = rng.uniform(-0.3, 0.3);
    std::vector<ScalarField> comps(4, ScalarField(grid));
    comps[0] = ScalarField::from_function(
        grid, [=](double t, double x) { return 2.0 + a0 * std::sin(t + x); });
    comps[1] = ScalarField::from_function(
        grid, [=](double t, double x) { return 0.2 * std::sin(t * x); });
    comps[2] = comps[1];
    comps[3] = ScalarField::from_function(
        grid, [=](double t, double x) { return -(1.5 + a1 * std::cos(t - x)); });
    auto metric = SpacetimeMetric::full(grid, std::move(comps));
    auto s = ScalarField::from_function(grid, [=](double t, double x) {
      return 0.7 * t + 0.3 * x + a0 * std::sin(t) * std::cos(x);
    });
    auto q = ScalarField::from_function(
        grid, [=](double t, double x) { return aq * std::sin(x) * std::cos(t) + off; });
    auto ro = kg_hj_residual(metric, s, q, pc, KgForm::original);
    auto rc = kg_hj_residual(metric, s, q, pc, KgForm::conformal);
    worst = std::max(worst, (ro - rc).max_abs());
  }
  return {worst, "original vs conformal relativistic residual on 3 random smooth setups"};
}

inline std::pair<double, std::string> check_mass_shell() {
  PhysicalConstants pc;
  auto grid = GridSpec::rectangle(0.0, 1.0, 0.01, 0.0, 1.0, 0.01);
  auto mink = SpacetimeMetric::minkowski(grid, 2);
  double worst = 0.0;
  {
    auto s = ScalarField::from_function(grid, [](double t, double) { return t; });
    worst = std::max(worst,
                     kg_hj_residual(mink, s, ScalarField(grid), pc, KgForm::original).max_abs());
  }
  {
    double qv = 0.4, pt = std::sqrt(1.0 + std::exp(qv));
    auto s = ScalarField::from_function(grid, [pt](double t, double x) { return pt * t + x; });
    ScalarField q(grid);
    for (auto& vv : q.values()) vv = qv;
    worst = std::max(worst, kg_hj_residual(mink, s, q, pc, KgForm::original).max_abs());
    worst = std::max(worst, kg_hj_residual(mink, s, q, pc, KgForm::conformal).max_abs());
  }
  return {worst, "constructed mass-shell phases on the flat metric"};
}

inline std::pair<double, std::string> check_det_law() {
  auto g1 = GridSpec::line(0.0, 1.0, 0.05);
  auto q = ScalarField::from_function(g1, [](double x) { return 0.3 * std::sin(3.0 * x); });
  std::vector<ScalarField> comps(16, ScalarField(g1));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double base = i == j ? (i == 0 ? 2.0 : -2.0) : 0.0;
      comps[static_cast<size_t>(i * 4 + j)] = ScalarField::from_function(
          g1, [=](double x) { return base + 0.1 * std::sin((1.0 + i + j) * x); });
    }
  auto metric = SpacetimeMetric::full(g1, std::move(comps));
  auto scaled = conformal_metric(metric, q);
  auto lhs = scaled.det_field();
  auto rhs = metric.det_field().zip(q, [](double d, double qq) { return std::exp(4.0 * qq) * d; });
  return {(lhs - rhs).max_abs() / rhs.max_abs(),
          "det of the scaled metric vs e^{4Q} det g on a smooth 4x4 metric"};
}

inline std::pair<double, std::string> check_signature_preservation() {
  auto g = GridSpec::line(0.0, 1.0, 0.25);
  auto cf = [&](double v) {
    ScalarField f(g);
    for (auto& x : f.values()) x = v;
    return f;
  };
  int violations = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(4242, seed);
    double a, b, c;
    do {
      a = rng.uniform(-2.0, 2.0);
      b = rng.uniform(-2.0, 2.0);
      c = rng.uniform(-2.0, 2.0);
    } while (std::abs(a * c - b * b) < 1e-3);
    std::vector<ScalarField> comps = {cf(a), cf(b), cf(b), cf(c)};
    auto metric = SpacetimeMetric::full(g, std::move(comps));
    auto scaled = conformal_metric(metric, cf(rng.uniform(-1.0, 1.0)));
    if (scaled.signature_pattern() != metric.signature_pattern()) ++violations;
  }
  return {static_cast<double>(violations), "sign pattern changes over 100 seeded metrics"};
}

}  // namespace detail

// Ordered registry of every check; the filter selects by module-name prefix.
inline std::vector<CheckResult> run_validation_checks(const std::string& filter,
                                                      const Tolerances& tol) {
  struct Item {
    const char* name;
    const char* module;
    std::function<std::pair<double, std::string>()> fn;
  };
  const std::vector<Item> items = {
      {"moore_penrose", "morphogenetic", detail::check_moore_penrose},
      {"projection", "morphogenetic", detail::check_projection},
      {"square_case", "morphogenetic", detail::check_square_case},
      {"metric_identity", "morphogenetic", detail::check_metric_identity},
      {"gaussian_oracle", "entropy_fisher", detail::check_gaussian_oracle},
      {"psd_floor", "entropy_fisher", detail::check_psd_floor},
      {"cramer_rao", "entropy_fisher", detail::check_cramer_rao},
      {"gauge_invariance", "quantum_potential", detail::check_gauge_invariance},
      {"coefficient_bridge", "quantum_potential", detail::check_coefficient_bridge},
      {"closed_form", "quantum_potential", detail::check_closed_form},
      {"convergence_ratio", "quantum_potential", detail::check_convergence_ratio},
      {"energy_residual", "quantum_potential", detail::check_energy_residual},
      {"plane_wave_residual", "quantum_potential", detail::check_plane_wave_residual},
      {"stationarity_slope", "quantum_potential", detail::check_stationarity_slope},
      {"stationarity_shifted", "quantum_potential", detail::check_stationarity_shifted},
      {"spreading", "trajectories", detail::check_spreading},
      {"tv_distance", "trajectories", detail::check_tv_distance},
      {"axis_crossings", "trajectories", detail::check_axis_crossings},
      {"q_difference", "trajectories", detail::check_q_difference},
      {"equivariance", "trajectories", detail::check_equivariance},
      {"conformal_equivalence", "geometrodynamics", detail::check_conformal_equivalence},
      {"mass_shell", "geometrodynamics", detail::check_mass_shell},
      {"det_law", "geometrodynamics", detail::check_det_law},
      {"signature_preservation", "geometrodynamics", detail::check_signature_preservation},
  };

  if (!filter.empty()) {
    bool any = false;
    for (const auto& it : items)
      if (std::string(it.module).rfind(filter, 0) == 0) any = true;
    if (!any) throw ConfigError("validation filter '" + filter + "' matches no module");
  }

  std::vector<CheckResult> out;
  for (const auto& it : items) {
    if (!filter.empty() && std::string(it.module).rfind(filter, 0) != 0) continue;
    auto [value, det] = it.fn();
    CheckResult r;
    r.name = it.name;
    r.module = it.module;
    r.value = value;
    r.tolerance = tol.get(it.name);
    r.pass = value <= r.tolerance;
    r.detail = det;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace infogeom
