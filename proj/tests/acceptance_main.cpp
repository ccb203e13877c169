// Acceptance gate: nine go/no-go criteria printed one per line, process
// exit code = number of failures. All tolerances come from the pinned
// defaults in the Tolerances registry; nothing here may loosen them.
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "infogeom/scenarios.hpp"

using namespace infogeom;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int index, const std::string& label, bool pass, const std::string& extra) {
  std::printf("%s  criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", index, label.c_str(),
              extra.empty() ? "" : " -- ", extra.c_str());
  if (!pass) ++g_failures;
}

// A criterion built from named validation-suite rows: passes iff every row
// passed at its default tolerance.
void from_rows(int index, const std::string& label,
               const std::map<std::string, CheckResult>& rows,
               const std::vector<std::string>& names) {
  bool pass = true;
  double worst_ratio = 0.0;
  for (const auto& n : names) {
    auto it = rows.find(n);
    if (it == rows.end()) {
      report(index, label, false, "missing check row '" + n + "'");
      return;
    }
    pass = pass && it->second.pass;
    if (it->second.tolerance > 0.0)
      worst_ratio = std::max(worst_ratio, it->second.value / it->second.tolerance);
  }
  report(index, label, pass,
         "worst value/tolerance = " + format_double(worst_ratio) + " over " +
             std::to_string(names.size()) + " checks");
}

double harmonic_constancy_error(double h) {
  // Bohm-mode potential of the harmonic ground state W = e^{-x^2} plus
  // V = x^2/2 must be the constant ground energy 1/2.
  PhysicalConstants pc;
  auto g = GridSpec::line(-4.0, 4.0, h);
  auto w = ScalarField::from_function(g, [](double x) { return std::exp(-x * x); });
  auto q = quantum_potential_w(w, pc, QpMode::bohm).scalar;
  auto dev = q.zip(ScalarField::from_function(g, [](double x) { return 0.5 * x * x; }),
                   [](double qq, double vv) { return qq + vv - 0.5; });
  return dev.max_abs(1);
}

double energy_residual_error(double h) {
  PhysicalConstants pc;
  auto g = GridSpec::line(-4.0, 4.0, h);
  auto w = ScalarField::from_function(g, [](double x) { return std::exp(-x * x); });
  auto v = ScalarField::from_function(g, [](double x) { return 0.5 * x * x; });
  PhaseSeries s;
  s.times = {0.0, 0.05, 0.1};
  for (double t : s.times) {
    ScalarField f(g, "S");
    for (auto& x : f.values()) x = -0.5 * t;
    s.slices.push_back(std::move(f));
  }
  return hj_energy_residual(s, w, v, pc, QpMode::bohm).max_abs(1);
}

bool second_order(double coarse, double fine) {
  double r = coarse / fine;
  return r > 3.5 && r < 4.5;
}

fs::path fresh_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("infogeom_acceptance_" + tag);
  fs::remove_all(d);
  return d;
}

}  // namespace

int main() {
  Tolerances defaults;
  std::map<std::string, CheckResult> rows;
  for (auto& r : run_validation_checks("", defaults)) rows[r.name] = r;

  from_rows(1, "pseudo-inverse, projection, square-case and metric identities", rows,
            {"moore_penrose", "projection", "square_case", "metric_identity"});
  from_rows(2, "fisher quadrature oracle and PSD over seeded families", rows,
            {"gaussian_oracle", "psd_floor"});
  from_rows(3, "estimator covariance respects the information bound within MC error", rows,
            {"cramer_rao"});

  {
    bool rows_ok = true;
    for (const auto& n : {"gauge_invariance", "coefficient_bridge", "closed_form",
                          "convergence_ratio"})
      rows_ok = rows_ok && rows.count(n) && rows.at(n).pass;
    double dev1 = harmonic_constancy_error(0.01), dev2 = harmonic_constancy_error(0.02);
    bool harmonic_ok = dev1 < defaults.get("closed_form") && second_order(dev2, dev1);
    report(4, "quantum potential: gauge freedom, coefficient bridge, closed forms, O(h^2)",
           rows_ok && harmonic_ok,
           "harmonic constancy error " + format_double(dev1) + ", ratio " +
               format_double(dev2 / dev1));
  }
  {
    bool rows_ok = rows.count("energy_residual") && rows.at("energy_residual").pass &&
                   rows.count("plane_wave_residual") && rows.at("plane_wave_residual").pass;
    double e1 = energy_residual_error(0.01), e2 = energy_residual_error(0.02);
    report(5, "energy balance: stationary-state residual at second order, exact plane wave",
           rows_ok && second_order(e2, e1),
           "residual " + format_double(e1) + ", ratio " + format_double(e2 / e1));
  }
  from_rows(6, "action is stationary at the extremal density and only there", rows,
            {"stationarity_slope", "stationarity_shifted"});
  from_rows(7, "trajectories: spreading law, interference statistics, no axis crossings",
            rows, {"spreading", "tv_distance", "axis_crossings", "q_difference"});
  from_rows(8, "relativistic: conformal equivalence, mass shells, det law, signatures",
            rows, {"conformal_equivalence", "mass_shell", "det_law",
                   "signature_preservation"});

  {
    // Byte-level determinism of a full scenario rerun with a fixed seed.
    std::string cfg = "[run]\nscenario = double-slit\nseed = 42\n";
    auto d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
    bool pass = true;
    std::string note;
    try {
      auto c1 = ScenarioConfig::load(cfg, {d1.string(), {}});
      auto c2 = ScenarioConfig::load(cfg, {d2.string(), {}});
      auto r1 = run_scenario(c1);
      auto r2 = run_scenario(c2);
      pass = r1.files.size() == r2.files.size() && !r1.files.empty();
      for (size_t i = 0; pass && i < r1.files.size(); ++i)
        pass = r1.files[i].name == r2.files[i].name &&
               read_text_file(d1 / r1.files[i].name) == read_text_file(d2 / r2.files[i].name);
      pass = pass && report_to_json(r1, false).dump() == report_to_json(r2, false).dump();
      note = std::to_string(r1.files.size()) + " artifacts compared bytewise";
    } catch (const Error& e) {
      pass = false;
      note = e.what();
    }
    report(9, "identical config and seed reproduce every artifact byte for byte", pass, note);
  }

  std::printf("%d of 9 criteria passed\n", 9 - g_failures);
  return g_failures;
}
