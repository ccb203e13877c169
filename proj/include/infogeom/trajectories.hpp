#pragma once
// Bohmian guidance dx/dt = grad S / m: closed-form free Gaussian packets and
// their superpositions, gridded-phase guidance, a fixed-step classical RK4
// integrator with boundary freezing, arrival histograms, and the two-slit
// interference scenario.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "infogeom/constants.hpp"
#include "infogeom/errors.hpp"
#include "infogeom/field.hpp"
#include "infogeom/quantum_potential.hpp"
#include "infogeom/rng.hpp"

namespace infogeom {

using Vec2 = std::array<double, 2>;

// Free 1D Gaussian wave packet evolved in closed form. With
// stretch = 1 + i hbar t / (2 m sigma0^2) and x' = x - center - (p/m) t:
//   psi(x,t) = (2 pi sigma0^2)^{-1/4} stretch^{-1/2}
//              exp(-x'^2 / (4 sigma0^2 stretch) + i (p x - p^2 t / 2m) / hbar)
struct GaussianPacket {
  double sigma0 = 1.0;
  double center = 0.0;
  double momentum = 0.0;
  double mass = 1.0;
  double hbar = 1.0;

  void validate() const {
    if (!(sigma0 > 0.0) || !(mass > 0.0) || !(hbar > 0.0))
      throw ConfigError("packet needs sigma0, mass, hbar > 0");
  }

  std::complex<double> stretch(double t) const {
    return {1.0, hbar * t / (2.0 * mass * sigma0 * sigma0)};
  }
  double sigma_t(double t) const { return sigma0 * std::abs(stretch(t)); }
  double drift(double t) const { return center + momentum * t / mass; }

  std::complex<double> amplitude(double x, double t) const {
    std::complex<double> s = stretch(t);
    double xp = x - drift(t);
    std::complex<double> z = -xp * xp / (4.0 * sigma0 * sigma0 * s);
    z += std::complex<double>(0.0, (momentum * x - momentum * momentum * t / (2.0 * mass)) / hbar);
    double pref = std::pow(2.0 * M_PI * sigma0 * sigma0, -0.25);
    return pref / std::sqrt(s) * std::exp(z);
  }

  std::complex<double> dlog_dx(double x, double t) const {
    std::complex<double> s = stretch(t);
    double xp = x - drift(t);
    return -xp / (2.0 * sigma0 * sigma0 * s) + std::complex<double>(0.0, momentum / hbar);
  }

  // Stable direct form, usable far in the tails where |amplitude|^2 would
  // underflow: |psi|^2 = (2 pi sigma_t^2)^{-1/2} exp(-x'^2 / (2 sigma_t^2)).
  double rho(double x, double t) const {
    double st = sigma_t(t);
    double xp = x - drift(t);
    return std::exp(-xp * xp / (2.0 * st * st)) / std::sqrt(2.0 * M_PI * st * st);
  }

  // Guidance velocity (hbar/m) Im d log psi / dx in rational closed form.
  double velocity(double x, double t) const {
    double tau = hbar * t / (2.0 * mass * sigma0 * sigma0);
    double xp = x - drift(t);
    return momentum / mass +
           xp * hbar * tau / (2.0 * mass * sigma0 * sigma0 * (1.0 + tau * tau));
  }
};

// Weighted coherent sum of packets sharing mass and hbar. Unnormalized: rho
// integrates to sum |w|^2 plus overlap terms; consumers that need a density
// normalize numerically.
struct PacketSuperposition {
  std::vector<GaussianPacket> packets;
  std::vector<std::complex<double>> weights;

  void validate() const {
    if (packets.empty() || packets.size() != weights.size())
      throw ConfigError("superposition needs matching packet and weight counts");
    for (const auto& p : packets) {
      p.validate();
      if (p.mass != packets[0].mass || p.hbar != packets[0].hbar)
        throw ConfigError("superposed packets must share mass and hbar");
    }
  }

  std::complex<double> amplitude(double x, double t) const {
    std::complex<double> a = 0.0;
    for (size_t k = 0; k < packets.size(); ++k) a += weights[k] * packets[k].amplitude(x, t);
    return a;
  }

  double rho(double x, double t) const { return std::norm(amplitude(x, t)); }

  double velocity(double x, double t) const {
    std::complex<double> num = 0.0, den = 0.0;
    for (size_t k = 0; k < packets.size(); ++k) {
      std::complex<double> a = weights[k] * packets[k].amplitude(x, t);
      den += a;
      num += a * packets[k].dlog_dx(x, t);
    }
    return packets[0].hbar / packets[0].mass * std::imag(num / den);
  }
};

// Velocity field the integrator consumes. Batch evaluation lets gridded
// sources hoist per-time setup across the whole ensemble.
struct GuidanceField {
  int dims = 1;
  std::function<void(const std::vector<Vec2>& pos, double t, std::vector<Vec2>& vel)> velocity;
  bool has_bounds = false;
  Vec2 lo{0.0, 0.0};
  Vec2 hi{0.0, 0.0};
};

inline GuidanceField guidance_from_packet(const GaussianPacket& p) {
  p.validate();
  GuidanceField g;
  g.dims = 1;
  g.velocity = [p](const std::vector<Vec2>& pos, double t, std::vector<Vec2>& vel) {
    for (size_t i = 0; i < pos.size(); ++i) vel[i] = {p.velocity(pos[i][0], t), 0.0};
  };
  return g;
}

// 2D guidance for a product state: superposed packets transversally (axis 0),
// a single packet longitudinally (axis 1); the velocity separates.
inline GuidanceField guidance_from_product(const PacketSuperposition& transverse,
                                           const GaussianPacket& longitudinal) {
  transverse.validate();
  longitudinal.validate();
  GuidanceField g;
  g.dims = 2;
  g.velocity = [transverse, longitudinal](const std::vector<Vec2>& pos, double t,
                                          std::vector<Vec2>& vel) {
    for (size_t i = 0; i < pos.size(); ++i)
      vel[i] = {transverse.velocity(pos[i][0], t), longitudinal.velocity(pos[i][1], t)};
  };
  return g;
}

// Guidance from a phase sampled on a grid at a few times: per-slice gradient
// fields, bilinear interpolation in space, linear interpolation in time,
// clamped at the series ends. Bounds are the grid extents.
inline GuidanceField velocity_from_phase_series(const PhaseSeries& s,
                                                const PhysicalConstants& consts) {
  consts.validate();
  s.validate();
  const GridSpec grid = s.slices[0].grid();
  auto grads = std::make_shared<std::vector<std::vector<ScalarField>>>();
  for (const auto& slice : s.slices) {
    std::vector<ScalarField> g;
    for (int a = 0; a < grid.dims; ++a) g.push_back(slice.derivative(a));
    grads->push_back(std::move(g));
  }
  auto times = s.times;
  double inv_m = 1.0 / consts.mass;

  GuidanceField g;
  g.dims = grid.dims;
  g.has_bounds = true;
  g.lo = {grid.axis_min(0), grid.dims == 2 ? grid.axis_min(1) : 0.0};
  g.hi = {grid.axis_max(0), grid.dims == 2 ? grid.axis_max(1) : 0.0};
  g.velocity = [grads, times, inv_m, dims = grid.dims](const std::vector<Vec2>& pos, double t,
                                                       std::vector<Vec2>& vel) {
    size_t k = 0;
    while (k + 2 < times.size() && t >= times[k + 1]) ++k;
    double span = times[k + 1] - times[k];
    double f = (t - times[k]) / span;
    f = std::min(1.0, std::max(0.0, f));
    const auto& ga = (*grads)[k];
    const auto& gb = (*grads)[k + 1];
    for (size_t i = 0; i < pos.size(); ++i) {
      for (int a = 0; a < dims; ++a) {
        double va = dims == 1 ? ga[a].interpolate(pos[i][0]) : ga[a].interpolate(pos[i][0], pos[i][1]);
        double vb = dims == 1 ? gb[a].interpolate(pos[i][0]) : gb[a].interpolate(pos[i][0], pos[i][1]);
        vel[i][a] = ((1.0 - f) * va + f * vb) * inv_m;
      }
      if (dims == 1) vel[i][1] = 0.0;
    }
  };
  return g;
}

struct TrajectoryEnsemble {
  int dims = 1;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> times;                    // recorded instants
  std::vector<std::vector<Vec2>> paths;         // [particle][record]
  std::vector<std::uint8_t> frozen;             // hit the boundary and stopped

  int n_particles() const { return static_cast<int>(paths.size()); }
};

// Called after every integrator step (not just recorded ones), so running
// statistics like axis-crossing counts never require storing the full history.
using StepObserver =
    std::function<void(int step, double t, const std::vector<Vec2>& pos,
                       const std::vector<std::uint8_t>& frozen)>;

inline TrajectoryEnsemble bohmian_trajectories(const GuidanceField& field,
                                               const std::vector<Vec2>& initial, double dt,
                                               double t_final, int record_stride = 1,
                                               const StepObserver& observer = {}) {
  if (!(dt > 0.0) || !(t_final > 0.0)) throw StepInvalid("need dt > 0 and t_final > 0");
  long long n_steps = std::llround(t_final / dt);
  if (n_steps < 1 || std::abs(n_steps * dt - t_final) > 1e-9 * std::max(1.0, t_final))
    throw StepInvalid("t_final must be an integer number of dt steps");
  if (initial.empty()) throw EmptyEnsemble("no initial positions");
  if (record_stride < 1) throw StepInvalid("record_stride must be >= 1");
  if (!field.velocity) throw ConfigError("guidance field has no velocity function");

  size_t n = initial.size();
  std::vector<Vec2> pos = initial;
  TrajectoryEnsemble out;
  out.dims = field.dims;
  out.dt = dt;
  out.frozen.assign(n, 0);
  out.paths.assign(n, {});

  auto record = [&](double t) {
    out.times.push_back(t);
    for (size_t i = 0; i < n; ++i) out.paths[i].push_back(pos[i]);
  };
  record(0.0);

  std::vector<Vec2> k1(n), k2(n), k3(n), k4(n), stage(n);
  auto clamp = [&](Vec2 p) {
    if (!field.has_bounds) return p;
    for (int a = 0; a < field.dims; ++a) p[a] = std::min(field.hi[a], std::max(field.lo[a], p[a]));
    return p;
  };

  for (long long step = 0; step < n_steps; ++step) {
    double t = step * dt;
    field.velocity(pos, t, k1);
    for (size_t i = 0; i < n; ++i)
      stage[i] = clamp({pos[i][0] + 0.5 * dt * k1[i][0], pos[i][1] + 0.5 * dt * k1[i][1]});
    field.velocity(stage, t + 0.5 * dt, k2);
    for (size_t i = 0; i < n; ++i)
      stage[i] = clamp({pos[i][0] + 0.5 * dt * k2[i][0], pos[i][1] + 0.5 * dt * k2[i][1]});
    field.velocity(stage, t + 0.5 * dt, k3);
    for (size_t i = 0; i < n; ++i)
      stage[i] = clamp({pos[i][0] + dt * k3[i][0], pos[i][1] + dt * k3[i][1]});
    field.velocity(stage, t + dt, k4);

    for (size_t i = 0; i < n; ++i) {
      if (out.frozen[i]) continue;
      Vec2 next;
      for (int a = 0; a < 2; ++a)
        next[a] = pos[i][a] +
                  dt / 6.0 * (k1[i][a] + 2.0 * k2[i][a] + 2.0 * k3[i][a] + k4[i][a]);
      if (field.has_bounds) {
        bool outside = false;
        for (int a = 0; a < field.dims; ++a)
          outside = outside || next[a] < field.lo[a] || next[a] > field.hi[a];
        if (outside) {
          next = clamp(next);
          out.frozen[i] = 1;
        }
      }
      pos[i] = next;
    }

    double t_next = (step + 1) * dt;
    if (observer) observer(static_cast<int>(step), t_next, pos, out.frozen);
    if ((step + 1) % record_stride == 0 || step + 1 == n_steps) record(t_next);
  }
  return out;
}

// --- arrival statistics -----------------------------------------------------

struct Histogram {
  double lo = 0.0, hi = 1.0;
  int nbins = 0;
  std::vector<int> counts;
  int total = 0;

  double bin_width() const { return (hi - lo) / nbins; }
  double bin_center(int i) const { return lo + (i + 0.5) * bin_width(); }
  // Probability density per bin (counts / (total * width)).
  std::vector<double> normalized() const {
    std::vector<double> out(counts.size());
    double scale = total > 0 ? 1.0 / (total * bin_width()) : 0.0;
    for (size_t i = 0; i < counts.size(); ++i) out[i] = counts[i] * scale;
    return out;
  }
};

inline Histogram make_histogram(const std::vector<double>& values, double lo, double hi,
                                int nbins) {
  if (!(hi > lo) || nbins < 1) throw ConfigError("histogram needs hi > lo and nbins >= 1");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.nbins = nbins;
  h.counts.assign(static_cast<size_t>(nbins), 0);
  for (double v : values) {
    int i = static_cast<int>((v - lo) / h.bin_width());
    i = std::max(0, std::min(nbins - 1, i));  // clamp: mass is conserved
    ++h.counts[static_cast<size_t>(i)];
    ++h.total;
  }
  return h;
}

// Total-variation distance between the histogram and a density evaluated at
// the bin centers; both sides are normalized to unit mass over the bins, so a
// common scale factor in `density` drops out.
inline double tv_distance_to_density(const Histogram& h,
                                     const std::function<double(double)>& density) {
  if (h.total == 0) throw EmptyEnsemble("histogram holds no samples");
  std::vector<double> q(static_cast<size_t>(h.nbins));
  double qsum = 0.0;
  for (int i = 0; i < h.nbins; ++i) {
    q[static_cast<size_t>(i)] = std::max(0.0, density(h.bin_center(i)));
    qsum += q[static_cast<size_t>(i)];
  }
  if (!(qsum > 0.0)) throw NonPositiveField("reference density vanishes on all bins");
  double tv = 0.0;
  for (int i = 0; i < h.nbins; ++i) {
    double p = static_cast<double>(h.counts[static_cast<size_t>(i)]) / h.total;
    tv += std::abs(p - q[static_cast<size_t>(i)] / qsum);
  }
  return 0.5 * tv;
}

// --- two-slit scenario -------------------------------------------------------

struct DoubleSlitParams {
  double slit_separation = 2.0;   // transverse distance between slit centers
  double slit_width_sigma = 0.2;  // transverse packet width per slit
  double packet_momentum = 5.0;   // longitudinal momentum toward the screen
  double longitudinal_sigma = 1.0;
  double screen_time = 1.0;
  double dt = 1e-3;
  int n_particles = 10000;
  std::uint64_t seed = 20240817;
  int record_stride = 100;
  int histogram_bins = 40;
  double histogram_halfwidth = 8.0;

  void validate() const {
    if (!(slit_separation > 0.0) || !(slit_width_sigma > 0.0) || !(longitudinal_sigma > 0.0))
      throw ConfigError("slit geometry parameters must be positive");
    if (!(screen_time > 0.0) || !(dt > 0.0) || n_particles < 1)
      throw ConfigError("need screen_time > 0, dt > 0, n_particles >= 1");
    if (histogram_bins < 1 || !(histogram_halfwidth > 0.0))
      throw ConfigError("histogram needs bins >= 1 and positive halfwidth");
  }
};

struct DoubleSlitResult {
  DoubleSlitParams params;
  TrajectoryEnsemble ensemble;
  Histogram arrivals;
  double tv_distance = 0.0;       // empirical arrivals vs |psi|^2 at the screen
  long long axis_crossings = 0;   // transverse sign changes across all steps
  ScalarField rho_initial;        // transverse |psi|^2 at t = 0
  ScalarField rho_screen;         // transverse |psi|^2 at the screen time
  ScalarField rho_2d;             // full density at the screen time
  ScalarField phase_2d;           // unwrapped phase at the screen time
  ScalarField q_two_slit;         // bohm-mode potential of rho_2d
  ScalarField q_one_slit;         // same with one slit closed
  double q_max_abs_difference = 0.0;
};

inline DoubleSlitResult double_slit_scenario(const DoubleSlitParams& params,
                                             const PhysicalConstants& consts) {
  params.validate();
  consts.validate();

  double half = 0.5 * params.slit_separation;
  GaussianPacket plus{params.slit_width_sigma, half, 0.0, consts.mass, consts.hbar};
  GaussianPacket minus{params.slit_width_sigma, -half, 0.0, consts.mass, consts.hbar};
  GaussianPacket along{params.longitudinal_sigma, 0.0, params.packet_momentum, consts.mass,
                       consts.hbar};
  PacketSuperposition both{{plus, minus}, {1.0, 1.0}};

  // Seeded rejection sampling of the exact transverse |psi|^2 at t = 0:
  // proposal = even mixture of the two slit Gaussians, envelope factor 4 from
  // |a + b|^2 <= 2(|a|^2 + |b|^2).
  Rng rng(params.seed);
  std::vector<Vec2> initial(static_cast<size_t>(params.n_particles));
  for (auto& p : initial) {
    double x;
    for (;;) {
      const GaussianPacket& slit = rng.uniform() < 0.5 ? minus : plus;
      x = rng.normal(slit.center, slit.sigma0);
      double target = both.rho(x, 0.0);
      double proposal = 0.5 * (plus.rho(x, 0.0) + minus.rho(x, 0.0));
      if (rng.uniform() * 4.0 * proposal < target) break;
    }
    p = {x, rng.normal(0.0, params.longitudinal_sigma)};
  }

  GuidanceField guide = guidance_from_product(both, along);
  long long crossings = 0;
  std::vector<double> prev_x(initial.size());
  for (size_t i = 0; i < initial.size(); ++i) prev_x[i] = initial[i][0];
  StepObserver count_crossings = [&](int, double, const std::vector<Vec2>& pos,
                                     const std::vector<std::uint8_t>&) {
    for (size_t i = 0; i < pos.size(); ++i) {
      if (prev_x[i] * pos[i][0] < 0.0) ++crossings;
      prev_x[i] = pos[i][0];
    }
  };

  DoubleSlitResult out;
  out.params = params;
  out.ensemble = bohmian_trajectories(guide, initial, params.dt, params.screen_time,
                                      params.record_stride, count_crossings);
  out.ensemble.seed = params.seed;
  out.axis_crossings = crossings;

  std::vector<double> arrivals_x(initial.size());
  for (size_t i = 0; i < initial.size(); ++i) arrivals_x[i] = out.ensemble.paths[i].back()[0];
  out.arrivals = make_histogram(arrivals_x, -params.histogram_halfwidth,
                                params.histogram_halfwidth, params.histogram_bins);
  double t_s = params.screen_time;
  out.tv_distance =
      tv_distance_to_density(out.arrivals, [&](double x) { return both.rho(x, t_s); });

  // Diagnostic fields. The initial density lives on a narrow window around the
  // slits (it underflows further out); screen-time fields use the wide window.
  double washed = half + 6.0 * params.slit_width_sigma;
  out.rho_initial = ScalarField::from_function(
      GridSpec::line(-washed, washed, 0.01), [&](double x) { return both.rho(x, 0.0); },
      "rho0");
  auto screen_grid = GridSpec::line(-params.histogram_halfwidth, params.histogram_halfwidth, 0.01);
  out.rho_screen = ScalarField::from_function(
      screen_grid, [&](double x) { return both.rho(x, t_s); }, "rho_screen");

  double y_mid = params.packet_momentum / consts.mass * t_s;
  double y_pad = 4.0 * along.sigma_t(t_s) + 1.0;
  auto grid2 = GridSpec::rectangle(-params.histogram_halfwidth, params.histogram_halfwidth, 0.05,
                                   y_mid - y_pad, y_mid + y_pad, 0.05);
  auto psi2 = [&](double x, double y) { return both.amplitude(x, t_s) * along.amplitude(y, t_s); };
  out.rho_2d = ScalarField::from_function(
      grid2, [&](double x, double y) { return std::norm(psi2(x, y)); }, "rho");
  ScalarField wrapped = ScalarField::from_function(
      grid2, [&](double x, double y) { return std::arg(psi2(x, y)); }, "phase");
  out.phase_2d = unwrap_phase(wrapped);
  out.phase_2d.set_name("S");

  out.q_two_slit = quantum_potential_w(out.rho_2d, consts, QpMode::bohm).scalar;
  out.q_two_slit.set_name("q_two_slit");
  ScalarField rho_one = ScalarField::from_function(
      grid2,
      [&](double x, double y) { return std::norm(plus.amplitude(x, t_s)) * along.rho(y, t_s); },
      "rho_one");
  out.q_one_slit = quantum_potential_w(rho_one, consts, QpMode::bohm).scalar;
  out.q_one_slit.set_name("q_one_slit");
  out.q_max_abs_difference = (out.q_two_slit - out.q_one_slit).max_abs(1);
  return out;
}

}  // namespace infogeom
