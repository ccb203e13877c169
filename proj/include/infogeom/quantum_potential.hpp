#pragma once
// Quantum potential and Fisher-information functionals on gridded microstate
// densities W > 0.
//
// Both quantum-potential modes reduce analytically to second derivatives of
// sqrt(W):
//     (1/W^2) dW_i dW_j - (2/W) d2W_ij  ==  -4 (d2 sqrt(W)_ij) / sqrt(W),
// so the implementation builds the shared core C_ij = D_ij sqrt(W) / sqrt(W)
// once and scales it per mode:
//     microstate mode:  Q_ij = -(2/m) C_ij          (no hbar; trace = scalar)
//     bohm mode:        Q    = -(hbar^2/2m) sum_i C_ii
// That makes the x4 relation between the modes (at hbar = 1) an identity of
// the discretization, not an approximate statement, while the comparison with
// closed forms still converges at the stencil's O(h^2).

#include <cmath>
#include <string>
#include <vector>

#include "infogeom/constants.hpp"
#include "infogeom/errors.hpp"
#include "infogeom/field.hpp"

namespace infogeom {

enum class QpMode { microstate, bohm };

inline QpMode qp_mode_from_string(const std::string& s) {
  if (s == "microstate") return QpMode::microstate;
  if (s == "bohm") return QpMode::bohm;
  throw ConfigError("unknown quantum-potential mode '" + s + "'");
}

// Log-derivative vector B_h = d log W / dx_h, one field per axis. Invariant
// under W -> cW because only log-derivatives enter.
inline std::vector<ScalarField> weyl_vector(const ScalarField& w) {
  ScalarField lw = log_field(w);
  std::vector<ScalarField> out;
  for (int a = 0; a < w.dims(); ++a) {
    ScalarField d = lw.derivative(a);
    d.set_name("B" + std::to_string(a));
    out.push_back(std::move(d));
  }
  return out;
}

// Pointwise defect of the factorization condition
//   d2 log W / dx_k dx_p = (d log W/dx_k)(d log W/dx_p),
// maximized over index pairs. Zero exactly on W = 1/(c - x)-type profiles.
inline ScalarField eq_factorization_residual(const ScalarField& w) {
  ScalarField lw = log_field(w);
  int d = w.dims();
  std::vector<ScalarField> first;
  for (int a = 0; a < d; ++a) first.push_back(lw.derivative(a));

  ScalarField out(w.grid(), "factorization_residual");
  auto accumulate = [&](const ScalarField& second, const ScalarField& fa,
                        const ScalarField& fb) {
    for (int k = 0; k < second.size(); ++k) {
      double r = std::abs(second.values()[k] - fa.values()[k] * fb.values()[k]);
      out.values()[k] = std::max(out.values()[k], r);
    }
  };
  for (int a = 0; a < d; ++a) accumulate(lw.second_derivative(a), first[a], first[a]);
  if (d == 2) accumulate(lw.mixed_derivative(), first[0], first[1]);
  return out;
}

struct QPotentialResult {
  QpMode mode;
  ScalarField scalar;
  // Microstate mode only: the full tensor, row-major (i * dims + j).
  std::vector<ScalarField> tensor;
};

inline QPotentialResult quantum_potential_w(const ScalarField& w, const PhysicalConstants& consts,
                                            QpMode mode) {
  consts.validate();
  ScalarField u = sqrt_field(w);
  int d = w.dims();

  // Shared core C_ij = D_ij u / u; the mixed entry is computed once and
  // mirrored, so the tensor is symmetric exactly.
  std::vector<ScalarField> core(static_cast<size_t>(d * d), ScalarField(w.grid()));
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      ScalarField dij = (i == j) ? u.second_derivative(i) : u.derivative(i).derivative(j);
      ScalarField c = dij.zip(u, [](double a, double b) { return a / b; });
      core[static_cast<size_t>(i * d + j)] = c;
      if (i != j) core[static_cast<size_t>(j * d + i)] = c;
    }

  ScalarField trace = core[0];
  if (d == 2) trace = trace + core[3];

  QPotentialResult out;
  out.mode = mode;
  if (mode == QpMode::microstate) {
    double coef = -2.0 / consts.mass;
    out.scalar = trace * coef;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        ScalarField t = core[static_cast<size_t>(i * d + j)] * coef;
        t.set_name("Q" + std::to_string(i) + std::to_string(j));
        out.tensor.push_back(std::move(t));
      }
  } else {
    out.scalar = trace * (-consts.hbar * consts.hbar / (2.0 * consts.mass));
  }
  out.scalar.set_name("Q");
  return out;
}

// A phase S sampled at a short series of times on a fixed spatial grid.
struct PhaseSeries {
  std::vector<double> times;
  std::vector<ScalarField> slices;

  void validate() const {
    if (times.size() < 2 || times.size() != slices.size())
      throw GridMismatch("phase series needs >= 2 slices with matching times");
    for (size_t k = 1; k < times.size(); ++k) {
      if (!(times[k] > times[k - 1])) throw GridMismatch("slice times must increase");
      slices[k].require_same_grid(slices[0]);
    }
  }

  // dS/dt at slice k: forward/backward two-slice at the ends (and everywhere
  // when only two slices exist), three-slice central in the interior.
  ScalarField time_derivative(size_t k) const {
    validate();
    size_t n = times.size();
    if (k >= n) throw GridMismatch("slice index out of range");
    if (n == 2) {
      double dt = times[1] - times[0];
      return (slices[1] - slices[0]) * (1.0 / dt);
    }
    if (k == 0) {
      double dt = times[1] - times[0];
      return (slices[1] - slices[0]) * (1.0 / dt);
    }
    if (k == n - 1) {
      double dt = times[n - 1] - times[n - 2];
      return (slices[n - 1] - slices[n - 2]) * (1.0 / dt);
    }
    double dt = times[k + 1] - times[k - 1];
    return (slices[k + 1] - slices[k - 1]) * (1.0 / dt);
  }

  // Slice used for single-time diagnostics: the middle one when possible.
  size_t reference_slice() const { return times.size() == 2 ? 0 : times.size() / 2; }
};

struct ActionBreakdown {
  double classical = 0.0;    // integral of rho (dS/dt + |grad S|^2/2m + V)
  double fisher_term = 0.0;  // integral of rho (1/2m) |grad log rho|^2
  double total = 0.0;
};

namespace detail {
inline ScalarField grad_square(const ScalarField& f) {
  ScalarField g = f.derivative(0);
  ScalarField out = g * g;
  if (f.dims() == 2) {
    ScalarField gy = f.derivative(1);
    out = out + gy * gy;
  }
  return out;
}
}  // namespace detail

// Action of a density/phase pair over the sampled time window, with the
// classical part and the Fisher-information part reported separately. rho is
// held fixed across the window (stationary-state data); it must be normalized
// on the grid to 1e-6.
inline ActionBreakdown fisher_action(const ScalarField& rho, const PhaseSeries& s,
                                     const ScalarField& v, const PhysicalConstants& consts) {
  consts.validate();
  s.validate();
  rho.require_same_grid(v);
  rho.require_same_grid(s.slices[0]);
  if (std::abs(rho.integral() - 1.0) > 1e-6)
    throw NotNormalized("density must integrate to 1 on its grid");

  ScalarField lrho = log_field(rho);
  double inv2m = 1.0 / (2.0 * consts.mass);

  // Spatial integrals per slice, then trapezoid across the times.
  std::vector<double> classical_slice(s.times.size());
  for (size_t k = 0; k < s.times.size(); ++k) {
    ScalarField dsdt = s.time_derivative(k);
    ScalarField kin = detail::grad_square(s.slices[k]) * inv2m;
    classical_slice[k] = ((dsdt + kin + v) * rho).integral();
  }
  double classical = 0.0;
  for (size_t k = 0; k + 1 < s.times.size(); ++k)
    classical += 0.5 * (classical_slice[k] + classical_slice[k + 1]) * (s.times[k + 1] - s.times[k]);

  double window = s.times.back() - s.times.front();
  double fisher = (detail::grad_square(lrho) * inv2m * rho).integral() * window;

  return {classical, fisher, classical + fisher};
}

// First-variation probe: perturb rho along a fixed smooth direction, renormalize,
// and return [A(rho_eps) - A(rho)] / eps. At an extremal this shrinks linearly
// in eps (pure second variation); away from one it tends to a nonzero constant.
inline double action_stationarity(const ScalarField& rho, const PhaseSeries& s,
                                  const ScalarField& v, const PhysicalConstants& consts,
                                  double eps) {
  if (eps == 0.0) return 0.0;
  double a0 = fisher_action(rho, s, v, consts).total;

  // Fixed perturbation direction: bounded, smooth, odd, so it couples to
  // translations of the density without threatening positivity.
  ScalarField phi = rho.dims() == 1
                        ? ScalarField::from_function(rho.grid(),
                                                     [](double x) { return std::tanh(x); })
                        : ScalarField::from_function(
                              rho.grid(),
                              [](double x, double y) { return std::tanh(x) + std::tanh(y); });
  ScalarField pert = rho.zip(phi, [eps](double r, double p) { return r * (1.0 + eps * p); });
  if (!(pert.min_value() > 0.0))
    throw NonPositiveField("perturbation amplitude too large for positivity");
  double z = pert.integral();
  ScalarField rho_eps = pert * (1.0 / z);

  double a1 = fisher_action(rho_eps, s, v, consts).total;
  return (a1 - a0) / eps;
}

// Pointwise energy defect of the quantum Hamilton-Jacobi balance
//   |grad S|^2 / 2m + V + Q + dS/dt
// at the series' reference slice. Vanishes identically on exact stationary
// data; a wrong total energy shows up as a constant offset.
inline ScalarField hj_energy_residual(const PhaseSeries& s, const ScalarField& w,
                                      const ScalarField& v, const PhysicalConstants& consts,
                                      QpMode mode) {
  consts.validate();
  s.validate();
  w.require_same_grid(v);
  w.require_same_grid(s.slices[0]);
  size_t k = s.reference_slice();
  ScalarField q = quantum_potential_w(w, consts, mode).scalar;
  ScalarField kin = detail::grad_square(s.slices[k]) * (1.0 / (2.0 * consts.mass));
  ScalarField out = kin + v + q + s.time_derivative(k);
  out.set_name("hj_residual");
  return out;
}

}  // namespace infogeom
