#pragma once
// Relativistic layer: d'Alembertian-based quantum potential, the exponential
// quantum mass, conformal rescaling of spacetime metrics, and the
// Hamilton-Jacobi mass-shell residual in original and conformal form.
//
// Conventions: metric signature (+,-,-,-); on spacetime grids axis 0 is time
// (layout time_then_space) unless the layout says otherwise; natural units
// hbar = c = m = 1 by default via PhysicalConstants.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "infogeom/constants.hpp"
#include "infogeom/errors.hpp"
#include "infogeom/field.hpp"

namespace infogeom {

enum class SpacetimeLayout { space_only, time_only, time_then_space };

inline SpacetimeLayout layout_from_string(const std::string& s) {
  if (s == "space_only") return SpacetimeLayout::space_only;
  if (s == "time_only") return SpacetimeLayout::time_only;
  if (s == "time_then_space") return SpacetimeLayout::time_then_space;
  throw ConfigError("unknown spacetime layout '" + s + "'");
}

// Symmetric metric g_{mu nu} sampled per grid point. The matrix dimension is
// independent of the grid dimension: 4x4 metrics on a 1D/2D grid are fine for
// algebraic operations; differential residuals need dim == grid dims.
class SpacetimeMetric {
 public:
  SpacetimeMetric(GridSpec grid, int dim, std::vector<ScalarField> components, bool diagonal)
      : grid_(grid), dim_(dim), comps_(std::move(components)), diagonal_(diagonal) {
    grid_.validate();
    if (dim_ < 1 || dim_ > 4) throw DimensionMismatch("metric dimension must be 1..4");
    if (comps_.size() != static_cast<size_t>(dim_ * dim_))
      throw DimensionMismatch("metric needs dim^2 component fields");
    for (const auto& c : comps_) {
      if (!c.grid().same_as(grid_)) throw GridMismatch("metric components on mismatched grids");
    }
    for (int i = 0; i < dim_; ++i)
      for (int j = i + 1; j < dim_; ++j)
        if ((component(i, j) - component(j, i)).max_abs() != 0.0)
          throw DimensionMismatch("metric must be symmetric");
  }

  static SpacetimeMetric minkowski(const GridSpec& grid, int dim) {
    std::vector<double> diag(static_cast<size_t>(dim), -1.0);
    diag[0] = 1.0;
    return diagonal_constant(grid, diag);
  }

  static SpacetimeMetric diagonal_constant(const GridSpec& grid, const std::vector<double>& diag) {
    int dim = static_cast<int>(diag.size());
    std::vector<ScalarField> comps(static_cast<size_t>(dim * dim), ScalarField(grid));
    for (int i = 0; i < dim; ++i) {
      ScalarField f(grid);
      for (auto& v : f.values()) v = diag[static_cast<size_t>(i)];
      comps[static_cast<size_t>(i * dim + i)] = std::move(f);
    }
    return SpacetimeMetric(grid, dim, std::move(comps), true);
  }

  static SpacetimeMetric diagonal_fields(const GridSpec& grid, std::vector<ScalarField> diag) {
    int dim = static_cast<int>(diag.size());
    std::vector<ScalarField> comps(static_cast<size_t>(dim * dim), ScalarField(grid));
    for (int i = 0; i < dim; ++i) comps[static_cast<size_t>(i * dim + i)] = std::move(diag[static_cast<size_t>(i)]);
    return SpacetimeMetric(grid, dim, std::move(comps), true);
  }

  static SpacetimeMetric full(const GridSpec& grid, std::vector<ScalarField> components) {
    int dim = static_cast<int>(std::lround(std::sqrt(static_cast<double>(components.size()))));
    return SpacetimeMetric(grid, dim, std::move(components), false);
  }

  const GridSpec& grid() const { return grid_; }
  int dim() const { return dim_; }
  bool is_diagonal() const { return diagonal_; }

  const ScalarField& component(int i, int j) const {
    return comps_[static_cast<size_t>(i * dim_ + j)];
  }

  Eigen::MatrixXd matrix_at(int flat) const {
    Eigen::MatrixXd m(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) m(i, j) = component(i, j).values()[static_cast<size_t>(flat)];
    return m;
  }

  ScalarField det_field() const {
    ScalarField out(grid_, "det_g");
    for (int k = 0; k < grid_.size(); ++k) out.values()[static_cast<size_t>(k)] = matrix_at(k).determinant();
    return out;
  }

  void require_nondegenerate(double tol = 1e-12) const {
    ScalarField d = det_field();
    for (double v : d.values())
      if (!(std::abs(v) > tol)) throw DegenerateMetric("metric determinant vanishes on the grid");
  }

  // Eigenvalue sign pattern, sorted descending (e.g. {+1,-1,-1,-1}); throws if
  // the pattern varies across the grid.
  std::vector<int> signature_pattern() const {
    require_nondegenerate();
    std::vector<int> pattern;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    for (int k = 0; k < grid_.size(); ++k) {
      es.compute(matrix_at(k), Eigen::EigenvaluesOnly);
      std::vector<int> signs(static_cast<size_t>(dim_));
      for (int i = 0; i < dim_; ++i)
        signs[static_cast<size_t>(i)] = es.eigenvalues()(dim_ - 1 - i) > 0.0 ? 1 : -1;
      if (k == 0)
        pattern = signs;
      else if (signs != pattern)
        throw DegenerateMetric("metric signature varies across the grid");
    }
    return pattern;
  }

  // Pointwise map of every component (used for conformal scaling).
  SpacetimeMetric scaled_by(const ScalarField& factor) const {
    if (!factor.grid().same_as(grid_)) throw GridMismatch("scale field on a different grid");
    std::vector<ScalarField> comps;
    comps.reserve(comps_.size());
    for (const auto& c : comps_) comps.push_back(c * factor);
    return SpacetimeMetric(grid_, dim_, std::move(comps), diagonal_);
  }

 private:
  GridSpec grid_;
  int dim_;
  std::vector<ScalarField> comps_;
  bool diagonal_;
};

// Flat-spacetime quantum potential
//   Q = (hbar^2 / m^2 c^2) (laplacian - (1/c^2) d^2/dt^2) |psi| / |psi|,
// with the layout naming which grid axes are time.
inline ScalarField relativistic_quantum_potential(const ScalarField& abs_psi,
                                                  const PhysicalConstants& consts,
                                                  SpacetimeLayout layout) {
  consts.validate();
  if (!(abs_psi.min_value() > 0.0)) throw NonPositiveField("|psi| must be strictly positive");
  double inv_c2 = 1.0 / (consts.c * consts.c);
  ScalarField wave(abs_psi.grid());
  switch (layout) {
    case SpacetimeLayout::space_only:
      wave = abs_psi.second_derivative(0);
      if (abs_psi.dims() == 2) wave = wave + abs_psi.second_derivative(1);
      break;
    case SpacetimeLayout::time_only:
      if (abs_psi.dims() != 1) throw GridMismatch("time_only layout needs a 1D grid");
      wave = abs_psi.second_derivative(0) * (-inv_c2);
      break;
    case SpacetimeLayout::time_then_space:
      if (abs_psi.dims() != 2) throw GridMismatch("time_then_space layout needs a 2D grid");
      wave = abs_psi.second_derivative(1) + abs_psi.second_derivative(0) * (-inv_c2);
      break;
  }
  double coef = consts.hbar * consts.hbar /
                (consts.mass * consts.mass * consts.c * consts.c);
  ScalarField out = wave.zip(abs_psi, [coef](double d, double a) { return coef * d / a; });
  out.set_name("Q_rel");
  return out;
}

// Curved-metric version via the metric-weighted divergence
//   box_g f = |g|^{-1/2} d_mu (|g|^{1/2} g^{mu mu} d_mu f),
// supported for diagonal metrics whose dimension matches the grid (axis 0 is
// time). Q = -(hbar^2 / m^2 c^2) box_g |psi| / |psi|; reduces to the flat
// operator on a Minkowski metric (c = 1 units folded into the metric).
inline ScalarField curved_quantum_potential(const ScalarField& abs_psi,
                                            const SpacetimeMetric& g,
                                            const PhysicalConstants& consts) {
  consts.validate();
  if (!abs_psi.grid().same_as(g.grid())) throw GridMismatch("|psi| and metric grids differ");
  if (!g.is_diagonal())
    throw ConfigError("curved d'Alembertian supports diagonal metrics only");
  if (g.dim() != abs_psi.dims())
    throw DimensionMismatch("metric dimension must match the grid dimension");
  if (!(abs_psi.min_value() > 0.0)) throw NonPositiveField("|psi| must be strictly positive");
  g.require_nondegenerate();

  ScalarField sqrt_det = g.det_field().map([](double d) { return std::sqrt(std::abs(d)); });
  ScalarField box(abs_psi.grid());
  for (int mu = 0; mu < g.dim(); ++mu) {
    ScalarField flux =
        abs_psi.derivative(mu).zip(g.component(mu, mu), [](double d, double gmm) { return d / gmm; });
    box = box + (sqrt_det * flux).derivative(mu);
  }
  box = box.zip(sqrt_det, [](double b, double s) { return b / s; });

  double coef = -consts.hbar * consts.hbar /
                (consts.mass * consts.mass * consts.c * consts.c);
  ScalarField out = box.zip(abs_psi, [coef](double b, double a) { return coef * b / a; });
  out.set_name("Q_curved");
  return out;
}

struct QuantumMass {
  ScalarField m_squared;
  double base_mass = 1.0;
};

// M^2 = m^2 exp(Q), guarded on both exponential ends so the positivity
// invariant cannot be silently destroyed by IEEE overflow/underflow.
inline QuantumMass quantum_mass(const ScalarField& q, double base_mass) {
  if (!(base_mass > 0.0)) throw ConfigError("base mass must be positive");
  for (double v : q.values()) {
    if (!std::isfinite(v)) throw OverflowError("quantum potential must be finite");
    if (v > 700.0) throw OverflowError("exp(Q) overflows for Q > 700");
    if (v < -700.0) throw OverflowError("m^2 exp(Q) underflows for Q < -700");
  }
  QuantumMass out{q.map([base_mass](double v) { return base_mass * base_mass * std::exp(v); }),
                  base_mass};
  out.m_squared.set_name("M_squared");
  return out;
}

// Conformal rescaling g~_{mu nu} = exp(Q) g_{mu nu} = (M^2/m^2) g_{mu nu}.
inline SpacetimeMetric conformal_metric(const SpacetimeMetric& g, const ScalarField& q) {
  if (!q.grid().same_as(g.grid())) throw GridMismatch("Q on a different grid than the metric");
  return g.scaled_by(q.map([](double v) { return std::exp(v); }));
}

inline SpacetimeMetric conformal_metric(const SpacetimeMetric& g, const QuantumMass& m) {
  double inv = 1.0 / (m.base_mass * m.base_mass);
  return g.scaled_by(m.m_squared * inv);
}

enum class KgForm { original, conformal };

inline KgForm kg_form_from_string(const std::string& s) {
  if (s == "original") return KgForm::original;
  if (s == "conformal") return KgForm::conformal;
  throw ConfigError("unknown Hamilton-Jacobi form '" + s + "'");
}

// Mass-shell residual of the Klein-Gordon Hamilton-Jacobi balance.
//   original:   g^{mu nu} dS dS - m^2 c^2 exp(Q)
//   conformal:  exp(Q) * (g~^{mu nu} dS dS - m^2 c^2)
// The conformal route computes with the rescaled metric and is reported in
// the original form's units (the raw conformal residual equals the original
// one divided by exp(Q); rescaling makes the two forms comparable pointwise,
// and they then agree to rounding).
inline ScalarField kg_hj_residual(const SpacetimeMetric& g, const ScalarField& s,
                                  const ScalarField& q, const PhysicalConstants& consts,
                                  KgForm form) {
  consts.validate();
  if (!s.grid().same_as(g.grid()) || !q.grid().same_as(g.grid()))
    throw GridMismatch("S, Q, and metric must share a grid");
  if (g.dim() != s.dims())
    throw DimensionMismatch("differential residual needs metric dim == grid dims");
  g.require_nondegenerate();

  const SpacetimeMetric* metric = &g;
  SpacetimeMetric scaled = g;  // staging for the conformal branch
  if (form == KgForm::conformal) {
    scaled = conformal_metric(g, q);
    metric = &scaled;
  }

  std::vector<ScalarField> ds;
  for (int mu = 0; mu < g.dim(); ++mu) ds.push_back(s.derivative(mu));

  double mc2 = consts.mass * consts.mass * consts.c * consts.c;
  ScalarField out(s.grid(), "kg_residual");
  Eigen::VectorXd p(g.dim());
  for (int k = 0; k < s.grid().size(); ++k) {
    for (int mu = 0; mu < g.dim(); ++mu) p(mu) = ds[static_cast<size_t>(mu)].values()[static_cast<size_t>(k)];
    Eigen::MatrixXd inv = metric->matrix_at(k).inverse();
    double quad = p.dot(inv * p);
    double qv = q.values()[static_cast<size_t>(k)];
    if (form == KgForm::original)
      out.values()[static_cast<size_t>(k)] = quad - mc2 * std::exp(qv);
    else
      out.values()[static_cast<size_t>(k)] = std::exp(qv) * (quad - mc2);
  }
  return out;
}

}  // namespace infogeom
