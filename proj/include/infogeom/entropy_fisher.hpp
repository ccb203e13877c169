#pragma once
// From microstate counts to information geometry: a family of positive
// microstate-count functions W_j(theta) has entropy vector s_j = k log W_j,
// entropy Jacobian J_{k,j} = d log W_k / d theta_j (the Boltzmann constant
// cancels), and Fisher matrix F = J^T J. An independent statistical oracle
// computes F for parametric densities as E[score score^T] by quadrature, and
// a Monte-Carlo estimator-covariance routine checks the Cramer-Rao bound
// F^-1 <= Sigma in the Loewner order.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "infogeom/errors.hpp"
#include "infogeom/morphogenetic.hpp"
#include "infogeom/rng.hpp"

namespace infogeom {

// n positive smooth functions of p parameters, n >= p. Analytic gradients of
// log W are optional; otherwise central differences on log W are used.
class MicrostateFamily {
 public:
  struct Member {
    std::string label;
    std::function<double(const Eigen::VectorXd&)> w;
    std::optional<std::function<Eigen::VectorXd(const Eigen::VectorXd&)>> grad_log_w;
  };

  MicrostateFamily(int param_dim, std::vector<Member> members)
      : p_(param_dim), members_(std::move(members)) {
    if (p_ < 1) throw DimensionMismatch("family needs at least one parameter");
    if (static_cast<int>(members_.size()) < p_)
      throw DimensionMismatch("need at least as many microstate functions as parameters");
  }

  int param_dim() const { return p_; }
  int member_count() const { return static_cast<int>(members_.size()); }
  const Member& member(int j) const { return members_[static_cast<size_t>(j)]; }

  MicrostateFamily& with_fd_step(double h) {
    fd_step_ = h;
    return *this;
  }
  double fd_step() const { return fd_step_; }

  double w_value(int j, const Eigen::VectorXd& theta) const {
    double w = members_[static_cast<size_t>(j)].w(theta);
    if (!(w > 0.0))
      throw NonPositiveMicrostates("microstate count '" + members_[j].label +
                                   "' is not strictly positive");
    return w;
  }

  // d log W_j / d theta: analytic closure or central FD on log W.
  Eigen::VectorXd grad_log_w(int j, const Eigen::VectorXd& theta) const {
    const Member& m = members_[static_cast<size_t>(j)];
    if (m.grad_log_w) return (*m.grad_log_w)(theta);
    if (!(fd_step_ > 0.0)) throw FDStepInvalid("finite-difference step must be positive");
    Eigen::VectorXd g(p_);
    for (int a = 0; a < p_; ++a) {
      double h = fd_step_ * std::max(1.0, std::abs(theta(a)));
      Eigen::VectorXd tp = theta, tm = theta;
      tp(a) += h;
      tm(a) -= h;
      double wp = w_value_at(j, tp), wm = w_value_at(j, tm);
      g(a) = (std::log(wp) - std::log(wm)) / (2.0 * h);
    }
    return g;
  }

  // Convenience builder: W_j = exp(a_j . theta + c_j), whose scores are the
  // constant vectors a_j.
  static MicrostateFamily exponential(const std::vector<Eigen::VectorXd>& coeffs,
                                      const std::vector<double>& offsets = {}) {
    if (coeffs.empty()) throw DimensionMismatch("need at least one coefficient vector");
    int p = static_cast<int>(coeffs[0].size());
    std::vector<Member> members;
    for (size_t j = 0; j < coeffs.size(); ++j) {
      Eigen::VectorXd a = coeffs[j];
      if (a.size() != p) throw DimensionMismatch("coefficient vectors must share a length");
      double c = j < offsets.size() ? offsets[j] : 0.0;
      members.push_back({"w" + std::to_string(j),
                         [a, c](const Eigen::VectorXd& t) { return std::exp(a.dot(t) + c); },
                         [a](const Eigen::VectorXd&) { return a; }});
    }
    return MicrostateFamily(p, std::move(members));
  }

  // Tabulated 1-parameter family: piecewise-linear interpolation of log W over
  // a strictly increasing theta grid, one column per microstate function.
  static MicrostateFamily tabulated_1d(const std::vector<double>& theta_grid,
                                       const std::vector<std::vector<double>>& w_columns,
                                       const std::vector<std::string>& labels = {}) {
    if (theta_grid.size() < 2) throw DimensionMismatch("table needs at least two rows");
    for (size_t i = 1; i < theta_grid.size(); ++i)
      if (!(theta_grid[i] > theta_grid[i - 1]))
        throw ConfigError("table parameter values must be strictly increasing");
    std::vector<Member> members;
    for (size_t j = 0; j < w_columns.size(); ++j) {
      const auto& col = w_columns[j];
      if (col.size() != theta_grid.size())
        throw DimensionMismatch("table column length does not match parameter grid");
      std::vector<double> logw(col.size());
      for (size_t i = 0; i < col.size(); ++i) {
        if (!(col[i] > 0.0))
          throw NonPositiveMicrostates("tabulated W values must be strictly positive");
        logw[i] = std::log(col[i]);
      }
      auto grid = theta_grid;
      std::string label = j < labels.size() ? labels[j] : ("w" + std::to_string(j));
      members.push_back({label, [grid, logw](const Eigen::VectorXd& t) {
                           double x = t(0);
                           size_t n = grid.size();
                           size_t i = 0;
                           while (i + 2 < n && x > grid[i + 1]) ++i;
                           double f = (x - grid[i]) / (grid[i + 1] - grid[i]);
                           f = std::min(1.0, std::max(0.0, f));
                           return std::exp(logw[i] * (1.0 - f) + logw[i + 1] * f);
                         },
                         std::nullopt});
    }
    return MicrostateFamily(1, std::move(members));
  }

 private:
  double w_value_at(int j, const Eigen::VectorXd& theta) const { return w_value(j, theta); }

  int p_;
  std::vector<Member> members_;
  double fd_step_ = kDefaultFdStep;
};

struct EntropyVector {
  Eigen::VectorXd s;  // s_j = k log W_j
  double k_boltz;
};

inline EntropyVector entropy_vector(const MicrostateFamily& fam, const Eigen::VectorXd& theta,
                                    double k_boltz = 1.0) {
  if (!(k_boltz > 0.0)) throw Error("boltzmann constant must be positive");
  EntropyVector out;
  out.k_boltz = k_boltz;
  out.s.resize(fam.member_count());
  for (int j = 0; j < fam.member_count(); ++j)
    out.s(j) = k_boltz * std::log(fam.w_value(j, theta));
  return out;
}

// The raw entropy Jacobian matrix J_{k,j} = d log W_k / d theta_j. The
// Boltzmann constant never enters: it scales s and the theta-derivative
// identically, so the geometry below is k-free by construction.
inline Eigen::MatrixXd entropy_jacobian_matrix(const MicrostateFamily& fam,
                                               const Eigen::VectorXd& theta) {
  Eigen::MatrixXd j(fam.member_count(), fam.param_dim());
  for (int k = 0; k < fam.member_count(); ++k) j.row(k) = fam.grad_log_w(k, theta);
  return j;
}

// Same matrix wrapped as a RectJacobian for the tensor-calculus operations
// (those operations enforce full column rank at call time).
inline RectJacobian entropy_jacobian(const MicrostateFamily& fam, const Eigen::VectorXd& theta) {
  return RectJacobian(entropy_jacobian_matrix(fam, theta));
}

struct FisherMatrix {
  Eigen::MatrixXd f;
  Eigen::VectorXd theta;
};

// F = J^T J: symmetric positive-semidefinite, unnormalized (straight sum over
// the microstate functions, no 1/n).
inline FisherMatrix fisher_matrix(const MicrostateFamily& fam, const Eigen::VectorXd& theta) {
  Eigen::MatrixXd j = entropy_jacobian_matrix(fam, theta);
  return {j.transpose() * j, theta};
}

// A parametric density on an interval of R, with everything the statistical
// oracle and the sampler need. `support` must cover all but a negligible tail
// (the equivalent of +-10 sigma).
struct ParametricDistribution {
  int param_dim = 1;
  std::function<double(double, const Eigen::VectorXd&)> density;
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> score;  // dlog rho/dtheta
  std::function<std::pair<double, double>(const Eigen::VectorXd&)> support;
  std::function<double(Rng&, const Eigen::VectorXd&)> sample;
  std::function<void(const Eigen::VectorXd&)> validate_theta = [](const Eigen::VectorXd&) {};
};

inline ParametricDistribution gaussian_distribution() {
  ParametricDistribution d;
  d.param_dim = 2;  // theta = (mu, sigma)
  d.validate_theta = [](const Eigen::VectorXd& t) {
    if (t.size() != 2 || !(t(1) > 0.0)) throw ConfigError("gaussian needs theta = (mu, sigma > 0)");
  };
  d.density = [](double x, const Eigen::VectorXd& t) {
    double z = (x - t(0)) / t(1);
    return std::exp(-0.5 * z * z) / (t(1) * std::sqrt(2.0 * M_PI));
  };
  d.score = [](double x, const Eigen::VectorXd& t) {
    double mu = t(0), s = t(1);
    Eigen::VectorXd g(2);
    g << (x - mu) / (s * s), ((x - mu) * (x - mu) - s * s) / (s * s * s);
    return g;
  };
  d.support = [](const Eigen::VectorXd& t) {
    return std::make_pair(t(0) - 10.0 * t(1), t(0) + 10.0 * t(1));
  };
  d.sample = [](Rng& rng, const Eigen::VectorXd& t) { return t(0) + t(1) * rng.normal(); };
  return d;
}

inline ParametricDistribution exponential_distribution() {
  ParametricDistribution d;
  d.param_dim = 1;  // theta = (lambda)
  d.validate_theta = [](const Eigen::VectorXd& t) {
    if (t.size() != 1 || !(t(0) > 0.0)) throw ConfigError("exponential needs theta = (lambda > 0)");
  };
  d.density = [](double x, const Eigen::VectorXd& t) {
    return x < 0.0 ? 0.0 : t(0) * std::exp(-t(0) * x);
  };
  d.score = [](double x, const Eigen::VectorXd& t) {
    Eigen::VectorXd g(1);
    g << 1.0 / t(0) - x;
    return g;
  };
  d.support = [](const Eigen::VectorXd& t) { return std::make_pair(0.0, 40.0 / t(0)); };
  d.sample = [](Rng& rng, const Eigen::VectorXd& t) {
    return -std::log(1.0 - rng.uniform()) / t(0);
  };
  return d;
}

inline ParametricDistribution uniform_distribution() {
  ParametricDistribution d;
  d.param_dim = 2;  // theta = (a, b)
  d.validate_theta = [](const Eigen::VectorXd& t) {
    if (t.size() != 2 || !(t(1) > t(0))) throw ConfigError("uniform needs theta = (a, b) with b > a");
  };
  d.density = [](double x, const Eigen::VectorXd& t) {
    return (x < t(0) || x > t(1)) ? 0.0 : 1.0 / (t(1) - t(0));
  };
  d.score = [](double, const Eigen::VectorXd& t) {
    // log rho = -log(b - a) inside the support.
    Eigen::VectorXd g(2);
    g << 1.0 / (t(1) - t(0)), -1.0 / (t(1) - t(0));
    return g;
  };
  d.support = [](const Eigen::VectorXd& t) { return std::make_pair(t(0), t(1)); };
  d.sample = [](Rng& rng, const Eigen::VectorXd& t) { return rng.uniform(t(0), t(1)); };
  return d;
}

// Degenerate point mass, useful as a zero-variance control in MC tests.
inline ParametricDistribution point_mass_distribution() {
  ParametricDistribution d;
  d.param_dim = 1;  // theta = (x0)
  d.sample = [](Rng&, const Eigen::VectorXd& t) { return t(0); };
  return d;
}

struct QuadratureOptions {
  int initial_panels = 512;   // composite Simpson panel count (doubled on refine)
  int max_refinements = 8;
  double rel_tol = 1e-6;
};

// Statistical oracle: F_{h,k} = Integral rho * score_h * score_k dx over the
// declared support, by composite Simpson with panel doubling. Refinement must
// settle below rel_tol or the call refuses to answer. Also verifies that the
// density integrates to 1 on the same support (tolerance 1e-8).
inline FisherMatrix score_fisher_oracle(const ParametricDistribution& dist,
                                        const Eigen::VectorXd& theta,
                                        const QuadratureOptions& opt = {}) {
  dist.validate_theta(theta);
  auto [a, b] = dist.support(theta);
  if (!(b > a)) throw Error("distribution support is empty");
  int p = dist.param_dim;

  auto integrate = [&](int panels) {
    // Simpson: panels must be even; weight pattern 1,4,2,...,4,1 times h/3.
    int n = panels;
    double h = (b - a) / n;
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(p, p);
    double mass = 0.0;
    for (int i = 0; i <= n; ++i) {
      double x = a + i * h;
      double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      double rho = dist.density(x, theta);
      mass += w * rho;
      if (rho > 0.0) {
        Eigen::VectorXd s = dist.score(x, theta);
        f += (w * rho) * (s * s.transpose());
      }
    }
    return std::make_pair(Eigen::MatrixXd((h / 3.0) * f), (h / 3.0) * mass);
  };

  int panels = opt.initial_panels;
  auto [f_prev, mass_prev] = integrate(panels);
  for (int r = 0; r < opt.max_refinements; ++r) {
    panels *= 2;
    auto [f_next, mass_next] = integrate(panels);
    double scale = std::max(1e-300, f_next.cwiseAbs().maxCoeff());
    double change = (f_next - f_prev).cwiseAbs().maxCoeff() / scale;
    if (change < opt.rel_tol) {
      if (std::abs(mass_next - 1.0) > 1e-8)
        throw NotNormalized("density does not integrate to 1 over its support");
      return {f_next, theta};
    }
    f_prev = f_next;
  }
  throw QuadratureNotConverged("score quadrature did not settle below the relative tolerance");
}

// Smallest eigenvalue of Sigma - F^-1: >= 0 exactly when the Cramer-Rao bound
// holds in the Loewner order.
inline double cramer_rao_gap(const FisherMatrix& fisher, const Eigen::MatrixXd& sigma) {
  int p = static_cast<int>(fisher.f.rows());
  if (sigma.rows() != p || sigma.cols() != p)
    throw DimensionMismatch("covariance must match the fisher matrix size");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(fisher.f);
  if (!lu.isInvertible())
    throw SingularFisher("fisher matrix is singular; the bound has no finite inverse");
  Eigen::MatrixXd gap = sigma - lu.inverse();
  Eigen::MatrixXd sym = 0.5 * (gap + gap.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  return es.eigenvalues().minCoeff();
}

using Estimator = std::function<Eigen::VectorXd(const std::vector<double>&)>;

inline Estimator mean_estimator() {
  return [](const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    Eigen::VectorXd out(1);
    out << s / static_cast<double>(xs.size());
    return out;
  };
}

// Maximum-likelihood (mu, sigma) for a gaussian sample.
inline Estimator gaussian_mle_estimator() {
  return [](const std::vector<double>& xs) {
    double n = static_cast<double>(xs.size());
    double m = 0.0;
    for (double x : xs) m += x;
    m /= n;
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    Eigen::VectorXd out(2);
    out << m, std::sqrt(v / n);
    return out;
  };
}

// Empirical covariance of an estimator over repeated experiments. Each trial
// draws from its own substream of (seed, trial), so results do not depend on
// evaluation order.
inline Eigen::MatrixXd mc_estimator_covariance(const ParametricDistribution& dist,
                                               const Eigen::VectorXd& theta,
                                               const Estimator& estimator, int n_samples,
                                               int n_trials, std::uint64_t seed) {
  if (n_samples < 1 || n_trials < 1)
    throw Error("mc covariance needs at least one sample and one trial");
  std::vector<Eigen::VectorXd> estimates;
  estimates.reserve(static_cast<size_t>(n_trials));
  std::vector<double> xs(static_cast<size_t>(n_samples));
  for (int t = 0; t < n_trials; ++t) {
    Rng rng(seed, static_cast<std::uint64_t>(t));
    for (int i = 0; i < n_samples; ++i) xs[static_cast<size_t>(i)] = dist.sample(rng, theta);
    estimates.push_back(estimator(xs));
  }
  int p = static_cast<int>(estimates[0].size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
  for (const auto& e : estimates) mean += e;
  mean /= static_cast<double>(n_trials);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
  if (n_trials == 1) return cov;
  for (const auto& e : estimates) {
    Eigen::VectorXd d = e - mean;
    cov += d * d.transpose();
  }
  return cov / static_cast<double>(n_trials - 1);
}

}  // namespace infogeom
