#pragma once
// Tensor calculus over rectangular Jacobians: a smooth map y(x) from n
// sources to m >= n outputs carries an induced metric g = J^T J, a
// least-squares pseudo-inverse J+ = (J^T J)^-1 J^T, and a column-space
// projector Q = J J+. Vectors in the output space split into covariant
// (J^T v) and contravariant (J+ v) components whose contraction gives the
// squared length of the projected part of v. Second derivatives of the map
// supply the connection terms that make the covariant derivative of a source
// vector field transform correctly.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "infogeom/errors.hpp"

namespace infogeom {

// Rank acceptance threshold on cond(J^T J) = (sigma_max/sigma_min)^2.
inline constexpr double kGramConditionLimit = 1e12;

// Default finite-difference step, scaled per coordinate by max(1, |x_i|).
inline constexpr double kDefaultFdStep = 1e-5;

class RectJacobian {
 public:
  explicit RectJacobian(Eigen::MatrixXd entries) : j_(std::move(entries)) {
    if (j_.size() == 0 || j_.cols() < 1 || j_.rows() < j_.cols())
      throw DimensionMismatch("jacobian must be m x n with m >= n >= 1");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(j_);
    const auto& sv = svd.singularValues();
    sigma_max_ = sv(0);
    sigma_min_ = sv(sv.size() - 1);
  }

  const Eigen::MatrixXd& entries() const { return j_; }
  Eigen::Index rows() const { return j_.rows(); }
  Eigen::Index cols() const { return j_.cols(); }

  // Condition number of the Gram matrix J^T J.
  double gram_condition() const {
    if (!(sigma_min_ > 0.0)) return std::numeric_limits<double>::infinity();
    double r = sigma_max_ / sigma_min_;
    return r * r;
  }

  bool full_column_rank() const { return gram_condition() <= kGramConditionLimit; }

  void require_full_column_rank() const {
    if (!full_column_rank())
      throw RankDeficient("gram condition number exceeds 1e12; no silent regularization");
  }

 private:
  Eigen::MatrixXd j_;
  double sigma_max_ = 0.0;
  double sigma_min_ = 0.0;
};

// J+ = (J^T J)^-1 J^T, evaluated through a complete orthogonal decomposition
// rather than the normal equations (the normal-equation form squares the
// condition number; tests keep it around as an oracle).
inline Eigen::MatrixXd pseudo_inverse(const RectJacobian& jac) {
  jac.require_full_column_rank();
  return jac.entries().completeOrthogonalDecomposition().pseudoInverse();
}

struct MetricTensor {
  Eigen::MatrixXd g;      // J^T J
  Eigen::MatrixXd g_inv;  // (J^T J)^-1
};

inline MetricTensor metric_tensor(const RectJacobian& jac) {
  jac.require_full_column_rank();
  MetricTensor out;
  out.g = jac.entries().transpose() * jac.entries();
  out.g_inv =
      out.g.ldlt().solve(Eigen::MatrixXd::Identity(out.g.rows(), out.g.cols()));
  return out;
}

struct ProjectionOperator {
  Eigen::MatrixXd q;  // J (J^T J)^-1 J^T; idempotent, symmetric, trace n
};

inline ProjectionOperator projection_operator(const RectJacobian& jac) {
  return {jac.entries() * pseudo_inverse(jac)};
}

struct VectorComponents {
  Eigen::VectorXd covariant;      // J^T v
  Eigen::VectorXd contravariant;  // J+ v
};

inline VectorComponents components(const RectJacobian& jac, const Eigen::VectorXd& v) {
  if (v.size() != jac.rows())
    throw DimensionMismatch("vector length must match jacobian row count");
  jac.require_full_column_rank();
  VectorComponents out;
  out.covariant = jac.entries().transpose() * v;
  out.contravariant = pseudo_inverse(jac) * v;
  return out;
}

// S^2 = contravariant . covariant = |Q v|^2: the squared length of the part
// of v that lies in the column space of J.
inline double quadratic_length(const RectJacobian& jac, const Eigen::VectorXd& v) {
  VectorComponents c = components(jac, v);
  return c.contravariant.dot(c.covariant);
}

// A smooth map R^n -> R^m with optional analytic first/second derivatives.
// Without closures, derivatives fall back to second-order central differences
// with step fd_step * max(1, |x_i|) per coordinate.
class SmoothMap {
 public:
  using Fn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
  using HessiansFn = std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)>;

  SmoothMap(int input_dim, int output_dim, Fn f)
      : in_(input_dim), out_(output_dim), f_(std::move(f)) {
    if (in_ < 1 || out_ < 1)
      throw DimensionMismatch("map dimensions must be at least 1");
  }

  SmoothMap& with_jacobian(JacobianFn j) {
    jac_ = std::move(j);
    return *this;
  }
  SmoothMap& with_hessians(HessiansFn h) {
    hess_ = std::move(h);
    return *this;
  }
  SmoothMap& with_fd_step(double h) {
    fd_step_ = h;
    return *this;
  }

  int input_dim() const { return in_; }
  int output_dim() const { return out_; }
  double fd_step() const { return fd_step_; }

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const {
    check_point(x);
    return f_(x);
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    check_point(x);
    if (jac_) return (*jac_)(x);
    require_valid_step();
    Eigen::MatrixXd out(out_, in_);
    for (int j = 0; j < in_; ++j) {
      double h = step_for(x(j));
      Eigen::VectorXd xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      out.col(j) = (f_(xp) - f_(xm)) / (2.0 * h);
    }
    return out;
  }

  // Hessian of each output component, index [k](h, j) = d2 y_k / dx_h dx_j.
  // The FD path uses the 3-point stencil on the diagonal and the symmetric
  // 4-point cross stencil off it, so each Hessian is symmetric by construction.
  std::vector<Eigen::MatrixXd> hessians(const Eigen::VectorXd& x) const {
    check_point(x);
    if (hess_) return (*hess_)(x);
    require_valid_step();
    std::vector<Eigen::MatrixXd> out(out_, Eigen::MatrixXd::Zero(in_, in_));
    Eigen::VectorXd f0 = f_(x);
    for (int a = 0; a < in_; ++a) {
      double ha = step_for(x(a));
      for (int b = a; b < in_; ++b) {
        Eigen::VectorXd d;
        if (a == b) {
          Eigen::VectorXd xp = x, xm = x;
          xp(a) += ha;
          xm(a) -= ha;
          d = (f_(xp) - 2.0 * f0 + f_(xm)) / (ha * ha);
        } else {
          double hb = step_for(x(b));
          Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
          xpp(a) += ha; xpp(b) += hb;
          xpm(a) += ha; xpm(b) -= hb;
          xmp(a) -= ha; xmp(b) += hb;
          xmm(a) -= ha; xmm(b) -= hb;
          d = (f_(xpp) - f_(xpm) - f_(xmp) + f_(xmm)) / (4.0 * ha * hb);
        }
        for (int k = 0; k < out_; ++k) {
          out[k](a, b) = d(k);
          out[k](b, a) = d(k);
        }
      }
    }
    return out;
  }

 private:
  void check_point(const Eigen::VectorXd& x) const {
    if (x.size() != in_) throw DimensionMismatch("point dimension does not match map");
  }
  void require_valid_step() const {
    if (!(fd_step_ > 0.0)) throw FDStepInvalid("finite-difference step must be positive");
  }
  double step_for(double xi) const { return fd_step_ * std::max(1.0, std::abs(xi)); }

  int in_;
  int out_;
  Fn f_;
  std::optional<JacobianFn> jac_;
  std::optional<HessiansFn> hess_;
  double fd_step_ = kDefaultFdStep;
};

// Connection terms of the map at x: the rank-3 array d2 y_k / dx_h dx_j,
// returned as one symmetric n x n matrix per output component k.
inline std::vector<Eigen::MatrixXd> christoffel_terms(const SmoothMap& map,
                                                      const Eigen::VectorXd& x) {
  return map.hessians(x);
}

// Covariant derivative of a source-space vector field v under the map:
//   D_k v^i = dv^i/dx^k + sum_{p,j} v^p * d2 y_j/dx^k dx^p * (J+)_{i,j}.
// Rows index the component i, columns the direction k. For a linear map the
// connection vanishes and this reduces to the plain Jacobian of v.
inline Eigen::MatrixXd covariant_derivative(const SmoothMap& map, const SmoothMap& vfield,
                                            const Eigen::VectorXd& x) {
  int n = map.input_dim();
  if (vfield.input_dim() != n || vfield.output_dim() != n)
    throw DimensionMismatch("vector field must map the source space to itself");
  RectJacobian jac(map.jacobian(x));
  Eigen::MatrixXd pinv = pseudo_inverse(jac);              // (i, j) = dx^i/dy_j
  std::vector<Eigen::MatrixXd> hess = map.hessians(x);     // [j](k, p)
  Eigen::VectorXd v = vfield(x);
  Eigen::MatrixXd dv = vfield.jacobian(x);                 // (i, k) = dv^i/dx^k

  Eigen::MatrixXd conn = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int j = 0; j < map.output_dim(); ++j) {
        double hv = 0.0;
        for (int p = 0; p < n; ++p) hv += v(p) * hess[j](k, p);
        s += pinv(i, j) * hv;
      }
      conn(i, k) = s;
    }
  return dv + conn;
}

}  // namespace infogeom
