#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "infogeom/entropy_fisher.hpp"

using namespace infogeom;

namespace {

Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}
Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("entropy vector: frozen cases") {
  // Three unit counts: zero entropy vector regardless of k.
  MicrostateFamily units(1, {{"a", [](const Eigen::VectorXd&) { return 1.0; }, std::nullopt},
                             {"b", [](const Eigen::VectorXd&) { return 1.0; }, std::nullopt},
                             {"c", [](const Eigen::VectorXd&) { return 1.0; }, std::nullopt}});
  EntropyVector s = entropy_vector(units, vec1(0.7), 1.0);
  REQUIRE(s.s.cwiseAbs().maxCoeff() == 0.0);

  // W = theta1 * theta2 at (2, 3), k = 1: s = log 6.
  MicrostateFamily prod(
      2, {{"w", [](const Eigen::VectorXd& t) { return t(0) * t(1); }, std::nullopt},
          {"pad1", [](const Eigen::VectorXd& t) { return t(0); }, std::nullopt},
          {"pad2", [](const Eigen::VectorXd& t) { return t(1); }, std::nullopt}});
  REQUIRE(entropy_vector(prod, vec2(2.0, 3.0)).s(0) ==
          Catch::Approx(1.791759469228055).margin(1e-12));

  // W = e^theta with k = 2: s = 2 theta exactly.
  MicrostateFamily ex(1, {{"w", [](const Eigen::VectorXd& t) { return std::exp(t(0)); },
                           std::nullopt}});
  REQUIRE(entropy_vector(ex, vec1(1.3), 2.0).s(0) == Catch::Approx(2.6).margin(1e-12));

  // Non-positive counts are rejected.
  MicrostateFamily bad(1, {{"w", [](const Eigen::VectorXd& t) { return t(0); }, std::nullopt}});
  REQUIRE_THROWS_AS(entropy_vector(bad, vec1(-1.0)), NonPositiveMicrostates);
  REQUIRE_THROWS_AS(entropy_vector(bad, vec1(0.0)), NonPositiveMicrostates);
}

TEST_CASE("entropy jacobian: frozen cases and FD order") {
  MicrostateFamily ex(1, {{"w", [](const Eigen::VectorXd& t) { return std::exp(t(0)); },
                           std::nullopt}});
  REQUIRE(entropy_jacobian_matrix(ex, vec1(2.7))(0, 0) == Catch::Approx(1.0).margin(1e-9));

  // W = theta^2 at theta = 4: d log W / d theta = 2 / theta = 0.5.
  MicrostateFamily sq(1, {{"w", [](const Eigen::VectorXd& t) { return t(0) * t(0); },
                           std::nullopt}});
  REQUIRE(entropy_jacobian_matrix(sq, vec1(4.0))(0, 0) == Catch::Approx(0.5).margin(1e-9));

  // FD against the analytic closure on W = exp(theta^2/2): score = theta.
  auto wfun = [](const Eigen::VectorXd& t) { return std::exp(0.5 * t(0) * t(0)); };
  MicrostateFamily fd(1, {{"w", wfun, std::nullopt}});
  MicrostateFamily an(1, {{"w", wfun, [](const Eigen::VectorXd& t) { return t; }}});
  double got_fd = entropy_jacobian_matrix(fd, vec1(1.0))(0, 0);
  double got_an = entropy_jacobian_matrix(an, vec1(1.0))(0, 0);
  REQUIRE(got_an == 1.0);
  REQUIRE(std::abs(got_fd - got_an) < 1e-7);

  // Halving the step cuts the FD error by ~4 on a cubic-log family.
  auto cub = [](const Eigen::VectorXd& t) { return std::exp(t(0) * t(0) * t(0) / 3.0); };
  auto err_at = [&](double h) {
    MicrostateFamily f(1, {{"w", cub, std::nullopt}});
    f.with_fd_step(h);
    return std::abs(entropy_jacobian_matrix(f, vec1(0.8))(0, 0) - 0.64);
  };
  double ratio = err_at(1e-2) / err_at(5e-3);
  REQUIRE(ratio > 3.5);
  REQUIRE(ratio < 4.5);

  MicrostateFamily badstep(1, {{"w", wfun, std::nullopt}});
  badstep.with_fd_step(0.0);
  REQUIRE_THROWS_AS(entropy_jacobian_matrix(badstep, vec1(1.0)), FDStepInvalid);
}

TEST_CASE("fisher matrix: frozen cases") {
  // Single W = exp(theta^2/2): F = theta^2.
  MicrostateFamily g(1, {{"w", [](const Eigen::VectorXd& t) { return std::exp(0.5 * t(0) * t(0)); },
                          [](const Eigen::VectorXd& t) { return t; }}});
  REQUIRE(fisher_matrix(g, vec1(3.0)).f(0, 0) == Catch::Approx(9.0).margin(1e-12));

  // Two independent exponentials in their own parameters: F = identity.
  MicrostateFamily indep = MicrostateFamily::exponential({vec2(1.0, 0.0), vec2(0.0, 1.0)});
  REQUIRE(max_abs(fisher_matrix(indep, vec2(0.4, -1.2)).f -
                  Eigen::MatrixXd::Identity(2, 2)) < 1e-14);

  // Constant W: zero matrix, no rank complaint.
  MicrostateFamily flat(1, {{"w", [](const Eigen::VectorXd&) { return 7.0; }, std::nullopt}});
  REQUIRE(max_abs(fisher_matrix(flat, vec1(0.3)).f) < 1e-18);
}

TEST_CASE("boltzmann constant cancels out of the geometry") {
  MicrostateFamily g(1, {{"w", [](const Eigen::VectorXd& t) { return std::exp(0.5 * t(0) * t(0)); },
                          [](const Eigen::VectorXd& t) { return t; }}});
  EntropyVector s1 = entropy_vector(g, vec1(2.0), 1.0);
  EntropyVector s2 = entropy_vector(g, vec1(2.0), 1.380649e-23);
  REQUIRE(s1.s(0) != s2.s(0));  // the entropies themselves scale with k
  // ...but the jacobian and fisher matrix are defined on log W and never see k.
  Eigen::MatrixXd f = fisher_matrix(g, vec1(2.0)).f;
  REQUIRE(f(0, 0) == 4.0);
}

TEST_CASE("fisher matrices are symmetric PSD over seeded random families") {
  Rng rng(777);
  for (int t = 0; t < 100; ++t) {
    int p = 1 + static_cast<int>(rng.below(3));       // 1..3 parameters
    int n = p + static_cast<int>(rng.below(5));       // p..p+4 members
    std::vector<MicrostateFamily::Member> members;
    for (int j = 0; j < n; ++j) {
      if (rng.uniform() < 0.5) {
        // log-linear member: score is a constant vector
        Eigen::VectorXd a(p);
        for (int i = 0; i < p; ++i) a(i) = rng.uniform(-2.0, 2.0);
        members.push_back({"lin",
                           [a](const Eigen::VectorXd& th) { return std::exp(a.dot(th)); },
                           [a](const Eigen::VectorXd&) { return a; }});
      } else {
        // gaussian-bump member: score varies with theta
        Eigen::VectorXd b(p);
        for (int i = 0; i < p; ++i) b(i) = rng.uniform(-1.0, 1.0);
        double w2 = rng.uniform(0.5, 2.0);
        members.push_back({"bump",
                           [b, w2](const Eigen::VectorXd& th) {
                             return std::exp(-(th - b).squaredNorm() / (2.0 * w2));
                           },
                           [b, w2](const Eigen::VectorXd& th) {
                             return Eigen::VectorXd(-(th - b) / w2);
                           }});
      }
    }
    MicrostateFamily fam(p, std::move(members));
    Eigen::VectorXd theta(p);
    for (int i = 0; i < p; ++i) theta(i) = rng.uniform(-1.0, 1.0);
    Eigen::MatrixXd f = fisher_matrix(fam, theta).f;
    REQUIRE(max_abs(f - f.transpose()) < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f);
    REQUIRE(es.eigenvalues().minCoeff() >= -1e-12 * (1.0 + max_abs(f)));
  }
}

TEST_CASE("score oracle: gaussian closed form") {
  ParametricDistribution g = gaussian_distribution();
  for (auto [mu, sigma] : {std::pair{0.0, 1.0}, {0.3, 0.7}, {-2.0, 2.5}}) {
    Eigen::MatrixXd f = score_fisher_oracle(g, vec2(mu, sigma)).f;
    double s2 = sigma * sigma;
    REQUIRE(std::abs(f(0, 0) - 1.0 / s2) < 1e-6 / s2);
    REQUIRE(std::abs(f(1, 1) - 2.0 / s2) < 2e-6 / s2);
    REQUIRE(std::abs(f(0, 1)) < 1e-8);
    REQUIRE(std::abs(f(1, 0)) < 1e-8);
  }
}

TEST_CASE("score oracle: exponential, uniform, location invariance") {
  ParametricDistribution e = exponential_distribution();
  Eigen::MatrixXd fe = score_fisher_oracle(e, vec1(2.0)).f;
  REQUIRE(fe(0, 0) == Catch::Approx(0.25).epsilon(1e-6));

  // Uniform(a, b): constant score (1, -1)/(b-a), so F is the rank-1 outer product.
  ParametricDistribution u = uniform_distribution();
  Eigen::MatrixXd fu = score_fisher_oracle(u, vec2(0.0, 2.0)).f;
  REQUIRE(max_abs(fu - 0.25 * (Eigen::MatrixXd(2, 2) << 1, -1, -1, 1).finished()) < 1e-8);

  // Location families: shifting mu shifts the grid with it, F unchanged.
  ParametricDistribution g = gaussian_distribution();
  Eigen::MatrixXd f0 = score_fisher_oracle(g, vec2(0.0, 1.3)).f;
  Eigen::MatrixXd f5 = score_fisher_oracle(g, vec2(5.0, 1.3)).f;
  REQUIRE(max_abs(f0 - f5) < 1e-8);
}

TEST_CASE("score oracle: refinement and normalization guards") {
  // The exponential integrand has nonzero derivatives at x = 0, so composite
  // Simpson converges at a genuine O(h^4): an unreachable tolerance with a
  // capped refinement budget must be refused rather than silently answered.
  ParametricDistribution e = exponential_distribution();
  QuadratureOptions strict;
  strict.rel_tol = 1e-15;
  strict.max_refinements = 3;
  REQUIRE_THROWS_AS(score_fisher_oracle(e, vec1(1.0), strict), QuadratureNotConverged);

  // A density scaled away from unit mass is refused.
  ParametricDistribution off = gaussian_distribution();
  auto base = off.density;
  off.density = [base](double x, const Eigen::VectorXd& t) { return 1.1 * base(x, t); };
  REQUIRE_THROWS_AS(score_fisher_oracle(off, vec2(0.0, 1.0)), NotNormalized);
}

TEST_CASE("cramer-rao gap: frozen arithmetic") {
  FisherMatrix id{Eigen::MatrixXd::Identity(2, 2), vec2(0, 0)};
  REQUIRE(cramer_rao_gap(id, 2.0 * Eigen::MatrixXd::Identity(2, 2)) ==
          Catch::Approx(1.0).margin(1e-12));
  REQUIRE(cramer_rao_gap(id, Eigen::MatrixXd::Identity(2, 2)) ==
          Catch::Approx(0.0).margin(1e-12));

  FisherMatrix f{(Eigen::MatrixXd(2, 2) << 4, 0, 0, 1).finished(), vec2(0, 0)};
  Eigen::MatrixXd sigma = (Eigen::MatrixXd(2, 2) << 0.3, 0, 0, 1.5).finished();
  REQUIRE(cramer_rao_gap(f, sigma) == Catch::Approx(0.05).margin(1e-12));

  FisherMatrix singular{Eigen::MatrixXd::Zero(2, 2), vec2(0, 0)};
  REQUIRE_THROWS_AS(cramer_rao_gap(singular, sigma), SingularFisher);
  REQUIRE_THROWS_AS(cramer_rao_gap(id, Eigen::MatrixXd::Identity(3, 3)), DimensionMismatch);
}

TEST_CASE("mc estimator covariance: degenerate and frozen-band cases") {
  // Point mass: zero covariance up to summation residue (~1e-31).
  ParametricDistribution pm = point_mass_distribution();
  Eigen::MatrixXd z = mc_estimator_covariance(pm, vec1(3.7), mean_estimator(), 100, 50, 1);
  REQUIRE(max_abs(z) < 1e-25);

  // Variance of the sample mean of N(0,1), 1e4 samples x 1e3 trials: within
  // [0.8e-4, 1.2e-4] of the theoretical 1e-4.
  ParametricDistribution g = gaussian_distribution();
  Eigen::MatrixXd cov =
      mc_estimator_covariance(g, vec2(0.0, 1.0), mean_estimator(), 10000, 1000, 20240101);
  REQUIRE(cov(0, 0) > 0.8e-4);
  REQUIRE(cov(0, 0) < 1.2e-4);

  // Determinism: the same seed reproduces bit-identically; another seed moves.
  Eigen::MatrixXd cov2 =
      mc_estimator_covariance(g, vec2(0.0, 1.0), mean_estimator(), 10000, 1000, 20240101);
  REQUIRE(cov(0, 0) == cov2(0, 0));
  Eigen::MatrixXd cov3 =
      mc_estimator_covariance(g, vec2(0.0, 1.0), mean_estimator(), 10000, 1000, 31337);
  REQUIRE(cov(0, 0) != cov3(0, 0));

  REQUIRE_THROWS_AS(mc_estimator_covariance(g, vec2(0.0, 1.0), mean_estimator(), 0, 10, 1),
                    Error);
}

TEST_CASE("cramer-rao bound holds for the gaussian MLE within MC error") {
  ParametricDistribution g = gaussian_distribution();
  double mu = 0.5, sigma = 1.3;
  int n_samples = 10000, n_trials = 1000;
  Eigen::MatrixXd cov = mc_estimator_covariance(g, vec2(mu, sigma), gaussian_mle_estimator(),
                                                n_samples, n_trials, 90210);

  // Per-experiment bound: Sigma >= F^-1 / n.
  FisherMatrix per_experiment{
      static_cast<double>(n_samples) *
          (Eigen::MatrixXd(2, 2) << 1.0 / (sigma * sigma), 0, 0, 2.0 / (sigma * sigma))
              .finished(),
      vec2(mu, sigma)};
  double gap = cramer_rao_gap(per_experiment, cov);

  // MC standard error of the covariance entries: Sigma_ii * sqrt(2/(T-1)).
  double stderr_scale = 0.0;
  for (int i = 0; i < 2; ++i)
    stderr_scale = std::max(stderr_scale, cov(i, i) * std::sqrt(2.0 / (n_trials - 1)));
  REQUIRE(gap >= -3.0 * stderr_scale);

  // The efficient estimators should also not beat the bound by much.
  REQUIRE(gap < 10.0 * stderr_scale);
}
