#include <doctest.h>

#include <cmath>

#include "anabp/rng.hpp"
#include "anabp/statdim.hpp"

using namespace anabp;

namespace {

// Statistical dimension of the halfspace {h : <s, h> <= 0} in R^2 by tensor
// Gauss quadrature over the plane: value(g) = |g| inside, |g - <g,s>s| outside.
double halfspace_statdim_2d() {
  const int steps = 400;
  const double lo = -8.0, hi = 8.0;
  const double w = (hi - lo) / steps;
  const Eigen::Vector2d s(1.0, 0.0);  // rotation invariant; any unit vector
  double acc = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double ci = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    for (int j = 0; j <= steps; ++j) {
      const double cj = (j == 0 || j == steps) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      const Eigen::Vector2d g(lo + i * w, lo + j * w);
      const double sq =
          g.dot(s) <= 0.0 ? g.squaredNorm() : (g - g.dot(s) * s).squaredNorm();
      acc += ci * cj * sq * std::exp(-0.5 * g.squaredNorm());
    }
  }
  return acc * w * w / 9.0 / (2.0 * M_PI);
}

}  // namespace

TEST_CASE("descent program values on simple instances") {
  const AnalysisOperator id2 = make_identity(2);
  Vector x(2);
  x << 1.0, 0.0;

  CHECK(descent_program_value(id2, x, 0.01, Vector::Zero(2)) == doctest::Approx(0.0).epsilon(1e-6));

  Vector g(2);
  g << -1.0, 0.0;
  bool ok = false;
  CHECK(descent_program_value(id2, x, 0.01, g, &ok) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(ok);
}

TEST_CASE("descent program value is bounded by |g| and scales linearly") {
  Rng rng(60);
  const AnalysisOperator op = build_haar_undecimated(8, 1, FrameVariant::dual);
  Vector x(8);
  for (Eigen::Index i = 0; i < 8; ++i) x(i) = rng.normal();
  const DescentProgram prog(op, x, 0.01);
  for (int rep = 0; rep < 100; ++rep) {
    Vector g(8);
    for (Eigen::Index i = 0; i < 8; ++i) g(i) = rng.normal();
    const double v = prog.value(g);
    CHECK(v <= g.norm() + 1e-6);
    if (rep < 10) {
      const double v2 = prog.value(Vector(2.0 * g));
      CHECK(v2 == doctest::Approx(2.0 * v).epsilon(2e-5));
    }
  }
}

TEST_CASE("halfspace statistical dimension: closed form and quadrature") {
  // dense x: the descent cone of the l1 norm is a halfspace, delta = n - 1/2
  const AnalysisOperator id8 = make_identity(8);
  const Vector x8 = Vector::Constant(8, 1.0);
  const StatDimEstimate est8 = statistical_dimension(id8, x8, 0.01, 200, 11);
  CHECK(est8.failures == 0);
  CHECK(std::abs(est8.mean - 7.5) <= 3.0 * est8.std_error);

  const double quad = halfspace_statdim_2d();
  CHECK(quad == doctest::Approx(1.5).epsilon(1e-4));
  const AnalysisOperator id2 = make_identity(2);
  const Vector x2 = Vector::Constant(2, 1.0);
  const StatDimEstimate est2 = statistical_dimension(id2, x2, 0.01, 200, 12);
  CHECK(std::abs(est2.mean - quad) <= 3.0 * est2.std_error);
}

TEST_CASE("cone identification is stable in t") {
  const AnalysisOperator op = build_haar_undecimated(16, 2, FrameVariant::dual);
  Vector x = Vector::Zero(16);
  x.segment(4, 6).setConstant(1.5);
  const StatDimEstimate a = statistical_dimension(op, x, 0.005, 150, 13);
  const StatDimEstimate b = statistical_dimension(op, x, 0.01, 150, 13);
  const StatDimEstimate c = statistical_dimension(op, x, 0.02, 150, 13);
  const double spread = std::max({a.mean, b.mean, c.mean}) - std::min({a.mean, b.mean, c.mean});
  CHECK(spread <= 2.0 * (a.std_error + b.std_error + c.std_error));
}

TEST_CASE("mean width sandwich flag") {
  StatDimEstimate est;
  est.mean = 10.0;
  est.std_error = 0.5;
  CHECK(verify_mean_width_sandwich(est, 9.5));
  est.mean = 16.0;
  est.std_error = 0.1;
  CHECK(!verify_mean_width_sandwich(est, 0.0));
}

TEST_CASE("clipped covariance bound and oracle") {
  // orthogonal directions: both vanish
  CHECK(clipped_cov_bound(0.0, 1.0, 2.0) == 0.0);
  const OracleEstimate orth = clipped_cov_oracle_rho(0.0, 1.0, 2.0, 200000, 3);
  CHECK(std::abs(orth.mean) <= 3.0 * orth.std_error);

  // equality case v1 = v2
  for (double beta : {0.3, 1.0, 3.0}) {
    const double bound = clipped_cov_bound(1.0, beta, beta);
    const OracleEstimate eq = clipped_cov_oracle_rho(1.0, beta, beta, 400000, 4);
    CHECK(std::abs(eq.mean - bound) <= 3.0 * eq.std_error);
  }

  // effectively unclipped: plain covariance
  Vector v1(3), v2(3);
  v1 << 1.0, 0.0, 0.0;
  v2 << 0.6, 0.8, 0.0;
  const OracleEstimate big = clipped_cov_oracle(v1, v2, 10.0, 10.0, 400000, 5);
  CHECK(std::abs(big.mean - 0.6) <= 3.0 * big.std_error + 1e-3);
  CHECK(clipped_cov_bound(0.6, 10.0, 10.0) == doctest::Approx(0.6).epsilon(1e-6));
}

TEST_CASE("oracle dominance on random configurations") {
  Rng rng(61);
  for (int rep = 0; rep < 200; ++rep) {
    const double rho = 2.0 * rng.uniform() - 1.0;
    const double b1 = 3.0 * rng.uniform();
    const double b2 = 3.0 * rng.uniform();
    const OracleEstimate est = clipped_cov_oracle_rho(rho, b1, b2, 50000,
                                                      1000 + static_cast<std::uint64_t>(rep));
    CHECK(std::abs(est.mean) <= clipped_cov_bound(rho, b1, b2) + 3.0 * est.std_error);
  }
}

TEST_CASE("clipped covariance grows at most linearly in the correlation") {
  for (double beta : {0.5, 1.5}) {
    const double theta1 = clipped_cov_bound(1.0, beta, beta);  // equality case
    const OracleEstimate half = clipped_cov_oracle_rho(0.5, beta, beta, 400000, 6);
    CHECK(half.mean >= -3.0 * half.std_error);
    CHECK(half.mean <= 0.5 * theta1 + 3.0 * half.std_error);
  }
}
