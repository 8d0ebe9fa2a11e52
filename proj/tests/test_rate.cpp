#include <doctest.h>

#include <cmath>

#include "anabp/rate.hpp"
#include "anabp/rng.hpp"
#include "anabp/signals.hpp"

using namespace anabp;

namespace {

Vector random_vector(Rng& rng, Eigen::Index d) {
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = rng.normal();
  return v;
}

// E[(|g| - tau)_+^2] for g ~ N(0,1) by composite Simpson quadrature
// (independent oracle; no closed form from the library path is used).
double expected_clipped_square(double tau) {
  const double hi = tau + 14.0;
  const int steps = 4000;
  const double w = (hi - tau) / steps;
  double acc = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double g = tau + i * w;
    const double f = (g - tau) * (g - tau) * std::exp(-0.5 * g * g);
    const double coef = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += coef * f;
  }
  return std::sqrt(2.0 / M_PI) * acc * w / 3.0;
}

// Statistical dimension of the l1 descent cone at an S-sparse point in R^n:
// inf_tau { S (1 + tau^2) + (n - S) E[(|g| - tau)_+^2] } on a refined grid.
double l1_statdim_quadrature(int n, int S) {
  auto objective = [&](double tau) {
    return S * (1.0 + tau * tau) + (n - S) * expected_clipped_square(tau);
  };
  double best = objective(0.0), best_tau = 0.0;
  for (int i = 1; i <= 600; ++i) {
    const double tau = i * 0.01;
    const double v = objective(tau);
    if (v < best) {
      best = v;
      best_tau = tau;
    }
  }
  for (int i = -99; i <= 99; ++i) {
    const double tau = best_tau + i * 1e-4;
    if (tau < 0) continue;
    best = std::min(best, objective(tau));
  }
  return best;
}

}  // namespace

TEST_CASE("h evaluation and limits") {
  CHECK(h_eval(1.0) == doctest::Approx(0.16663).epsilon(1e-4));
  CHECK(h_eval(1e-6) > 1e5);
  CHECK(h_eval(30.0) < 1e-12);
  CHECK_THROWS_AS(h_eval(0.0), std::invalid_argument);
  CHECK_THROWS_AS(h_eval(-1.0), std::invalid_argument);
}

TEST_CASE("h_inverse round trip") {
  for (double tau : {0.1, 1.0, 5.0})
    CHECK(h_inverse(h_eval(tau)) == doctest::Approx(tau).epsilon(1e-9));

  // log grid over the acceptance range
  for (int i = 0; i <= 40; ++i) {
    const double tau = 1e-3 * std::pow(20.0 / 1e-3, i / 40.0);
    CHECK(std::abs(h_inverse(h_eval(tau)) - tau) < 1e-9 * std::max(1.0, tau));
  }

  bool clamped = false;
  h_inverse(1e308, &clamped);
  CHECK(clamped);
}

TEST_CASE("phi limits and shape") {
  CHECK(phi_eval(1e-8) >= 1.0 - 1e-4);
  CHECK(phi_eval(1e8) <= 1e-3);
  CHECK(phi_eval(1.0) == doctest::Approx(0.337).epsilon(2e-3));

  Rng rng(7);
  for (int rep = 0; rep < 100; ++rep) {
    const double r1 = std::exp(4.0 * rng.normal());
    const double r2 = r1 * (1.0 + rng.uniform());
    CHECK(phi_eval(r1) > phi_eval(r2));
  }
}

TEST_CASE("sampling rate: degeneracies and bounds") {
  const AnalysisOperator id = make_identity(16);
  const GramInfo g = gram_info(id);

  Vector dense = Vector::Constant(16, 1.0);
  const RateReport full = sampling_rate(id, g, dense);
  CHECK(full.degenerate == Degeneracy::full_support);
  CHECK(full.M == 16.0);

  const AnalysisOperator tv = build_tv1(16);
  const GramInfo gtv = gram_info(tv);
  const RateReport ker = sampling_rate(tv, gtv, Vector::Constant(16, 2.0));
  CHECK(ker.degenerate == Degeneracy::kernel_member);
  CHECK(ker.M == 1.0);  // dim ker tv1 = 1

  Rng rng(8);
  for (int rep = 0; rep < 25; ++rep) {
    const AnalysisOperator op = build_random_tight(12, 9, 100 + rep);
    const GramInfo gi = gram_info(op);
    Vector x = random_vector(rng, 9);
    x(0) = 0.0;
    const RateReport r = sampling_rate(op, gi, x);
    CHECK(r.M <= 9.0 + 1e-9);
  }
}

TEST_CASE("sampling rate is scaling invariant") {
  Rng rng(9);
  const AnalysisOperator base = build_haar_undecimated(32, 3, FrameVariant::dual);
  const GramInfo gb = gram_info(base);
  const Vector x = blocks_signal(32);
  const double m0 = sampling_rate(base, gb, x).M;
  for (double lambda : {0.1, 3.0}) {
    AnalysisOperator scaled = make_custom(lambda * base.matrix);
    const GramInfo gs = gram_info(scaled);
    CHECK(sampling_rate(scaled, gs, x).M == doctest::Approx(m0).epsilon(1e-8));
  }
}

TEST_CASE("simplified rate dominates the exact rate") {
  Rng rng(10);
  for (int rep = 0; rep < 20; ++rep) {
    const AnalysisOperator op = build_random_tight(14, 10, 200 + rep);
    const GramInfo g = gram_info(op);
    Vector x = random_vector(rng, 10);
    const CosparsityProfile prof = analysis_profile(op, g, x);
    if (prof.L == 0 || !(prof.gen_sparsity > 0)) continue;
    const double M = sampling_rate(op, g, x).M;
    const double simp = simplified_rate(prof, 10);
    CHECK(M <= simp + 1e-8);
  }
}

TEST_CASE("orthonormal case: simplified bound matches eq-2.6 form") {
  const AnalysisOperator id = make_identity(64);
  const GramInfo g = gram_info(id);
  Vector x = Vector::Zero(64);
  for (int i = 0; i < 9; ++i) x(7 * i) = 1.0 + i;
  const CosparsityProfile prof = analysis_profile(id, g, x);
  const double S = prof.gen_sparsity;
  CHECK(S == doctest::Approx(9.0));
  const double simp = simplified_rate(prof, 64);
  CHECK(simp <= 2.0 * S * std::log(64.0 / S) + 2.0 * S + 1e-9);
}

TEST_CASE("orthonormal tightness against the quadrature oracle") {
  const AnalysisOperator id = make_identity(32);
  const GramInfo g = gram_info(id);
  Rng rng(11);
  for (int S : {1, 4, 8, 16}) {
    Vector x = Vector::Zero(32);
    for (int i = 0; i < S; ++i) x(i) = 1.0 + rng.uniform();
    const double M = sampling_rate(id, g, x).M;
    const double oracle = l1_statdim_quadrature(32, S);
    CHECK(std::abs(M - oracle) <= 1.0);
  }
}

TEST_CASE("exact recovery threshold") {
  CHECK(exact_recovery_m(114.0, 3.0) == 189);
  CHECK(exact_recovery_m(0.0, 1e-9) == 2);
  CHECK(exact_recovery_probability(3.0) == doctest::Approx(1.0 - std::exp(-4.5)));
}

TEST_CASE("krz baseline bounds") {
  // identity in R^4 with cosupport of size 3: rhs = (sqrt(4 - 18/(4 pi)) + 2)^2
  const long m = krz_bound_frame(4, 4, 1.0, 3.0, std::exp(-2.0), 0.0);
  CHECK(m == 14);

  // degenerate tv1 limit: full support S = N keeps the bound at the n level
  const long mtv = krz_bound_tv1(64, 63, 63, std::exp(-2.0), 0.0);
  CHECK(mtv >= 64);

  CHECK_THROWS_AS(krz_bound_frame(4, 4, 0.01, 100.0, std::exp(-2.0), 0.0),
                  std::invalid_argument);
}

TEST_CASE("stable bound branches") {
  const AnalysisOperator op = build_haar_undecimated(32, 2, FrameVariant::dual);
  const GramInfo g = gram_info(op);
  const Vector x = blocks_signal(32);

  // U = R^n: the surrogate is x itself and only the noise branch remains.
  const Subspace full = Subspace::full(32);
  const StableReport r1 = stable_bound(op, g, x, full, 2.0, 1.0, 0.5, 4000);
  CHECK((r1.x_bar - x).norm() < 1e-10);
  REQUIRE(r1.error.has_value());
  CHECK(*r1.error ==
        doctest::Approx(2.0 * 0.5 / (std::sqrt(3999.0) - std::sqrt(r1.m0 - 1.0))));

  // eta = 0 with m > m0: the approximation branch decides.
  const Subspace half = Subspace::span_of(Matrix::Identity(32, 32).leftCols(16));
  const StableReport r2 = stable_bound(op, g, x, half, 2.0, 1.0, 0.0, 100000);
  REQUIRE(r2.error.has_value());
  CHECK(*r2.error == doctest::Approx(2.0 * (x - r2.x_bar).norm()));

  // insufficient m
  const StableReport r3 = stable_bound(op, g, x, half, 2.0, 1.0, 0.0, 3);
  CHECK(!r3.error.has_value());

  // R = infinity conventions
  const double inf = std::numeric_limits<double>::infinity();
  const StableReport r4 = stable_bound(op, g, x, full, inf, 1.0, 0.0, 4000);
  REQUIRE(r4.error.has_value());
  CHECK(*r4.error == 0.0);
}

TEST_CASE("approximation error upper bound") {
  const AnalysisOperator id2 = make_identity(2);
  Vector x(2);
  x << 1.0, 1.0;
  const Subspace e1 = Subspace::span_of(Matrix::Identity(2, 2).leftCols(1));
  CHECK(approx_error_upper(id2, x, e1) == doctest::Approx(2.0));

  // x in U: the bound collapses to zero.
  CHECK(approx_error_upper(id2, Vector{{3.0, 0.0}}, e1) == doctest::Approx(0.0));

  Rng rng(12);
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::Index n = 8;
    const AnalysisOperator op = build_random_tight(10, n, 300 + rep);
    Matrix cols(n, 3);
    for (Eigen::Index i = 0; i < n; ++i)
      for (int j = 0; j < 3; ++j) cols(i, j) = rng.normal();
    const Subspace u = Subspace::span_of(cols);
    const Vector x2 = random_vector(rng, n);
    const Vector pux = project(u, x2);
    if ((op.matrix * pux).lpNorm<1>() < 1e-12) continue;
    const Vector surrogate = ((op.matrix * x2).lpNorm<1>() / (op.matrix * pux).lpNorm<1>()) * pux;
    CHECK((x2 - surrogate).norm() <= approx_error_upper(op, x2, u) + 1e-10);
  }
}
