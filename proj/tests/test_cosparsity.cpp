#include <doctest.h>

#include <cmath>

#include "anabp/cosparsity.hpp"
#include "anabp/rng.hpp"
#include "anabp/signals.hpp"

using namespace anabp;

TEST_CASE("identity operator reduces to classical (co)sparsity") {
  const AnalysisOperator id = make_identity(10);
  const GramInfo g = gram_info(id);
  Vector x = Vector::Zero(10);
  x(1) = 2.0;
  x(4) = -1.0;
  x(7) = 0.5;
  const CosparsityProfile p = analysis_profile(id, g, x);
  CHECK(p.S == 3);
  CHECK(p.L == 7);
  CHECK(p.gen_sparsity == doctest::Approx(3.0));
  CHECK(p.gen_cosparsity == doctest::Approx(7.0));
  CHECK(p.gen_cosparsity_diag == doctest::Approx(7.0));
  CHECK(p.sign(1) == 1.0);
  CHECK(p.sign(4) == -1.0);
  CHECK(p.sign(0) == 0.0);
}

TEST_CASE("zero vector yields a degenerate but valid profile") {
  const AnalysisOperator id = make_identity(4);
  const GramInfo g = gram_info(id);
  const CosparsityProfile p = analysis_profile(id, g, Vector::Zero(4));
  CHECK(p.S == 0);
  CHECK(p.gen_sparsity == 0.0);
  CHECK(p.sign.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("double-sum generalized sparsity equals |Psi^T sigma|^2") {
  Rng rng(20);
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::Index n = 6 + static_cast<Eigen::Index>(rng.below(4));
    const Eigen::Index N = n + static_cast<Eigen::Index>(rng.below(6));
    Matrix m(N, n);
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rng.normal();
    const AnalysisOperator op = make_custom(m);
    const GramInfo g = gram_info(op);
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.normal();
    const CosparsityProfile p = analysis_profile(op, g, x);
    CHECK(p.gen_sparsity ==
          doctest::Approx((op.matrix.transpose() * p.sign).squaredNorm()).epsilon(1e-8));
  }
}

TEST_CASE("scaling covariance of the generalized parameters") {
  const AnalysisOperator base = build_haar_undecimated(16, 2, FrameVariant::dual);
  const GramInfo gb = gram_info(base);
  Vector x = Vector::Zero(16);
  x.segment(4, 6).setConstant(2.0);  // piecewise constant: nonempty cosupport
  const CosparsityProfile p0 = analysis_profile(base, gb, x);
  REQUIRE(p0.L > 0);
  for (double lambda : {0.1, 3.0, -2.0}) {
    const AnalysisOperator scaled = make_custom(lambda * base.matrix);
    const GramInfo gs = gram_info(scaled);
    const CosparsityProfile p = analysis_profile(scaled, gs, x);
    CHECK(p.gen_sparsity == doctest::Approx(lambda * lambda * p0.gen_sparsity).epsilon(1e-8));
    CHECK(p.gen_cosparsity == doctest::Approx(lambda * lambda * p0.gen_cosparsity).epsilon(1e-8));
    CHECK(p.gen_cosparsity_diag ==
          doctest::Approx(std::abs(lambda) * p0.gen_cosparsity_diag).epsilon(1e-8));
    // the rate-determining ratios are invariant
    CHECK(p.gen_sparsity / p.gen_cosparsity ==
          doctest::Approx(p0.gen_sparsity / p0.gen_cosparsity).epsilon(1e-8));
    CHECK(p.gen_cosparsity_diag * p.gen_cosparsity_diag / p.gen_cosparsity ==
          doctest::Approx(p0.gen_cosparsity_diag * p0.gen_cosparsity_diag / p0.gen_cosparsity)
              .epsilon(1e-8));
  }
}

TEST_CASE("primal and dual frames share supports") {
  const AnalysisOperator p = build_haar_undecimated(64, 3, FrameVariant::primal);
  const AnalysisOperator d = build_haar_undecimated(64, 3, FrameVariant::dual);
  const GramInfo gp = gram_info(p);
  const GramInfo gd = gram_info(d);
  const Vector x = blocks_signal(64);
  const CosparsityProfile pp = analysis_profile(p, gp, x);
  const CosparsityProfile pd = analysis_profile(d, gd, x);
  CHECK(pp.support == pd.support);
  CHECK(pp.cosupport == pd.cosupport);
}

TEST_CASE("best s-term approximation error") {
  Vector v(3);
  v << 3.0, 1.0, -2.0;
  CHECK(best_s_term_error(v, 3, 1) == 0.0);
  CHECK(best_s_term_error(v, 1, 1) == doctest::Approx(3.0));
  CHECK(best_s_term_error(v, 0, 1) == doctest::Approx(6.0));
  CHECK(best_s_term_error(v, 0, 2) == doctest::Approx(v.norm()));

  // nonincreasing in S
  Rng rng(22);
  Vector w(12);
  for (Eigen::Index i = 0; i < 12; ++i) w(i) = rng.normal();
  for (int S = 0; S < 12; ++S)
    CHECK(best_s_term_error(w, S + 1, 1) <= best_s_term_error(w, S, 1) + 1e-14);

  // ties keep the lower index first
  Vector t(3);
  t << 1.0, 1.0, 1.0;
  CHECK(best_s_term_error(t, 1, 1) == doctest::Approx(2.0));
}

TEST_CASE("kr15 bound examples") {
  Vector coeffs(3);
  coeffs << 2.0, 1.0, 1.0;
  CHECK(kr15_error_bound(1.0, 1, coeffs) == doctest::Approx(4.0));

  Vector sparse(5);
  sparse << 0.0, 3.0, 0.0, 0.0, 0.0;
  CHECK(kr15_error_bound(2.0, 1, sparse) == 0.0);

  CHECK_THROWS_AS(kr15_error_bound(1.0, 0, coeffs), std::invalid_argument);
}

TEST_CASE("kr15 bound is vacuous for the redundant primal frame on blocks") {
  const AnalysisOperator rdwt = build_haar_undecimated(256, 6, FrameVariant::primal);
  const GramInfo g = gram_info(rdwt);
  const Vector x = blocks_signal(256);
  const Vector coeffs = rdwt.matrix * x;
  const double n = 256.0;
  const double ratio = g.frame_upper / g.frame_lower;

  // The smallest S at which the error bound is at least meaningful (below
  // |x|) already demands a sampling rate far beyond the ambient dimension.
  Eigen::Index s_meaningful = rdwt.rows();
  for (Eigen::Index S = 1; S < rdwt.rows(); ++S) {
    if (kr15_error_bound(g.frame_lower, S, coeffs) <= x.norm()) {
      s_meaningful = S;
      break;
    }
  }
  REQUIRE(s_meaningful < rdwt.rows());
  const double m_star = 10.0 * ratio * static_cast<double>(s_meaningful) *
                        std::log(static_cast<double>(rdwt.rows()) /
                                 static_cast<double>(s_meaningful));
  CHECK(m_star > 3.0 * n);
}
