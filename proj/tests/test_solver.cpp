#include <doctest.h>

#include <cmath>

#include "anabp/rate.hpp"
#include "anabp/rng.hpp"
#include "anabp/solver.hpp"

using namespace anabp;

namespace {

Vector sparse_vector(Rng& rng, Eigen::Index n, int s) {
  Vector x = Vector::Zero(n);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  int placed = 0;
  while (placed < s) {
    const auto i = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    if (used[static_cast<std::size_t>(i)]) continue;
    used[static_cast<std::size_t>(i)] = true;
    x(i) = rng.normal() + (rng.uniform() > 0.5 ? 2.0 : -2.0);
    ++placed;
  }
  return x;
}

}  // namespace

TEST_CASE("gaussian instance construction") {
  Rng rng(30);
  Vector x(12);
  for (Eigen::Index i = 0; i < 12; ++i) x(i) = rng.normal();

  const MeasurementInstance a = gaussian_instance(x, 6, 0.0, std::nullopt, 77);
  CHECK((a.y - a.A * x).norm() == 0.0);

  const MeasurementInstance b = gaussian_instance(x, 6, 0.0, std::nullopt, 77);
  CHECK((a.A - b.A).cwiseAbs().maxCoeff() == 0.0);

  const MeasurementInstance c = gaussian_instance(x, 6, 0.0, std::nullopt, 78);
  CHECK((a.A - c.A).cwiseAbs().maxCoeff() > 1e-6);

  Vector e = Vector::Constant(6, 10.0);
  CHECK_THROWS_AS(gaussian_instance(x, 6, 0.1, e, 1), std::invalid_argument);

  // column variance within 5 sigma of 1 for m = 1e4 entries
  const MeasurementInstance big = gaussian_instance(Vector::Zero(3), 10000, 0.0, std::nullopt, 5);
  const double var = big.A.col(1).squaredNorm() / 10000.0;
  CHECK(std::abs(var - 1.0) <= 5.0 * std::sqrt(2.0 / 10000.0));
}

TEST_CASE("square identity system has a unique feasible point") {
  const Eigen::Index n = 24;
  Rng rng(31);
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.normal();
  MeasurementInstance inst;
  inst.A = Matrix::Identity(n, n);
  inst.y = x;
  inst.eta = 0.0;

  for (const auto& op : {make_identity(n), build_tv1(n),
                         build_haar_undecimated(n, 2, FrameVariant::dual)}) {
    const SolveResult res = solve_abp(op, inst);
    CHECK(res.converged);
    CHECK((res.x_hat - x).norm() < 1e-8);
  }
}

TEST_CASE("equality solves stay feasible and are l1-optimal locally") {
  const Eigen::Index n = 48;
  Rng rng(32);
  const AnalysisOperator op = build_haar_undecimated(n, 2, FrameVariant::dual);
  const Vector x = sparse_vector(rng, n, 4);
  const MeasurementInstance inst = gaussian_instance(x, 36, 0.0, std::nullopt, 909);

  const SolveResult res = solve_abp(op, inst);
  REQUIRE(res.converged);
  CHECK((inst.A * res.x_hat - inst.y).norm() <= 1e-7 * (1.0 + inst.y.norm()));

  // first-order optimality spot check along feasible directions
  const Subspace ker = kernel_basis(inst.A);
  const double f0 = (op.matrix * res.x_hat).lpNorm<1>();
  for (int rep = 0; rep < 20; ++rep) {
    Vector c(ker.dim());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng.normal();
    Vector d = ker.basis * c;
    d /= d.norm();
    CHECK((op.matrix * (res.x_hat + 1e-6 * d)).lpNorm<1>() >= f0 - 1e-6);
  }
}

TEST_CASE("identity-operator recovery at the theorem threshold") {
  const Eigen::Index n = 64;
  const int S = 5;
  const AnalysisOperator id = make_identity(n);
  const GramInfo g = gram_info(id);
  Rng rng(33);

  int hits = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    const Vector x = sparse_vector(rng, n, S);
    const long m = exact_recovery_m(sampling_rate(id, g, x).M, 3.0);
    const MeasurementInstance inst =
        gaussian_instance(x, m, 0.0, std::nullopt, 4000 + static_cast<std::uint64_t>(t));
    const SolveResult res = solve_abp(id, inst);
    if (res.converged && recovery_success(res.x_hat, x)) ++hits;
  }
  CHECK(hits >= 18);  // theory: >= 98.9% per trial
}

TEST_CASE("noisy solve respects the eta ball and the stability bound") {
  const Eigen::Index n = 32;
  Rng rng(34);
  const AnalysisOperator id = make_identity(n);
  const GramInfo g = gram_info(id);

  int ok = 0;
  for (int t = 0; t < 20; ++t) {
    const Vector x = sparse_vector(rng, n, 3);
    // pick m well above the stability threshold m0 (which ignores m)
    const double m0 = stable_bound(id, g, x, Subspace::full(n), 2.0, 2.0, 1.0, 1).m0;
    const long m = static_cast<long>(m0) + 30;
    const double eta = 0.1 * std::sqrt(static_cast<double>(m));
    Vector e(m);
    for (Eigen::Index i = 0; i < m; ++i) e(i) = rng.normal();
    e *= 0.9 * eta / e.norm();
    const MeasurementInstance inst =
        gaussian_instance(x, m, eta, e, 6000 + static_cast<std::uint64_t>(t));
    const SolveResult res = solve_abp(id, inst);
    REQUIRE(res.converged);
    CHECK((inst.A * res.x_hat - inst.y).norm() <= eta + 1e-6);

    const StableReport rep = stable_bound(id, g, x, Subspace::full(n), 2.0, 2.0, eta, m);
    REQUIRE(rep.error.has_value());
    if ((res.x_hat - x).norm() <= *rep.error) ++ok;
  }
  CHECK(ok >= 18);
}

TEST_CASE("recovery success threshold is strict") {
  Vector a = Vector::Zero(4);
  Vector b = Vector::Zero(4);
  CHECK(recovery_success(a, b));
  b(0) = 1e-5;
  CHECK(!recovery_success(a, b));
  b(0) = 1e-7;
  CHECK(recovery_success(a, b));
  CHECK_THROWS_AS(recovery_success(a, Vector::Zero(3)), std::invalid_argument);
}
