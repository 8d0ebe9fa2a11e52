#include <doctest.h>

#include "anabp/linalg.hpp"
#include "anabp/rng.hpp"

using namespace anabp;

namespace {

Vector random_vector(Rng& rng, Eigen::Index d) {
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = rng.normal();
  return v;
}

Matrix random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.normal();
  return m;
}

}  // namespace

TEST_CASE("kernel_basis on simple matrices") {
  CHECK(kernel_basis(Matrix::Identity(3, 3), 1e-12).dim() == 0);

  const Subspace z = kernel_basis(Matrix::Zero(2, 2), 1e-12);
  REQUIRE(z.dim() == 2);
  CHECK((z.basis * z.basis.transpose() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  Matrix a(1, 2);
  a << 1.0, 1.0;
  const Subspace k = kernel_basis(a);
  REQUIRE(k.dim() == 1);
  const double inv_sqrt2 = 0.7071067811865476;
  const double dot = k.basis(0, 0) * inv_sqrt2 - k.basis(1, 0) * inv_sqrt2;
  CHECK(std::abs(std::abs(dot) - 1.0) < 1e-12);
}

TEST_CASE("kernel_basis columns are orthonormal and annihilated") {
  Rng rng(41);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::Index m = 3 + static_cast<Eigen::Index>(rng.below(5));
    const Eigen::Index n = m + 2 + static_cast<Eigen::Index>(rng.below(6));
    const Matrix a = random_matrix(rng, m, n);
    const Subspace k = kernel_basis(a);
    CHECK(k.dim() == n - m);  // full row rank almost surely
    CHECK((k.basis.transpose() * k.basis - Matrix::Identity(k.dim(), k.dim()))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    CHECK((a * k.basis).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("project onto coordinate and diagonal subspaces") {
  Subspace e1{2, Matrix::Identity(2, 2).leftCols(1)};
  Vector x(2);
  x << 3.0, 4.0;
  CHECK((project(e1, x) - Vector{{3.0, 0.0}}).norm() < 1e-14);
  CHECK((project(e1, x, true) - Vector{{0.0, 4.0}}).norm() < 1e-14);

  const Subspace none = Subspace::trivial(2);
  CHECK(project(none, x).norm() == 0.0);
  CHECK((project(none, x, true) - x).norm() == 0.0);

  Matrix diag(2, 1);
  diag << 0.7071067811865476, 0.7071067811865476;
  Subspace u{2, diag};
  Vector e(2);
  e << 1.0, 0.0;
  CHECK((project(u, e) - Vector{{0.5, 0.5}}).norm() < 1e-12);

  CHECK_THROWS_AS(project(u, Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("project is idempotent, self-adjoint, and norm-splitting") {
  Rng rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::Index n = 6;
    const Subspace u = Subspace::span_of(random_matrix(rng, n, 3));
    const Vector x = random_vector(rng, n);
    const Vector y = random_vector(rng, n);
    const Vector px = project(u, x);
    CHECK((project(u, px) - px).norm() < 1e-10);
    CHECK(std::abs(px.dot(y) - x.dot(project(u, y))) < 1e-10);
    const double split = px.squaredNorm() + project(u, x, true).squaredNorm();
    CHECK(std::abs(split - x.squaredNorm()) < 1e-10);
  }
}

TEST_CASE("l1_ball_project examples") {
  Vector v(2);
  v << 0.3, -0.2;
  CHECK((l1_ball_project(v, 1.0) - v).norm() == 0.0);

  v << 3.0, 0.0;
  CHECK((l1_ball_project(v, 1.0) - Vector{{1.0, 0.0}}).norm() < 1e-14);

  v << 2.0, 1.0;
  CHECK((l1_ball_project(v, 2.0) - Vector{{1.5, 0.5}}).norm() < 1e-14);
}

TEST_CASE("l1_ball_project minimizes distance over the ball") {
  Rng rng(43);
  for (int rep = 0; rep < 1000; ++rep) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.below(6));
    const double radius = 0.5 + 2.0 * rng.uniform();
    const Vector v = 3.0 * random_vector(rng, d);
    const Vector p = l1_ball_project(v, radius);
    CHECK(p.lpNorm<1>() <= radius + 1e-12);
    Vector w = random_vector(rng, d);
    w = l1_ball_project(w, radius * rng.uniform());
    CHECK((v - p).norm() <= (v - w).norm() + 1e-9);
  }
}

TEST_CASE("soft_threshold examples and optimality") {
  Vector v(2);
  v << 2.0, -2.0;
  CHECK((soft_threshold(v, 0.0) - v).norm() == 0.0);
  CHECK(soft_threshold(v, 3.0).norm() == 0.0);

  v << 2.0, -0.5;
  CHECK((soft_threshold(v, 1.0) - Vector{{1.0, 0.0}}).norm() < 1e-14);

  // u minimizes 0.5|u - v|^2 + theta |u|_1 iff componentwise stationarity.
  Rng rng(44);
  for (int rep = 0; rep < 100; ++rep) {
    const Vector x = 2.0 * random_vector(rng, 8);
    const double theta = rng.uniform();
    const Vector u = soft_threshold(x, theta);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (u(i) != 0.0)
        CHECK(std::abs(u(i) - x(i) + theta * (u(i) > 0 ? 1.0 : -1.0)) < 1e-12);
      else
        CHECK(std::abs(x(i)) <= theta + 1e-12);
    }
  }
}
