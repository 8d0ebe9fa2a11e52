#pragma once

#include <Eigen/Dense>

namespace anabp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Linear subspace of R^d stored through an orthonormal basis. `basis` may
// have zero columns (trivial subspace); columns always satisfy B^T B = I.
struct Subspace {
  Eigen::Index ambient_dim = 0;
  Matrix basis;

  Eigen::Index dim() const { return basis.cols(); }

  static Subspace full(Eigen::Index d) {
    return Subspace{d, Matrix::Identity(d, d)};
  }
  static Subspace trivial(Eigen::Index d) { return Subspace{d, Matrix(d, 0)}; }

  // Re-orthonormalizes an arbitrary spanning set (drops dependent columns).
  static Subspace span_of(const Matrix& columns, double tol = 1e-10);
};

// Orthonormal basis of {x : ||Ax|| <= tol * ||A|| * ||x||}; rank detection
// uses singular values with relative cutoff tol * sigma_max.
Subspace kernel_basis(const Matrix& A, double tol = 1e-10);

// P_U x, or x - P_U x when complement is set.
Vector project(const Subspace& U, const Vector& x, bool complement = false);

// Euclidean projection onto {w : ||w||_1 <= radius}, exact sort-based
// threshold search; ties are resolved by index order via stable sort.
Vector l1_ball_project(const Vector& v, double radius);

// Componentwise sign(v_i) * max(|v_i| - theta, 0).
Vector soft_threshold(const Vector& v, double theta);

// Euclidean projection onto {w : ||w||_2 <= radius}.
Vector l2_ball_project(const Vector& v, double radius);

}  // namespace anabp
