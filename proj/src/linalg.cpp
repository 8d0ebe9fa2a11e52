#include "anabp/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace anabp {

Subspace Subspace::span_of(const Matrix& columns, double tol) {
  if (columns.cols() == 0) return Subspace::trivial(columns.rows());
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = tol * (sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff && sv(rank) > 0.0) ++rank;
  return Subspace{columns.rows(), svd.matrixU().leftCols(rank)};
}

Subspace kernel_basis(const Matrix& A, double tol) {
  const Eigen::Index n = A.cols();
  if (A.rows() == 0 || A.isZero(0.0)) return Subspace::full(n);
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = tol * sv(0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return Subspace{n, svd.matrixV().rightCols(n - rank)};
}

Vector project(const Subspace& U, const Vector& x, bool complement) {
  if (x.size() != U.ambient_dim)
    throw std::invalid_argument("project: dimension mismatch");
  if (U.dim() == 0) return complement ? x : Vector(Vector::Zero(x.size()));
  Vector p = U.basis * (U.basis.transpose() * x);
  return complement ? Vector(x - p) : p;
}

Vector l1_ball_project(const Vector& v, double radius) {
  if (v.lpNorm<1>() <= radius) return v;
  const Eigen::Index d = v.size();
  std::vector<double> mag(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) mag[static_cast<std::size_t>(i)] = std::abs(v(i));
  std::stable_sort(mag.begin(), mag.end(), std::greater<double>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < mag.size(); ++k) {
    cum += mag[k];
    const double cand = (cum - radius) / static_cast<double>(k + 1);
    if (k + 1 == mag.size() || mag[k + 1] <= cand) {
      theta = cand;
      break;
    }
  }
  Vector out(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double m = std::abs(v(i)) - theta;
    out(i) = m > 0.0 ? (v(i) > 0.0 ? m : -m) : 0.0;
  }
  return out;
}

Vector soft_threshold(const Vector& v, double theta) {
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v(i)) - theta;
    out(i) = m > 0.0 ? (v(i) > 0.0 ? m : -m) : 0.0;
  }
  return out;
}

Vector l2_ball_project(const Vector& v, double radius) {
  const double nrm = v.norm();
  if (nrm <= radius) return v;
  if (nrm == 0.0) return v;
  return v * (radius / nrm);
}

}  // namespace anabp
