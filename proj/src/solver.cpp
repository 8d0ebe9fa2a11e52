#include "anabp/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "anabp/rng.hpp"

namespace anabp {

MeasurementInstance gaussian_instance(const Vector& x_star, Eigen::Index m, double eta,
                                      const std::optional<Vector>& e, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("gaussian_instance: m must be >= 1");
  if (eta < 0.0) throw std::invalid_argument("gaussian_instance: eta must be >= 0");
  MeasurementInstance inst;
  inst.eta = eta;
  inst.seed = seed;
  Rng rng(Rng::derive(seed, 0x6d656173ULL));
  inst.A.resize(m, x_star.size());
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < x_star.size(); ++j) inst.A(i, j) = rng.normal();
  inst.y = inst.A * x_star;
  if (e) {
    if (e->size() != m) throw std::invalid_argument("gaussian_instance: noise dimension");
    if (e->norm() > eta) throw std::invalid_argument("gaussian_instance: |e|_2 exceeds eta");
    inst.y += *e;
  }
  return inst;
}

bool recovery_success(const Vector& x_hat, const Vector& x_star) {
  if (x_hat.size() != x_star.size())
    throw std::invalid_argument("recovery_success: dimension mismatch");
  return (x_hat - x_star).norm() < 1e-5;
}

namespace {

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double eps_primal = 0.0;
  double eps_dual = 0.0;
  bool ok() const { return primal <= eps_primal && dual <= eps_dual; }
};

// Residual balancing (factor-2 steps, checked every 25 iterations). The
// scaled dual variables must be rescaled alongside the penalty.
template <typename Rescale>
void maybe_adapt(double& rho, double r_pri, double r_dual, Rescale&& rescale) {
  if (r_pri > 10.0 * r_dual && rho < 1e6) {
    rho *= 2.0;
    rescale(0.5);
  } else if (r_dual > 10.0 * r_pri && rho > 1e-6) {
    rho *= 0.5;
    rescale(2.0);
  }
}

// eta = 0: parameterize {Ax = y} as x0 + B xi and run ADMM on min |M xi + c|_1.
SolveResult solve_equality(const AnalysisOperator& op, const MeasurementInstance& inst,
                           const SolverOptions& opts) {
  const Eigen::Index n = op.cols();
  Eigen::BDCSVD<Matrix> svd(inst.A, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-12 * (sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;

  Vector x0 = svd.matrixV().leftCols(rank) *
              (svd.matrixU().leftCols(rank).transpose() * inst.y).cwiseQuotient(sv.head(rank));
  const Eigen::Index d = n - rank;

  SolveResult res;
  if (d == 0) {
    res.x_hat = std::move(x0);
    res.converged = (inst.A * res.x_hat - inst.y).norm() <= 1e-9 * (1.0 + inst.y.norm());
    return res;
  }

  const Matrix B = svd.matrixV().rightCols(d);
  const Matrix M = op.matrix * B;
  const Vector c = op.matrix * x0;
  Matrix MtM = M.transpose() * M;
  // Guard against ker Psi intersecting ker A (possible for non-frame Psi).
  MtM.diagonal().array() += 1e-13 * (MtM.trace() / static_cast<double>(d) + 1.0);
  Eigen::LDLT<Matrix> fac(MtM);

  const Eigen::Index N = op.rows();
  Vector xi = Vector::Zero(d);
  Vector z = c;
  Vector u = Vector::Zero(N);
  double rho = opts.penalty;
  const double alpha = opts.over_relax;

  Vector w = c;  // M xi + c
  Residuals r;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    xi = fac.solve(M.transpose() * (z - u - c));
    w.noalias() = M * xi;
    w += c;
    const Vector w_rel = alpha * w + (1.0 - alpha) * z;
    const Vector z_old = z;
    z = soft_threshold(w_rel + u, 1.0 / rho);
    u += w_rel - z;

    r.primal = (w - z).norm();
    r.dual = rho * (M.transpose() * (z - z_old)).norm();
    r.eps_primal = std::sqrt(static_cast<double>(N)) * 1e-12 +
                   opts.tol_primal * std::max(w.norm(), z.norm());
    r.eps_dual = std::sqrt(static_cast<double>(d)) * 1e-12 +
                 opts.tol_dual * rho * (M.transpose() * u).norm();
    if (r.ok()) {
      ++it;
      break;
    }
    if (opts.adapt_penalty && (it + 1) % 25 == 0)
      maybe_adapt(rho, r.primal, r.dual, [&](double s) { u *= s; });
  }
  res.x_hat = x0 + B * xi;
  res.iters = it;
  res.converged = r.ok();
  return res;
}

// eta > 0: split both the analysis coefficients and the measurement residual,
// the latter projected onto the eta-ball.
SolveResult solve_noisy(const AnalysisOperator& op, const MeasurementInstance& inst,
                        const SolverOptions& opts) {
  const Eigen::Index n = op.cols();
  const Eigen::Index N = op.rows();
  const Eigen::Index m = inst.A.rows();

  Matrix H = op.matrix.transpose() * op.matrix;
  H.noalias() += inst.A.transpose() * inst.A;
  H.diagonal().array() += 1e-13 * (H.trace() / static_cast<double>(n) + 1.0);
  Eigen::LDLT<Matrix> fac(H);

  Vector x = Vector::Zero(n);
  Vector z = Vector::Zero(N);
  Vector rres = Vector::Zero(m);
  Vector u = Vector::Zero(N);
  Vector v = Vector::Zero(m);
  double rho = opts.penalty;
  const double alpha = opts.over_relax;

  Residuals r;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    x = fac.solve(op.matrix.transpose() * (z - u) + inst.A.transpose() * (inst.y + rres - v));
    const Vector w1 = op.matrix * x;
    const Vector w2 = inst.A * x - inst.y;
    const Vector w1_rel = alpha * w1 + (1.0 - alpha) * z;
    const Vector w2_rel = alpha * w2 + (1.0 - alpha) * rres;
    const Vector z_old = z;
    const Vector r_old = rres;
    z = soft_threshold(w1_rel + u, 1.0 / rho);
    rres = l2_ball_project(w2_rel + v, inst.eta);
    u += w1_rel - z;
    v += w2_rel - rres;

    r.primal = std::sqrt((w1 - z).squaredNorm() + (w2 - rres).squaredNorm());
    r.dual = rho * (op.matrix.transpose() * (z - z_old) + inst.A.transpose() * (rres - r_old)).norm();
    const double scale =
        std::max(std::sqrt(w1.squaredNorm() + w2.squaredNorm()),
                 std::sqrt(z.squaredNorm() + rres.squaredNorm()));
    r.eps_primal = std::sqrt(static_cast<double>(N + m)) * 1e-12 + opts.tol_primal * scale;
    r.eps_dual = std::sqrt(static_cast<double>(n)) * 1e-12 +
                 opts.tol_dual * rho *
                     (op.matrix.transpose() * u + inst.A.transpose() * v).norm();
    if (r.ok()) {
      ++it;
      break;
    }
    if (opts.adapt_penalty && (it + 1) % 25 == 0)
      maybe_adapt(rho, r.primal, r.dual, [&](double s) {
        u *= s;
        v *= s;
      });
  }
  SolveResult res;
  res.x_hat = std::move(x);
  res.iters = it;
  res.converged = r.ok();
  return res;
}

}  // namespace

SolveResult solve_abp(const AnalysisOperator& op, const MeasurementInstance& inst,
                      const SolverOptions& opts) {
  if (inst.A.cols() != op.cols())
    throw std::invalid_argument("solve_abp: operator/instance dimension mismatch");
  if (inst.A.rows() != inst.y.size())
    throw std::invalid_argument("solve_abp: measurement dimension mismatch");
  return inst.eta == 0.0 ? solve_equality(op, inst, opts) : solve_noisy(op, inst, opts);
}

}  // namespace anabp
