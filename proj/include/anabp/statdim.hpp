#pragma once

#include <cstdint>

#include <Eigen/SparseCore>

#include "anabp/operators.hpp"
#include "anabp/solver.hpp"

namespace anabp {

// Monte-Carlo estimate of the statistical dimension of the l1-analysis
// descent cone: mean/std-error of the squared optimal values of the scaled
// descent program over k Gaussian draws (converged samples only).
struct StatDimEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int samples = 0;   // converged sample count entering the estimate
  int failures = 0;  // non-converged program solves
  double scale_t = 0.0;
};

// Scaled descent program at (op, x, t):
//   sup <g, h>  s.t.  |Psi(x + t h)|_1 <= |Psi x|_1  and  |h|_2 <= 1,
// solved by two-block splitting: the h-step is a trust-region subproblem
// (exact via the cached eigendecomposition of Psi^T Psi), the z-step an
// l1-ball projection. One instance serves many draws.
class DescentProgram {
 public:
  DescentProgram(const AnalysisOperator& op, Vector x, double t);

  // Optimal value for the draw g; thread-safe across concurrent calls.
  // final_rho reports the adapted penalty, usable to warm-start the next
  // draw (rho0); calibrating once keeps the estimate deterministic.
  double value(const Vector& g, bool* converged = nullptr,
               double tol = 1e-8, int max_iters = 20000, double rho0 = 1.0,
               double* final_rho = nullptr) const;

 private:
  Matrix psi_;
  Eigen::SparseMatrix<double> psi_sparse_;  // used when the operator is sparse
  bool use_sparse_ = false;
  Vector coeffs0_;  // Psi x
  double radius_;   // |Psi x|_1
  double t_;
  Matrix eigvec_;   // Psi^T Psi = Q diag(lambda) Q^T
  Vector eigval_;

  Vector apply(const Vector& v) const;
  Vector apply_adjoint(const Vector& v) const;
};

double descent_program_value(const AnalysisOperator& op, const Vector& x, double t,
                             const Vector& g, bool* converged = nullptr);

StatDimEstimate statistical_dimension(const AnalysisOperator& op, const Vector& x,
                                      double t = 0.01, int k = 200,
                                      std::uint64_t seed = 0, int threads = 0);

// delta_hat <= M + 1 + 3 * std_error (mean-width sandwich around the
// statistical dimension, combined with the sampling-rate upper bound).
bool verify_mean_width_sandwich(const StatDimEstimate& estimate, double M);

// |ip| * [erf(beta_min/sqrt2) - h(beta_max) * beta_min * beta_max]; the
// clipped-covariance upper bound, an equality when the vectors coincide.
double clipped_cov_bound(double ip, double beta1, double beta2);

struct OracleEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

double clip(double s, double t);

// Monte-Carlo E[clip(<v1,g>; b1) * clip(<v2,g>; b2)] over seeded bivariate
// normals with correlation <v1, v2> (unit vectors expected).
OracleEstimate clipped_cov_oracle(const Vector& v1, const Vector& v2, double beta1,
                                  double beta2, long samples, std::uint64_t seed);
OracleEstimate clipped_cov_oracle_rho(double rho, double beta1, double beta2,
                                      long samples, std::uint64_t seed);

}  // namespace anabp
