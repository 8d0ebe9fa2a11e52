#pragma once

#include <cstdint>
#include <optional>

#include "anabp/linalg.hpp"
#include "anabp/operators.hpp"

namespace anabp {

// y = A x* + e with iid standard normal A from a seeded stream and |e|_2 <= eta.
struct MeasurementInstance {
  Matrix A;
  Vector y;
  double eta = 0.0;
  std::uint64_t seed = 0;
};

struct SolverOptions {
  int max_iters = 50000;
  double tol_primal = 1e-9;
  double tol_dual = 1e-9;
  double penalty = 1.0;
  double over_relax = 1.8;
  bool adapt_penalty = true;
};

struct SolveResult {
  Vector x_hat;
  int iters = 0;
  bool converged = false;
};

MeasurementInstance gaussian_instance(const Vector& x_star, Eigen::Index m, double eta,
                                      const std::optional<Vector>& e, std::uint64_t seed);

// Analysis basis pursuit: min |Psi x|_1 s.t. |A x - y|_2 <= eta. The eta = 0
// program is solved in the null-space parameterization of {A x = y} (iterates
// stay exactly feasible); eta > 0 uses a residual split projected onto the
// eta-ball. Both are over-relaxed ADMM with optional penalty rebalancing.
SolveResult solve_abp(const AnalysisOperator& op, const MeasurementInstance& inst,
                      const SolverOptions& opts = {});

// Paper's success criterion: |x_hat - x_star|_2 strictly below 1e-5.
bool recovery_success(const Vector& x_hat, const Vector& x_star);

}  // namespace anabp
