#pragma once

#include <functional>
#include <vector>

#include "anabp/operators.hpp"

namespace anabp {

struct GreedyIteration {
  Eigen::Index chosen = -1;
  Eigen::Index excluded = 0;       // indices excluded in this iteration
  Eigen::Index excluded_total = 0; // prefix length into selected_cosupport
  Eigen::Index S0 = 0;             // |Psi P_U x|_0 after the update
  double residual = 0.0;           // |x - P_U x|_2
};

// Trace of the greedy subspace selection: the accumulated cosupport (in
// exclusion order), one record per iteration, and the final subspace
// U = ker of the excluded rows.
struct GreedyTrace {
  std::vector<Eigen::Index> selected_cosupport;
  std::vector<GreedyIteration> per_iteration;
  Subspace final_U;
  bool reached_target = false;  // false: stagnation abort or exhausted candidates
};

// Greedy subspace selection: repeatedly pick the candidate row with the
// smallest normalized coefficient |<psi_k, x>| / |psi_k|, drop every candidate
// whose coefficient against P_{span(psi_k)perp} x is below eps, and set U to
// the kernel of all dropped rows, until |Psi P_U x|_0 <= S_target.
// eps < 0 selects the default 1e-9 * max_k |<psi_k, x>|. Aborts (partial
// trace, reached_target = false) when S0 fails to decrease twice in a row.
GreedyTrace greedy_subspace(const AnalysisOperator& op, const GramInfo& gram,
                            const Vector& x, Eigen::Index S_target, double eps = -1.0);

// Subspace recorded at the first greedy iteration with S0 <= S (the
// exclusion prefix determines it); S >= N returns the full space.
Subspace greedy_subspace_at(const AnalysisOperator& op, const GreedyTrace& trace,
                            Eigen::Index S);

// (|Psi x|_1 / |Psi P_U x|_1) * P_U x; keeps the analysis l1 mass of x.
Vector surrogate_point(const AnalysisOperator& op, const Vector& x, const Subspace& U);

struct CompressPoint {
  long m = 0;
  Eigen::Index S_used = 0;
  double approx_error = 0.0;
  bool feasible = true;
};

using SubspaceProvider = std::function<Subspace(Eigen::Index)>;

// ker of the rows complementary to the S largest-magnitude coefficients.
SubspaceProvider largest_coeff_provider(const AnalysisOperator& op, const Vector& x);

// Provider backed by a greedy trace (computed down to its reachable floor).
SubspaceProvider greedy_provider(const AnalysisOperator& op, const GramInfo& gram,
                                 const Vector& x, double eps = -1.0);

// For each budget m, lower S from S_init (in steps of s_step) until the
// sampling rate of the projected signal fits the budget, then record the
// surrogate approximation error. Budgets no S satisfies are marked infeasible.
std::vector<CompressPoint> compressible_sweep(const AnalysisOperator& op,
                                              const GramInfo& gram, const Vector& x,
                                              const std::vector<long>& m_values,
                                              const SubspaceProvider& provider,
                                              Eigen::Index S_init,
                                              Eigen::Index s_step = 1);

}  // namespace anabp
