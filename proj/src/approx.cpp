#include "anabp/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "anabp/rate.hpp"

namespace anabp {

namespace {

Matrix rows_subset(const Matrix& m, const std::vector<Eigen::Index>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

Eigen::Index count_above(const Vector& v, double eps) {
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > eps) ++c;
  return c;
}

}  // namespace

GreedyTrace greedy_subspace(const AnalysisOperator& op, const GramInfo& gram,
                            const Vector& x, Eigen::Index S_target, double eps) {
  const Eigen::Index N = op.rows();
  const Eigen::Index n = op.cols();
  if (S_target < 1 || S_target > N)
    throw std::invalid_argument("greedy_subspace: S_target out of range");

  const Vector coeffs = op.matrix * x;
  if (eps < 0.0) eps = 1e-9 * coeffs.cwiseAbs().maxCoeff();

  GreedyTrace trace;
  if (S_target >= N) {
    // Loop condition is false at entry; the whole space represents x exactly.
    trace.final_U = Subspace::full(n);
    trace.reached_target = true;
    return trace;
  }

  std::vector<bool> in_candidates(static_cast<std::size_t>(N), true);
  Eigen::Index candidate_count = N;
  Eigen::Index S0 = N;
  int non_decreasing = 0;

  while (S0 > S_target && candidate_count > 0) {
    Eigen::Index best = -1;
    double best_score = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < N; ++k) {
      if (!in_candidates[static_cast<std::size_t>(k)]) continue;
      const double score = std::abs(coeffs(k)) / gram.row_norms(k);
      if (score < best_score) {
        best_score = score;
        best = k;
      }
    }

    // Coefficients of x projected away from span{psi_best}: one Gram column
    // instead of a fresh matrix-vector product.
    const Vector proj_coeffs =
        coeffs - (coeffs(best) / gram.gram(best, best)) * gram.gram.col(best);

    GreedyIteration rec;
    rec.chosen = best;
    for (Eigen::Index k = 0; k < N; ++k) {
      if (!in_candidates[static_cast<std::size_t>(k)]) continue;
      if (std::abs(proj_coeffs(k)) <= eps) {
        in_candidates[static_cast<std::size_t>(k)] = false;
        --candidate_count;
        trace.selected_cosupport.push_back(k);
        ++rec.excluded;
      }
    }
    rec.excluded_total = static_cast<Eigen::Index>(trace.selected_cosupport.size());

    const Subspace U = kernel_basis(rows_subset(op.matrix, trace.selected_cosupport));
    const Vector pux = project(U, x);
    const Eigen::Index S0_new = count_above(op.matrix * pux, eps);
    rec.S0 = S0_new;
    rec.residual = (x - pux).norm();
    trace.per_iteration.push_back(rec);
    trace.final_U = U;

    non_decreasing = S0_new >= S0 ? non_decreasing + 1 : 0;
    S0 = S0_new;
    if (non_decreasing >= 2) {
      trace.reached_target = false;
      return trace;
    }
  }
  trace.reached_target = S0 <= S_target;
  return trace;
}

Subspace greedy_subspace_at(const AnalysisOperator& op, const GreedyTrace& trace,
                            Eigen::Index S) {
  if (S >= op.rows() || trace.per_iteration.empty()) return Subspace::full(op.cols());
  for (const GreedyIteration& rec : trace.per_iteration) {
    if (rec.S0 <= S) {
      std::vector<Eigen::Index> prefix(trace.selected_cosupport.begin(),
                                       trace.selected_cosupport.begin() + rec.excluded_total);
      return kernel_basis(rows_subset(op.matrix, prefix));
    }
  }
  return trace.final_U;
}

Vector surrogate_point(const AnalysisOperator& op, const Vector& x, const Subspace& U) {
  const Vector pux = project(U, x);
  const double denom = (op.matrix * pux).lpNorm<1>();
  if (denom == 0.0)
    throw std::invalid_argument("surrogate_point: Psi P_U x vanishes");
  return ((op.matrix * x).lpNorm<1>() / denom) * pux;
}

SubspaceProvider largest_coeff_provider(const AnalysisOperator& op, const Vector& x) {
  const Vector coeffs = op.matrix * x;
  auto order = std::make_shared<std::vector<Eigen::Index>>(static_cast<std::size_t>(coeffs.size()));
  std::iota(order->begin(), order->end(), Eigen::Index{0});
  std::stable_sort(order->begin(), order->end(), [coeffs](Eigen::Index a, Eigen::Index b) {
    return std::abs(coeffs(a)) > std::abs(coeffs(b));
  });
  const Matrix psi = op.matrix;
  return [psi, order](Eigen::Index S) {
    const Eigen::Index N = psi.rows();
    if (S >= N) return Subspace::full(psi.cols());
    std::vector<Eigen::Index> cosupport(order->begin() + S, order->end());
    Matrix rows(static_cast<Eigen::Index>(cosupport.size()), psi.cols());
    for (std::size_t i = 0; i < cosupport.size(); ++i)
      rows.row(static_cast<Eigen::Index>(i)) = psi.row(cosupport[i]);
    return kernel_basis(rows);
  };
}

SubspaceProvider greedy_provider(const AnalysisOperator& op, const GramInfo& gram,
                                 const Vector& x, double eps) {
  auto trace = std::make_shared<GreedyTrace>(greedy_subspace(op, gram, x, 1, eps));
  const AnalysisOperator* op_ptr = &op;
  return [op_ptr, trace](Eigen::Index S) { return greedy_subspace_at(*op_ptr, *trace, S); };
}

std::vector<CompressPoint> compressible_sweep(const AnalysisOperator& op,
                                              const GramInfo& gram, const Vector& x,
                                              const std::vector<long>& m_values,
                                              const SubspaceProvider& provider,
                                              Eigen::Index S_init, Eigen::Index s_step) {
  if (s_step < 1) throw std::invalid_argument("compressible_sweep: s_step must be >= 1");

  // Budgets are handled in decreasing order so the S descent continues from
  // the previous stop instead of restarting at S_init.
  std::vector<std::size_t> order(m_values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return m_values[a] > m_values[b]; });

  std::vector<CompressPoint> out(m_values.size());
  Eigen::Index S = S_init;
  Subspace U = provider(S);
  bool degenerate = (op.matrix * project(U, x)).lpNorm<1>() == 0.0;
  double M = degenerate ? std::numeric_limits<double>::infinity()
                        : sampling_rate(op, gram, project(U, x)).M;

  for (std::size_t oi : order) {
    const long m = m_values[oi];
    bool feasible = !degenerate;
    while (feasible && M > static_cast<double>(m)) {
      if (S <= 1) {
        feasible = false;
        break;
      }
      S = std::max<Eigen::Index>(1, S - s_step);
      U = provider(S);
      const Vector pux = project(U, x);
      if ((op.matrix * pux).lpNorm<1>() == 0.0) {
        degenerate = true;
        feasible = false;
        break;
      }
      M = sampling_rate(op, gram, pux).M;
    }
    CompressPoint pt;
    pt.m = m;
    if (!feasible) {
      pt.feasible = false;
      pt.S_used = S;
      pt.approx_error = std::numeric_limits<double>::quiet_NaN();
    } else {
      pt.S_used = S;
      pt.approx_error = (x - surrogate_point(op, x, U)).norm();
    }
    out[oi] = pt;
  }
  return out;
}

}  // namespace anabp
