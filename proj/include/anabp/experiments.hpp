#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "anabp/cosparsity.hpp"
#include "anabp/operators.hpp"
#include "anabp/solver.hpp"

namespace anabp {

struct ExperimentCell {
  double axis = 0.0;  // sweep coordinate: S_TV, S, or 0 for a fixed signal
  long m = 0;
  int trials = 0;
  int successes = 0;
  double mean_error = 0.0;
  double M_mean = 0.0;
  double krz_mean = 0.0;
  std::uint64_t seed_base = 0;

  friend bool operator==(const ExperimentCell&, const ExperimentCell&) = default;
};

struct ExperimentGrid {
  std::vector<ExperimentCell> records;
  std::vector<double> infeasible_axis;
  int solver_failures = 0;
  int total_solves = 0;

  friend bool operator==(const ExperimentGrid&, const ExperimentGrid&) = default;
};

struct ExperimentOptions {
  int threads = 0;  // 0 = hardware concurrency
  // Sweeps cap the iteration budget well below the standalone default:
  // successful recoveries converge in well under a thousand iterations, and
  // instances still unconverged at the cap sit far from the ground truth, so
  // they are classified as failures either way.
  SolverOptions solver{.max_iters = 5000};
  double krz_eps = 0.13533528323661270;  // e^-2
  double krz_tau = 0.0;
  bool literal_kernel = false;
};

// Schedules fn(0..count-1) on a small worker pool; results must go to
// preallocated per-index slots so aggregation stays deterministic.
void parallel_for(long count, int threads, const std::function<void(long)>& fn);

// Baseline measurement count for the operator at hand: the frame-shaped
// bound for frames (and general operators via |Psi|^2), the dedicated
// variant for 1D total variation. NaN when the bound is not evaluable.
double krz_for(const AnalysisOperator& op, const GramInfo& gram,
               const CosparsityProfile& prof, double eps, double tau);

// Fresh Gaussian instance and equality-constrained solve per (m, trial);
// success means |x_hat - x|_2 < 1e-5.
ExperimentGrid run_fixed_signal(const AnalysisOperator& op, const GramInfo& gram,
                                const Vector& x, const std::vector<long>& m_values,
                                int trials, std::uint64_t seed,
                                const ExperimentOptions& opts = {});

// Phase transition over TV-sparsity: outer trials redraw the piecewise
// constant signal, inner trials redraw the measurement matrix.
ExperimentGrid run_pw_const(const AnalysisOperator& op, const GramInfo& gram,
                            const std::vector<Eigen::Index>& s_tv_values,
                            const std::vector<long>& m_values, int outer_trials,
                            int inner_trials, std::uint64_t seed,
                            const ExperimentOptions& opts = {});

struct SLPair {
  Eigen::Index S = 0;
  Eigen::Index L = 0;
};

// Phase transition over (S, L): each outer trial draws a fresh tight random
// frame with N = S + L plus a random cosparse signal. Pairs whose cosupport
// rows have trivial kernel are reported in infeasible_axis and skipped.
ExperimentGrid run_random_frames(Eigen::Index n, const std::vector<SLPair>& pairs,
                                 const std::vector<long>& m_values, int outer_trials,
                                 int inner_trials, std::uint64_t seed,
                                 const ExperimentOptions& opts = {});

// Success-rate curve in m for one axis value of the grid.
std::vector<std::pair<long, double>> success_curve(const ExperimentGrid& grid, double axis);

// Linearly interpolated 50%-success crossing of a rate curve (sorted by m);
// NaN when the curve never reaches 1/2.
double crossing_50(const std::vector<std::pair<long, double>>& curve);
double crossing_50(const ExperimentGrid& grid, double axis);

}  // namespace anabp
