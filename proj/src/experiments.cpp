#include "anabp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "anabp/rate.hpp"
#include "anabp/rng.hpp"
#include "anabp/signals.hpp"

namespace anabp {

void parallel_for(long count, int threads, const std::function<void(long)>& fn) {
  if (threads <= 0)
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<long>(threads, count));
  if (threads <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  auto worker = [&]() {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

double krz_for(const AnalysisOperator& op, const GramInfo& gram,
               const CosparsityProfile& prof, double eps, double tau) {
  try {
    if (op.kind == OperatorKind::tv1)
      return static_cast<double>(krz_bound_tv1(op.cols(), op.rows(), prof.S, eps, tau));
    double cosupport_norms = 0.0;
    for (Eigen::Index k : prof.cosupport) cosupport_norms += gram.row_norms(k);
    return static_cast<double>(
        krz_bound_frame(op.cols(), op.rows(), gram.frame_upper, cosupport_norms, eps, tau));
  } catch (const std::invalid_argument&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

namespace {

struct TrialOutcome {
  bool success = false;
  bool converged = false;
  double error = 0.0;
};

TrialOutcome run_trial(const AnalysisOperator& op, const Vector& x, long m,
                       std::uint64_t trial_seed, const SolverOptions& solver) {
  const MeasurementInstance inst =
      gaussian_instance(x, static_cast<Eigen::Index>(m), 0.0, std::nullopt, trial_seed);
  const SolveResult res = solve_abp(op, inst, solver);
  TrialOutcome out;
  out.converged = res.converged;
  out.error = (res.x_hat - x).norm();
  out.success = recovery_success(res.x_hat, x);
  return out;
}

}  // namespace

ExperimentGrid run_fixed_signal(const AnalysisOperator& op, const GramInfo& gram,
                                const Vector& x, const std::vector<long>& m_values,
                                int trials, std::uint64_t seed,
                                const ExperimentOptions& opts) {
  const CosparsityProfile prof = analysis_profile(op, gram, x);
  const double M = sampling_rate(op, gram, x).M;
  const double krz = krz_for(op, gram, prof, opts.krz_eps, opts.krz_tau);

  const long cells = static_cast<long>(m_values.size());
  const long tasks = cells * trials;
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(tasks));
  parallel_for(tasks, opts.threads, [&](long t) {
    const long ci = t / trials;
    const long tr = t % trials;
    const std::uint64_t ts = Rng::derive(Rng::derive(seed, static_cast<std::uint64_t>(ci)),
                                         static_cast<std::uint64_t>(tr));
    outcomes[static_cast<std::size_t>(t)] = run_trial(op, x, m_values[static_cast<std::size_t>(ci)], ts, opts.solver);
  });

  ExperimentGrid grid;
  for (long ci = 0; ci < cells; ++ci) {
    ExperimentCell cell;
    cell.axis = 0.0;
    cell.m = m_values[static_cast<std::size_t>(ci)];
    cell.trials = trials;
    cell.seed_base = Rng::derive(seed, static_cast<std::uint64_t>(ci));
    cell.M_mean = M;
    cell.krz_mean = krz;
    double err_sum = 0.0;
    for (int tr = 0; tr < trials; ++tr) {
      const TrialOutcome& o = outcomes[static_cast<std::size_t>(ci * trials + tr)];
      cell.successes += o.success ? 1 : 0;
      err_sum += o.error;
      grid.solver_failures += o.converged ? 0 : 1;
    }
    cell.mean_error = trials > 0 ? err_sum / trials : 0.0;
    grid.records.push_back(cell);
  }
  grid.total_solves = static_cast<int>(tasks);
  return grid;
}

ExperimentGrid run_pw_const(const AnalysisOperator& op, const GramInfo& gram,
                            const std::vector<Eigen::Index>& s_tv_values,
                            const std::vector<long>& m_values, int outer_trials,
                            int inner_trials, std::uint64_t seed,
                            const ExperimentOptions& opts) {
  const Eigen::Index n = op.cols();
  const long n_s = static_cast<long>(s_tv_values.size());

  // Outer signals are cheap to draw; keep them up front so the solve tasks
  // can be scheduled in one flat batch.
  std::vector<std::vector<Vector>> signals(static_cast<std::size_t>(n_s));
  std::vector<double> M_mean(static_cast<std::size_t>(n_s), 0.0);
  std::vector<double> krz_mean(static_cast<std::size_t>(n_s), 0.0);
  for (long si = 0; si < n_s; ++si) {
    for (int ot = 0; ot < outer_trials; ++ot) {
      const std::uint64_t s = Rng::derive(Rng::derive(seed, 0x5054ULL + static_cast<std::uint64_t>(si)),
                                          static_cast<std::uint64_t>(ot));
      Vector x = random_piecewise_signal(n, s_tv_values[static_cast<std::size_t>(si)], s,
                                         opts.literal_kernel);
      const CosparsityProfile prof = analysis_profile(op, gram, x);
      M_mean[static_cast<std::size_t>(si)] += sampling_rate(op, gram, x).M;
      krz_mean[static_cast<std::size_t>(si)] += krz_for(op, gram, prof, opts.krz_eps, opts.krz_tau);
      signals[static_cast<std::size_t>(si)].push_back(std::move(x));
    }
    M_mean[static_cast<std::size_t>(si)] /= outer_trials;
    krz_mean[static_cast<std::size_t>(si)] /= outer_trials;
  }

  const long n_m = static_cast<long>(m_values.size());
  const long tasks = n_s * outer_trials * n_m * inner_trials;
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(tasks));
  parallel_for(tasks, opts.threads, [&](long t) {
    long rem = t;
    rem /= inner_trials;
    const long mi = rem % n_m; rem /= n_m;
    const long ot = rem % outer_trials; rem /= outer_trials;
    const long si = rem;
    const std::uint64_t ts = Rng::derive(seed, static_cast<std::uint64_t>(t) + 0x100000ULL);
    outcomes[static_cast<std::size_t>(t)] =
        run_trial(op, signals[static_cast<std::size_t>(si)][static_cast<std::size_t>(ot)],
                  m_values[static_cast<std::size_t>(mi)], ts, opts.solver);
  });

  ExperimentGrid grid;
  grid.total_solves = static_cast<int>(tasks);
  for (long si = 0; si < n_s; ++si) {
    for (long mi = 0; mi < n_m; ++mi) {
      ExperimentCell cell;
      cell.axis = static_cast<double>(s_tv_values[static_cast<std::size_t>(si)]);
      cell.m = m_values[static_cast<std::size_t>(mi)];
      cell.trials = outer_trials * inner_trials;
      cell.seed_base = Rng::derive(seed, 0x5054ULL + static_cast<std::uint64_t>(si));
      cell.M_mean = M_mean[static_cast<std::size_t>(si)];
      cell.krz_mean = krz_mean[static_cast<std::size_t>(si)];
      double err_sum = 0.0;
      for (long ot = 0; ot < outer_trials; ++ot)
        for (long it = 0; it < inner_trials; ++it) {
          const long t = ((si * outer_trials + ot) * n_m + mi) * inner_trials + it;
          const TrialOutcome& o = outcomes[static_cast<std::size_t>(t)];
          cell.successes += o.success ? 1 : 0;
          err_sum += o.error;
          grid.solver_failures += o.converged ? 0 : 1;
        }
      cell.mean_error = cell.trials > 0 ? err_sum / cell.trials : 0.0;
      grid.records.push_back(cell);
    }
  }
  return grid;
}

ExperimentGrid run_random_frames(Eigen::Index n, const std::vector<SLPair>& pairs,
                                 const std::vector<long>& m_values, int outer_trials,
                                 int inner_trials, std::uint64_t seed,
                                 const ExperimentOptions& opts) {
  ExperimentGrid grid;
  const long n_m = static_cast<long>(m_values.size());

  struct OuterDraw {
    AnalysisOperator op;
    Vector x;
    double M = 0.0;
    double krz = 0.0;
  };

  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    const SLPair pair = pairs[pi];
    const Eigen::Index N = pair.S + pair.L;
    const std::uint64_t pair_seed = Rng::derive(seed, 0x5246ULL + static_cast<std::uint64_t>(pi));

    std::vector<OuterDraw> draws;
    bool infeasible = false;
    for (int ot = 0; ot < outer_trials && !infeasible; ++ot) {
      const std::uint64_t s = Rng::derive(pair_seed, static_cast<std::uint64_t>(ot));
      OuterDraw d;
      d.op = build_random_tight(N, n, s);
      try {
        d.x = random_cosparse_signal(d.op, pair.S, Rng::derive(s, 1));
      } catch (const InfeasibleConfig&) {
        infeasible = true;
        break;
      }
      const GramInfo gram = gram_info(d.op);
      const CosparsityProfile prof = analysis_profile(d.op, gram, d.x);
      d.M = sampling_rate(d.op, gram, d.x).M;
      d.krz = krz_for(d.op, gram, prof, opts.krz_eps, opts.krz_tau);
      draws.push_back(std::move(d));
    }
    if (infeasible) {
      grid.infeasible_axis.push_back(static_cast<double>(pair.S));
      continue;
    }

    const long tasks = static_cast<long>(outer_trials) * n_m * inner_trials;
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(tasks));
    parallel_for(tasks, opts.threads, [&](long t) {
      long rem = t;
      rem /= inner_trials;
      const long mi = rem % n_m; rem /= n_m;
      const long ot = rem;
      const std::uint64_t ts = Rng::derive(pair_seed, static_cast<std::uint64_t>(t) + 0x200000ULL);
      const OuterDraw& d = draws[static_cast<std::size_t>(ot)];
      outcomes[static_cast<std::size_t>(t)] =
          run_trial(d.op, d.x, m_values[static_cast<std::size_t>(mi)], ts, opts.solver);
    });
    grid.total_solves += static_cast<int>(tasks);

    double M_mean = 0.0, krz_mean = 0.0;
    for (const OuterDraw& d : draws) {
      M_mean += d.M;
      krz_mean += d.krz;
    }
    M_mean /= draws.size();
    krz_mean /= draws.size();

    for (long mi = 0; mi < n_m; ++mi) {
      ExperimentCell cell;
      cell.axis = static_cast<double>(pair.S);
      cell.m = m_values[static_cast<std::size_t>(mi)];
      cell.trials = outer_trials * inner_trials;
      cell.seed_base = pair_seed;
      cell.M_mean = M_mean;
      cell.krz_mean = krz_mean;
      double err_sum = 0.0;
      for (long ot = 0; ot < outer_trials; ++ot)
        for (long it = 0; it < inner_trials; ++it) {
          const long t = (ot * n_m + mi) * inner_trials + it;
          const TrialOutcome& o = outcomes[static_cast<std::size_t>(t)];
          cell.successes += o.success ? 1 : 0;
          err_sum += o.error;
          grid.solver_failures += o.converged ? 0 : 1;
        }
      cell.mean_error = cell.trials > 0 ? err_sum / cell.trials : 0.0;
      grid.records.push_back(cell);
    }
  }
  return grid;
}

std::vector<std::pair<long, double>> success_curve(const ExperimentGrid& grid, double axis) {
  std::vector<std::pair<long, double>> curve;
  for (const ExperimentCell& c : grid.records)
    if (c.axis == axis && c.trials > 0)
      curve.emplace_back(c.m, static_cast<double>(c.successes) / c.trials);
  std::sort(curve.begin(), curve.end());
  return curve;
}

double crossing_50(const std::vector<std::pair<long, double>>& curve) {
  if (curve.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (curve.front().second >= 0.5) return static_cast<double>(curve.front().first);
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const auto [m0, r0] = curve[i];
    const auto [m1, r1] = curve[i + 1];
    if (r0 < 0.5 && r1 >= 0.5)
      return static_cast<double>(m0) + (0.5 - r0) / (r1 - r0) * static_cast<double>(m1 - m0);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double crossing_50(const ExperimentGrid& grid, double axis) {
  return crossing_50(success_curve(grid, axis));
}

}  // namespace anabp
