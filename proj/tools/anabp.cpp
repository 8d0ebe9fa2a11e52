// Command-line front end: operator construction, profiles, sampling rates,
// basis-pursuit solves, statistical-dimension estimates, and the phase
// transition experiment harnesses, emitting CSV/JSON reports.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "anabp/approx.hpp"
#include "anabp/experiments.hpp"
#include "anabp/rate.hpp"
#include "anabp/rng.hpp"
#include "anabp/serialize.hpp"
#include "anabp/signals.hpp"
#include "anabp/statdim.hpp"

using namespace anabp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitSolverFailures = 3;

struct OperatorArgs {
  std::string op_file;
  std::string kind = "irdwt_haar";
  long n = 256;
  long N = 0;
  int levels = 6;
  std::uint64_t seed = 1;
};

struct SignalArgs {
  std::string kind = "blocks";
  long stv = 11;
  long S = 0;
  std::uint64_t seed = 1;
};

void add_operator_flags(CLI::App* cmd, OperatorArgs& args) {
  cmd->add_option("--op", args.op_file, "load a serialized operator instead of building one");
  cmd->add_option("--kind", args.kind,
                  "identity|tv1|tv2|dwt_haar|rdwt_haar|irdwt_haar|rdwt_haar_2d|"
                  "irdwt_haar_2d|random_tight");
  cmd->add_option("--n", args.n, "signal dimension (side length for 2d kinds)");
  cmd->add_option("--N", args.N, "row count (random_tight only)");
  cmd->add_option("--levels", args.levels, "wavelet scales J");
  cmd->add_option("--op-seed", args.seed, "construction seed (random_tight)");
}

void add_signal_flags(CLI::App* cmd, SignalArgs& args) {
  cmd->add_option("--signal", args.kind,
                  "blocks|blocks_smooth|dense_jumps|random_piecewise|random_cosparse");
  cmd->add_option("--stv", args.stv, "jump count for dense_jumps/random_piecewise");
  cmd->add_option("--S", args.S, "support size for random_cosparse");
  cmd->add_option("--signal-seed", args.seed, "seed for the random signal kinds");
}

AnalysisOperator make_operator(const OperatorArgs& args) {
  if (!args.op_file.empty()) return load_operator(args.op_file);
  const auto kind = kind_from_name(args.kind);
  if (!kind) throw CLI::ValidationError("--kind", "unknown operator kind " + args.kind);
  switch (*kind) {
    case OperatorKind::identity: return make_identity(args.n);
    case OperatorKind::tv1: return build_tv1(args.n);
    case OperatorKind::tv2: return build_tv2(args.n);
    case OperatorKind::dwt_haar: return build_haar_dwt(args.n, args.levels);
    case OperatorKind::rdwt_haar:
      return build_haar_undecimated(args.n, args.levels, FrameVariant::primal);
    case OperatorKind::irdwt_haar:
      return build_haar_undecimated(args.n, args.levels, FrameVariant::dual);
    case OperatorKind::rdwt_haar_2d:
      return build_haar_undecimated_2d(args.n, args.levels, FrameVariant::primal);
    case OperatorKind::irdwt_haar_2d:
      return build_haar_undecimated_2d(args.n, args.levels, FrameVariant::dual);
    case OperatorKind::random_tight:
      return build_random_tight(args.N > 0 ? args.N : args.n, args.n, args.seed);
    case OperatorKind::custom: break;
  }
  throw CLI::ValidationError("--kind", "custom operators must be loaded via --op");
}

Vector make_signal(const SignalArgs& args, const AnalysisOperator& op) {
  const Eigen::Index n = op.cols();
  if (args.kind == "blocks") return blocks_signal(n);
  if (args.kind == "blocks_smooth") return blocks_smooth_signal(n);
  if (args.kind == "dense_jumps") return dense_jumps_signal(n, args.stv);
  if (args.kind == "random_piecewise") return random_piecewise_signal(n, args.stv, args.seed);
  if (args.kind == "random_cosparse") return random_cosparse_signal(op, args.S, args.seed);
  throw CLI::ValidationError("--signal", "unknown signal kind " + args.kind);
}

void write_output(const Json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream f(out, std::ios::binary);
    f << j.dump(2) << '\n';
    if (!f) throw std::runtime_error("cannot write " + out);
  }
}

std::vector<long> m_range(long lo, long hi, long step) {
  std::vector<long> ms;
  for (long m = lo; m <= hi; m += step) ms.push_back(m);
  if (ms.empty()) throw CLI::ValidationError("--m-min/--m-max", "empty measurement range");
  return ms;
}

int finish_with_grid(const ExperimentGrid& grid, const std::string& format,
                     const std::string& out, double max_fail_rate) {
  emit_report(grid, format, out);
  std::fprintf(stderr, "wrote %s (%zu cells, %d solves, %d non-converged)\n", out.c_str(),
               grid.records.size(), grid.total_solves, grid.solver_failures);
  if (grid.total_solves > 0 &&
      grid.solver_failures > max_fail_rate * grid.total_solves)
    return kExitSolverFailures;
  if (!grid.infeasible_axis.empty() && grid.records.empty()) return kExitInfeasible;
  return kExitOk;
}

bool check(bool ok, const std::string& label) {
  std::printf("%-58s %s\n", label.c_str(), ok ? "PASS" : "FAIL");
  return ok;
}

int run_verify(int threads) {
  bool all = true;
  {
    // Table-2 regression for blocks at n = 256
    const Vector x = blocks_signal(256);
    struct Row {
      const char* name;
      AnalysisOperator op;
      double S, L, genS, genL, genLbar, M;
    };
    std::vector<Row> rows;
    rows.push_back({"dwt(6)", build_haar_dwt(256, 6), 41, 215, 41, 215, 215, 114});
    rows.push_back({"rdwt(6)", build_haar_undecimated(256, 6, FrameVariant::primal), 906, 886,
                    28462, 5180, 886, 241});
    rows.push_back({"irdwt(6)", build_haar_undecimated(256, 6, FrameVariant::dual), 906, 886, 33,
                    197, 212, 100});
    rows.push_back({"irdwt(3)", build_haar_undecimated(256, 3, FrameVariant::dual), 306, 718, 39,
                    194, 209, 109});
    for (const Row& row : rows) {
      const GramInfo g = gram_info(row.op);
      const CosparsityProfile p = analysis_profile(row.op, g, x);
      const double M = sampling_rate(row.op, g, x).M;
      auto near = [](double a, double b) { return std::abs(a - b) <= 0.02 * std::abs(b); };
      const bool ok = p.S == static_cast<Eigen::Index>(row.S) &&
                      p.L == static_cast<Eigen::Index>(row.L) && near(p.gen_sparsity, row.genS) &&
                      near(p.gen_cosparsity, row.genL) &&
                      near(p.gen_cosparsity_diag, row.genLbar) && near(M, row.M);
      all &= check(ok, std::string("table-2 row ") + row.name);
    }
  }
  {
    const AnalysisOperator p = build_haar_undecimated(256, 6, FrameVariant::primal);
    const AnalysisOperator d = build_haar_undecimated(256, 6, FrameVariant::dual);
    const double residual =
        (d.matrix.transpose() * p.matrix - Matrix::Identity(256, 256)).cwiseAbs().maxCoeff();
    all &= check(residual <= 1e-10, "frame duality residual at (256, 6)");
  }
  all &= check(phi_eval(1e-8) >= 0.9999 && phi_eval(1e8) <= 1e-3, "phi boundary limits");
  {
    bool ok = true;
    for (double tau : {1e-3, 0.1, 1.0, 5.0, 20.0})
      ok &= std::abs(h_inverse(h_eval(tau)) - tau) < 1e-9 * std::max(1.0, tau);
    all &= check(ok, "h_inverse round trip");
  }
  {
    const Vector x = blocks_signal(256);
    bool ok = true;
    for (const auto& op : {build_haar_dwt(256, 6),
                           build_haar_undecimated(256, 6, FrameVariant::primal),
                           build_haar_undecimated(256, 6, FrameVariant::dual)}) {
      const GramInfo g = gram_info(op);
      const CosparsityProfile prof = analysis_profile(op, g, x);
      const double M = sampling_rate(op, g, x).M;
      const double krz = krz_for(op, g, prof, std::exp(-2.0), 0.0);
      ok &= std::isfinite(krz) && krz > M;
    }
    all &= check(ok, "krz baseline strictly above the sampling rate");
  }
  (void)threads;
  return all ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"l1-analysis basis pursuit: rates, recovery, phase transitions"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags remain valid after the subcommand name

  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 1;
  int trials = 20;
  int threads = 0;
  bool paper_scale = false;
  double max_fail_rate = 0.1;
  app.add_option("--seed", seed, "root seed")->capture_default_str();
  app.add_option("--out", out, "output path (stdout for query commands when empty)");
  app.add_option("--format", format, "csv|json")->capture_default_str();
  app.add_option("--trials", trials, "trials per grid cell")->capture_default_str();
  app.add_option("--threads", threads, "worker threads (0 = auto)");
  app.add_flag("--paper-scale", paper_scale, "use the paper's full grid sizes");
  app.add_option("--max-fail-rate", max_fail_rate,
                 "non-convergence rate above which the exit code is 3");

  // ---- build-op ----
  auto* c_build = app.add_subcommand("build-op", "construct and serialize an operator");
  OperatorArgs build_args;
  add_operator_flags(c_build, build_args);

  // ---- profile ----
  auto* c_profile = app.add_subcommand("profile", "generalized (co-)sparsity profile");
  OperatorArgs prof_op;
  SignalArgs prof_sig;
  double eps_supp = 1e-9;
  add_operator_flags(c_profile, prof_op);
  add_signal_flags(c_profile, prof_sig);
  c_profile->add_option("--eps-supp", eps_supp, "relative support threshold");

  // ---- rate ----
  auto* c_rate = app.add_subcommand("rate", "sampling-rate report for a signal");
  OperatorArgs rate_op;
  SignalArgs rate_sig;
  double rate_u = 3.0;
  bool with_krz = false;
  add_operator_flags(c_rate, rate_op);
  add_signal_flags(c_rate, rate_sig);
  c_rate->add_option("--u", rate_u, "confidence parameter for m_exact");
  c_rate->add_flag("--krz", with_krz, "include the baseline bound");

  // ---- solve ----
  auto* c_solve = app.add_subcommand("solve", "run basis pursuit on fresh instances");
  OperatorArgs solve_op;
  SignalArgs solve_sig;
  long solve_m = 100;
  double solve_eta = 0.0;
  add_operator_flags(c_solve, solve_op);
  add_signal_flags(c_solve, solve_sig);
  c_solve->add_option("--m", solve_m, "measurement count")->required();
  c_solve->add_option("--eta", solve_eta, "noise budget");

  // ---- statdim ----
  auto* c_statdim = app.add_subcommand("statdim", "Monte-Carlo statistical dimension");
  OperatorArgs sd_op;
  SignalArgs sd_sig;
  double sd_t = 0.01;
  int sd_k = 200;
  add_operator_flags(c_statdim, sd_op);
  add_signal_flags(c_statdim, sd_sig);
  c_statdim->add_option("--t", sd_t, "cone scale");
  c_statdim->add_option("--k", sd_k, "sample count");

  // ---- exp-fixed ----
  auto* c_fixed = app.add_subcommand("exp-fixed", "phase transition for a fixed signal");
  OperatorArgs fx_op;
  SignalArgs fx_sig;
  long fx_mlo = 10, fx_mhi = 0, fx_mstep = 5;
  add_operator_flags(c_fixed, fx_op);
  add_signal_flags(c_fixed, fx_sig);
  c_fixed->add_option("--m-min", fx_mlo);
  c_fixed->add_option("--m-max", fx_mhi, "default n");
  c_fixed->add_option("--m-step", fx_mstep);

  // ---- exp-pwconst ----
  auto* c_pw = app.add_subcommand("exp-pwconst", "phase transition over TV-sparsity");
  OperatorArgs pw_op;
  long pw_slo = 4, pw_shi = 0, pw_sstep = 8;
  long pw_mlo = 2, pw_mhi = 0, pw_mstep = 4;
  int pw_outer = 0, pw_inner = 0;
  bool pw_literal = false;
  add_operator_flags(c_pw, pw_op);
  c_pw->add_option("--stv-min", pw_slo);
  c_pw->add_option("--stv-max", pw_shi, "default n-1");
  c_pw->add_option("--stv-step", pw_sstep);
  c_pw->add_option("--m-min", pw_mlo);
  c_pw->add_option("--m-max", pw_mhi, "default n");
  c_pw->add_option("--m-step", pw_mstep);
  c_pw->add_option("--outer", pw_outer, "signal redraws per TV-sparsity (default 20/50)");
  c_pw->add_option("--inner", pw_inner, "instances per (signal, m) (default 5/10)");
  c_pw->add_flag("--literal-kernel", pw_literal,
                 "use the kernel of the selected rows themselves");

  // ---- exp-frames ----
  auto* c_frames = app.add_subcommand("exp-frames", "phase transition for random frames");
  long fr_n = 50;
  std::string fr_pairs = "15:45,21:39,27:33,33:27,39:21,45:15";
  long fr_mlo = 2, fr_mhi = 0, fr_mstep = 2;
  int fr_outer = 0, fr_inner = 0;
  c_frames->add_option("--n", fr_n, "ambient dimension");
  c_frames->add_option("--pairs", fr_pairs, "comma list of S:L pairs");
  c_frames->add_option("--m-min", fr_mlo);
  c_frames->add_option("--m-max", fr_mhi, "default n");
  c_frames->add_option("--m-step", fr_mstep);
  c_frames->add_option("--outer", fr_outer, "frame redraws per pair (default 3/5)");
  c_frames->add_option("--inner", fr_inner, "instances per (frame, m) (default 5/10)");

  // ---- exp-compress ----
  auto* c_comp = app.add_subcommand("exp-compress", "compressibility sweep");
  OperatorArgs cp_op;
  SignalArgs cp_sig;
  cp_sig.kind = "blocks_smooth";
  std::string cp_provider = "greedy";
  long cp_mlo = 100, cp_mhi = 160, cp_mstep = 5, cp_sstep = 10;
  add_operator_flags(c_comp, cp_op);
  add_signal_flags(c_comp, cp_sig);
  c_comp->add_option("--provider", cp_provider, "greedy|largest");
  c_comp->add_option("--m-min", cp_mlo);
  c_comp->add_option("--m-max", cp_mhi);
  c_comp->add_option("--m-step", cp_mstep);
  c_comp->add_option("--s-step", cp_sstep, "sparsity decrement of the search");

  // ---- verify ----
  auto* c_verify = app.add_subcommand("verify", "quick deterministic self-checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_build->parsed()) {
      const AnalysisOperator op = make_operator(build_args);
      if (out.empty()) throw CLI::ValidationError("--out", "build-op requires --out");
      save_operator(op, out);
      std::fprintf(stderr, "wrote %s (%ld x %ld)\n", out.c_str(),
                   static_cast<long>(op.rows()), static_cast<long>(op.cols()));
      return kExitOk;
    }
    if (c_profile->parsed()) {
      const AnalysisOperator op = make_operator(prof_op);
      const GramInfo g = gram_info(op);
      const Vector x = make_signal(prof_sig, op);
      write_output(profile_to_json(analysis_profile(op, g, x, eps_supp)), out);
      return kExitOk;
    }
    if (c_rate->parsed()) {
      const AnalysisOperator op = make_operator(rate_op);
      const GramInfo g = gram_info(op);
      const Vector x = make_signal(rate_sig, op);
      RateReport report = sampling_rate(op, g, x);
      if (with_krz && report.degenerate == Degeneracy::none) {
        const CosparsityProfile p = analysis_profile(op, g, x);
        const double krz = krz_for(op, g, p, std::exp(-2.0), 0.0);
        if (std::isfinite(krz)) report.krz = krz;
      }
      Json j = rate_to_json(report);
      j["m_exact"] = report.degenerate == Degeneracy::kernel_member
                         ? static_cast<long>(report.M)
                         : report.m_exact(rate_u);
      j["u"] = rate_u;
      j["probability"] = exact_recovery_probability(rate_u);
      write_output(j, out);
      return kExitOk;
    }
    if (c_solve->parsed()) {
      const AnalysisOperator op = make_operator(solve_op);
      const Vector x = make_signal(solve_sig, op);
      Json results = Json::array();
      int failures = 0;
      for (int t = 0; t < trials; ++t) {
        const MeasurementInstance inst = gaussian_instance(
            x, solve_m, solve_eta, std::nullopt, Rng::derive(seed, static_cast<std::uint64_t>(t)));
        const SolveResult res = solve_abp(op, inst);
        failures += res.converged ? 0 : 1;
        Json r;
        r["trial"] = t;
        r["error"] = (res.x_hat - x).norm();
        r["success"] = res.converged && recovery_success(res.x_hat, x);
        r["iters"] = res.iters;
        r["converged"] = res.converged;
        results.push_back(r);
      }
      Json j;
      j["m"] = solve_m;
      j["eta"] = solve_eta;
      j["results"] = results;
      write_output(j, out);
      return failures > max_fail_rate * trials ? kExitSolverFailures : kExitOk;
    }
    if (c_statdim->parsed()) {
      const AnalysisOperator op = make_operator(sd_op);
      const Vector x = make_signal(sd_sig, op);
      const StatDimEstimate est = statistical_dimension(op, x, sd_t, sd_k, seed, threads);
      write_output(estimate_to_json(est), out);
      return est.failures > max_fail_rate * sd_k ? kExitSolverFailures : kExitOk;
    }

    ExperimentOptions opts;
    opts.threads = threads;

    if (c_fixed->parsed()) {
      const AnalysisOperator op = make_operator(fx_op);
      const GramInfo g = gram_info(op);
      const Vector x = make_signal(fx_sig, op);
      if (fx_mhi <= 0) fx_mhi = op.cols();
      const int t = paper_scale ? 50 : trials;
      const ExperimentGrid grid =
          run_fixed_signal(op, g, x, m_range(fx_mlo, fx_mhi, paper_scale ? 1 : fx_mstep), t,
                           seed, opts);
      return finish_with_grid(grid, format, out.empty() ? "exp-fixed.csv" : out, max_fail_rate);
    }
    if (c_pw->parsed()) {
      const AnalysisOperator op = make_operator(pw_op);
      const GramInfo g = gram_info(op);
      const Eigen::Index n = op.cols();
      if (pw_shi <= 0) pw_shi = n - 1;
      if (pw_mhi <= 0) pw_mhi = n;
      opts.literal_kernel = pw_literal;
      std::vector<Eigen::Index> stv;
      for (long s = pw_slo; s <= pw_shi; s += paper_scale ? 1 : pw_sstep) stv.push_back(s);
      const int outer = pw_outer > 0 ? pw_outer : (paper_scale ? 50 : 20);
      const int inner = pw_inner > 0 ? pw_inner : (paper_scale ? 10 : 5);
      const ExperimentGrid grid =
          run_pw_const(op, g, stv, m_range(pw_mlo, pw_mhi, paper_scale ? 1 : pw_mstep), outer,
                       inner, seed, opts);
      return finish_with_grid(grid, format, out.empty() ? "exp-pwconst.csv" : out, max_fail_rate);
    }
    if (c_frames->parsed()) {
      std::vector<SLPair> pairs;
      std::stringstream ss(fr_pairs);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos)
          throw CLI::ValidationError("--pairs", "expected S:L entries");
        pairs.push_back(
            {std::stol(tok.substr(0, colon)), std::stol(tok.substr(colon + 1))});
      }
      if (fr_mhi <= 0) fr_mhi = fr_n;
      const int outer = fr_outer > 0 ? fr_outer : (paper_scale ? 5 : 3);
      const int inner = fr_inner > 0 ? fr_inner : (paper_scale ? 10 : 5);
      const ExperimentGrid grid =
          run_random_frames(fr_n, pairs, m_range(fr_mlo, fr_mhi, paper_scale ? 1 : fr_mstep),
                            outer, inner, seed, opts);
      return finish_with_grid(grid, format, out.empty() ? "exp-frames.csv" : out, max_fail_rate);
    }
    if (c_comp->parsed()) {
      const AnalysisOperator op = make_operator(cp_op);
      const GramInfo g = gram_info(op);
      const Vector x = make_signal(cp_sig, op);
      const Eigen::Index S_init = analysis_profile(op, g, x).S;
      const SubspaceProvider provider = cp_provider == "largest"
                                            ? largest_coeff_provider(op, x)
                                            : greedy_provider(op, g, x);
      std::vector<long> ms;
      for (long m = cp_mlo; m <= cp_mhi; m += cp_mstep) ms.push_back(m);
      const auto points = compressible_sweep(op, g, x, ms, provider, S_init, cp_sstep);
      Json j;
      j["provider"] = cp_provider;
      j["S_init"] = S_init;
      j["points"] = sweep_to_json(points);
      write_output(j, out);
      return kExitOk;
    }
    if (c_verify->parsed()) return run_verify(threads);
  } catch (const InfeasibleConfig& e) {
    std::fprintf(stderr, "infeasible configuration: %s\n", e.what());
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitOk;
}
