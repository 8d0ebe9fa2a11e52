// Python bindings for the core operations: operator construction, sparsity
// profiles, sampling rates, basis-pursuit solves, and the statistical
// dimension oracle.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "anabp/approx.hpp"
#include "anabp/cosparsity.hpp"
#include "anabp/experiments.hpp"
#include "anabp/rate.hpp"
#include "anabp/signals.hpp"
#include "anabp/solver.hpp"
#include "anabp/statdim.hpp"

namespace py = pybind11;
using namespace anabp;

namespace {

AnalysisOperator build_by_kind(const std::string& kind, Eigen::Index n, int levels,
                               Eigen::Index N, std::uint64_t seed) {
  const auto k = kind_from_name(kind);
  if (!k) throw std::invalid_argument("unknown operator kind: " + kind);
  switch (*k) {
    case OperatorKind::identity: return make_identity(n);
    case OperatorKind::tv1: return build_tv1(n);
    case OperatorKind::tv2: return build_tv2(n);
    case OperatorKind::dwt_haar: return build_haar_dwt(n, levels);
    case OperatorKind::rdwt_haar: return build_haar_undecimated(n, levels, FrameVariant::primal);
    case OperatorKind::irdwt_haar: return build_haar_undecimated(n, levels, FrameVariant::dual);
    case OperatorKind::rdwt_haar_2d:
      return build_haar_undecimated_2d(n, levels, FrameVariant::primal);
    case OperatorKind::irdwt_haar_2d:
      return build_haar_undecimated_2d(n, levels, FrameVariant::dual);
    case OperatorKind::random_tight: return build_random_tight(N, n, seed);
    case OperatorKind::custom: break;
  }
  throw std::invalid_argument("custom operators: pass a matrix to AnalysisOperator");
}

}  // namespace

PYBIND11_MODULE(_anabp, m) {
  m.doc() = "l1-analysis recovery: operators, sampling rates, solvers";

  py::register_exception<InfeasibleConfig>(m, "InfeasibleConfigError");

  py::class_<AnalysisOperator>(m, "AnalysisOperator")
      .def(py::init([](Matrix mat) { return make_custom(std::move(mat)); }), py::arg("matrix"))
      .def_property_readonly("matrix",
                             [](const AnalysisOperator& op) { return op.matrix; })
      .def_property_readonly("kind",
                             [](const AnalysisOperator& op) { return kind_name(op.kind); })
      .def_readonly("levels", &AnalysisOperator::levels)
      .def_property_readonly("shape",
                             [](const AnalysisOperator& op) {
                               return py::make_tuple(op.rows(), op.cols());
                             })
      .def("__repr__", [](const AnalysisOperator& op) {
        return "<AnalysisOperator " + kind_name(op.kind) + " " + std::to_string(op.rows()) +
               "x" + std::to_string(op.cols()) + ">";
      });

  m.def("build_operator", &build_by_kind, py::arg("kind"), py::arg("n"),
        py::arg("levels") = 1, py::arg("N") = 0, py::arg("seed") = 1);

  py::class_<GramInfo>(m, "GramInfo")
      .def_readonly("gram", &GramInfo::gram)
      .def_readonly("row_norms", &GramInfo::row_norms)
      .def_readonly("frame_lower", &GramInfo::frame_lower)
      .def_readonly("frame_upper", &GramInfo::frame_upper);
  m.def("gram_info", &gram_info, py::arg("op"));

  py::class_<CosparsityProfile>(m, "CosparsityProfile")
      .def_readonly("support", &CosparsityProfile::support)
      .def_readonly("cosupport", &CosparsityProfile::cosupport)
      .def_readonly("sign", &CosparsityProfile::sign)
      .def_readonly("S", &CosparsityProfile::S)
      .def_readonly("L", &CosparsityProfile::L)
      .def_readonly("gen_sparsity", &CosparsityProfile::gen_sparsity)
      .def_readonly("gen_cosparsity", &CosparsityProfile::gen_cosparsity)
      .def_readonly("gen_cosparsity_diag", &CosparsityProfile::gen_cosparsity_diag);
  m.def("analysis_profile", &analysis_profile, py::arg("op"), py::arg("gram"), py::arg("x"),
        py::arg("eps_supp") = 1e-9);
  m.def("best_s_term_error", &best_s_term_error, py::arg("v"), py::arg("S"), py::arg("p") = 1);
  m.def("kr15_error_bound", &kr15_error_bound, py::arg("frame_lower"), py::arg("S"),
        py::arg("coeffs"));

  m.def("h_eval", &h_eval, py::arg("tau"));
  m.def("h_inverse", [](double rho) { return h_inverse(rho); }, py::arg("rho"));
  m.def("phi_eval", &phi_eval, py::arg("rho"));
  m.def("exact_recovery_m", &exact_recovery_m, py::arg("M"), py::arg("u"));

  py::enum_<Degeneracy>(m, "Degeneracy")
      .value("none", Degeneracy::none)
      .value("kernel_member", Degeneracy::kernel_member)
      .value("full_support", Degeneracy::full_support);

  py::class_<RateReport>(m, "RateReport")
      .def_readonly("M", &RateReport::M)
      .def_readonly("simplified", &RateReport::simplified)
      .def_readonly("degenerate", &RateReport::degenerate)
      .def("m_exact", &RateReport::m_exact, py::arg("u"));
  m.def("sampling_rate", &sampling_rate, py::arg("op"), py::arg("gram"), py::arg("x"),
        py::arg("eps_supp") = 1e-9);
  m.def("krz_bound_frame", &krz_bound_frame, py::arg("n"), py::arg("N"), py::arg("frame_upper"),
        py::arg("cosupport_norm_sum"), py::arg("eps"), py::arg("tau"));
  m.def("krz_bound_tv1", &krz_bound_tv1, py::arg("n"), py::arg("N"), py::arg("S"),
        py::arg("eps"), py::arg("tau"));

  py::class_<Subspace>(m, "Subspace")
      .def_property_readonly("basis", [](const Subspace& u) { return u.basis; })
      .def_property_readonly("dim", [](const Subspace& u) { return u.dim(); })
      .def_readonly("ambient_dim", &Subspace::ambient_dim);
  m.def("kernel_basis", &kernel_basis, py::arg("A"), py::arg("tol") = 1e-10);
  m.def("project", &project, py::arg("U"), py::arg("x"), py::arg("complement") = false);
  m.def("l1_ball_project", &l1_ball_project, py::arg("v"), py::arg("radius"));
  m.def("soft_threshold", &soft_threshold, py::arg("v"), py::arg("theta"));

  py::class_<MeasurementInstance>(m, "MeasurementInstance")
      .def(py::init([](Matrix A, Vector y, double eta) {
             MeasurementInstance inst;
             inst.A = std::move(A);
             inst.y = std::move(y);
             inst.eta = eta;
             return inst;
           }),
           py::arg("A"), py::arg("y"), py::arg("eta") = 0.0)
      .def_readonly("A", &MeasurementInstance::A)
      .def_readonly("y", &MeasurementInstance::y)
      .def_readonly("eta", &MeasurementInstance::eta)
      .def_readonly("seed", &MeasurementInstance::seed);
  m.def(
      "gaussian_instance",
      [](const Vector& x, Eigen::Index mm, double eta, std::uint64_t seed) {
        return gaussian_instance(x, mm, eta, std::nullopt, seed);
      },
      py::arg("x"), py::arg("m"), py::arg("eta") = 0.0, py::arg("seed") = 1);

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("max_iters", &SolverOptions::max_iters)
      .def_readwrite("tol_primal", &SolverOptions::tol_primal)
      .def_readwrite("tol_dual", &SolverOptions::tol_dual)
      .def_readwrite("penalty", &SolverOptions::penalty)
      .def_readwrite("over_relax", &SolverOptions::over_relax);
  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("x_hat", &SolveResult::x_hat)
      .def_readonly("iters", &SolveResult::iters)
      .def_readonly("converged", &SolveResult::converged);
  m.def("solve_abp", &solve_abp, py::arg("op"), py::arg("instance"),
        py::arg("options") = SolverOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("recovery_success", &recovery_success, py::arg("x_hat"), py::arg("x_star"));

  py::class_<StatDimEstimate>(m, "StatDimEstimate")
      .def_readonly("mean", &StatDimEstimate::mean)
      .def_readonly("std_error", &StatDimEstimate::std_error)
      .def_readonly("samples", &StatDimEstimate::samples)
      .def_readonly("failures", &StatDimEstimate::failures)
      .def_readonly("scale_t", &StatDimEstimate::scale_t);
  m.def("statistical_dimension", &statistical_dimension, py::arg("op"), py::arg("x"),
        py::arg("t") = 0.01, py::arg("k") = 200, py::arg("seed") = 0, py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "descent_program_value",
      [](const AnalysisOperator& op, const Vector& x, double t, const Vector& g) {
        return descent_program_value(op, x, t, g);
      },
      py::arg("op"), py::arg("x"), py::arg("t"), py::arg("g"),
      py::call_guard<py::gil_scoped_release>());
  m.def("verify_mean_width_sandwich", &verify_mean_width_sandwich, py::arg("estimate"),
        py::arg("M"));
  m.def("clipped_cov_bound", &clipped_cov_bound, py::arg("ip"), py::arg("beta1"),
        py::arg("beta2"));
  m.def(
      "clipped_cov_oracle",
      [](double rho, double b1, double b2, long samples, std::uint64_t seed) {
        const OracleEstimate est = clipped_cov_oracle_rho(rho, b1, b2, samples, seed);
        return py::make_tuple(est.mean, est.std_error);
      },
      py::arg("rho"), py::arg("beta1"), py::arg("beta2"), py::arg("samples") = 1000000,
      py::arg("seed") = 0, py::call_guard<py::gil_scoped_release>());

  py::class_<GreedyTrace>(m, "GreedyTrace")
      .def_readonly("selected_cosupport", &GreedyTrace::selected_cosupport)
      .def_readonly("final_U", &GreedyTrace::final_U)
      .def_readonly("reached_target", &GreedyTrace::reached_target);
  m.def("greedy_subspace", &greedy_subspace, py::arg("op"), py::arg("gram"), py::arg("x"),
        py::arg("S_target"), py::arg("eps") = -1.0,
        py::call_guard<py::gil_scoped_release>());
  m.def("surrogate_point", &surrogate_point, py::arg("op"), py::arg("x"), py::arg("U"));
  m.def("stable_bound",
        [](const AnalysisOperator& op, const GramInfo& g, const Vector& x, const Subspace& U,
           double R, double u, double eta, long mm) {
          const StableReport rep = stable_bound(op, g, x, U, R, u, eta, mm);
          py::dict d;
          d["x_bar"] = rep.x_bar;
          d["m0"] = rep.m0;
          d["error"] = rep.error ? py::cast(*rep.error) : py::none();
          return d;
        },
        py::arg("op"), py::arg("gram"), py::arg("x"), py::arg("U"), py::arg("R"),
        py::arg("u"), py::arg("eta"), py::arg("m"));
  m.def("approx_error_upper", &approx_error_upper, py::arg("op"), py::arg("x"), py::arg("U"));

  m.def("blocks_signal", &blocks_signal, py::arg("n"));
  m.def("blocks_smooth_signal", &blocks_smooth_signal, py::arg("n"));
  m.def("dense_jumps_signal", &dense_jumps_signal, py::arg("n"), py::arg("s_tv"));
  m.def("random_piecewise_signal", &random_piecewise_signal, py::arg("n"), py::arg("s_tv"),
        py::arg("seed"), py::arg("literal_kernel") = false);
  m.def("random_cosparse_signal", &random_cosparse_signal, py::arg("op"), py::arg("S"),
        py::arg("seed"));
}
