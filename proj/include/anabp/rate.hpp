#pragma once

#include <optional>

#include "anabp/cosparsity.hpp"
#include "anabp/linalg.hpp"
#include "anabp/operators.hpp"

namespace anabp {

// Scalar kernel tau -> sqrt(2/pi) e^{-tau^2/2}/tau + erf(tau/sqrt(2)) - 1,
// strictly decreasing from +inf to 0 on (0, inf).
double h_eval(double tau);

// Inverse of h by bisection on [1e-12, 40]; requests outside the covered
// range return the bracket endpoint and set *clamped when provided.
double h_inverse(double rho, bool* clamped = nullptr);

// Phi(rho) = erf(h^{-1}(rho)/sqrt(2)), strictly decreasing from 1 to 0.
double phi_eval(double rho);

enum class Degeneracy { none, kernel_member, full_support };

struct RateReport {
  double M = 0.0;
  double simplified = std::numeric_limits<double>::infinity();
  Degeneracy degenerate = Degeneracy::none;
  std::optional<double> krz;

  // Theorem-2.5 threshold: smallest integer m > (sqrt(M) + u)^2 + 1, valid
  // with probability at least 1 - e^{-u^2/2}.
  long m_exact(double u) const;
};

// Smallest integer m strictly greater than (sqrt(M) + u)^2 + 1.
long exact_recovery_m(double M, double u);
double exact_recovery_probability(double u);

// M(Psi, x) = n - (Lbar^2 / L) * Phi(genS / genL) when the cosupport is
// nonempty, n otherwise. x in ker Psi reports dim(ker Psi) instead, tagged
// kernel_member; a full support is tagged full_support.
RateReport sampling_rate(const AnalysisOperator& op, const GramInfo& gram,
                         const Vector& x, double eps_supp = 1e-9);

// Same from a precomputed profile (kernel-membership handled by caller).
double sampling_rate_from_profile(const CosparsityProfile& prof, Eigen::Index n);

// Closed-form relaxation of the sampling-rate function: the minimum of the
// two bounding branches; requires gen_sparsity > 0 and a nonempty cosupport.
double simplified_rate(const CosparsityProfile& prof, Eigen::Index n);

// Smallest integer m with m^2/(m+1) >= rhs of the respective baseline bound.
long krz_bound_frame(Eigen::Index n, Eigen::Index N, double frame_upper,
                     double cosupport_norm_sum, double eps, double tau);
long krz_bound_tv1(Eigen::Index n, Eigen::Index N, Eigen::Index S, double eps, double tau);

struct StableReport {
  Vector x_bar;
  double m0 = 0.0;
  std::optional<double> error;  // empty = insufficient m
};

// Surrogate-based stability bound in the Gaussian case (C = kappa = 1):
// x_bar rescales the projection, m0 follows the squared-bracket threshold,
// and the error is max{R |x - x_bar|, 2 eta / (sqrt(m-1) - sqrt(m0-1))}.
// R may be +inf with the conventions (R+1)/R = 1 and R * 0 = 0.
StableReport stable_bound(const AnalysisOperator& op, const GramInfo& gram,
                          const Vector& x, const Subspace& U, double R, double u,
                          double eta, long m);

// |P_U x| / |Psi P_U x|_1 * |Psi P_{U_perp} x|_1 + |P_{U_perp} x|, an upper
// bound on the distance between x and its rescaled projection.
double approx_error_upper(const AnalysisOperator& op, const Vector& x, const Subspace& U);

}  // namespace anabp
