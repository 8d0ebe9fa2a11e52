#pragma once

#include <vector>

#include "anabp/operators.hpp"

namespace anabp {

// Analysis support/cosupport of a vector together with the three generalized
// (co-)sparsity parameters:
//   gen_sparsity       = sum_{k,k' in S} sigma_k sigma_k' g_{kk'}  (= |Psi^T sigma|_2^2)
//   gen_cosparsity     = sum_{k,k' in S^c} g_{kk'}^2 / sqrt(g_kk g_k'k')
//   gen_cosparsity_diag= sum_{k in S^c} sqrt(g_kk)
// For an orthonormal operator these reduce to S, n-S, n-S.
struct CosparsityProfile {
  std::vector<Eigen::Index> support;
  std::vector<Eigen::Index> cosupport;
  Vector sign;
  Eigen::Index S = 0;
  Eigen::Index L = 0;
  double gen_sparsity = 0.0;
  double gen_cosparsity = 0.0;
  double gen_cosparsity_diag = 0.0;
};

// Coefficient k joins the cosupport iff |<psi_k, x>| <= eps_supp * max_k' |<psi_k', x>|.
// x = 0 yields an all-zero sign vector with gen_sparsity = 0.
CosparsityProfile analysis_profile(const AnalysisOperator& op, const GramInfo& gram,
                                   const Vector& x, double eps_supp = 1e-9);

// Same computation given precomputed coefficients Psi*x.
CosparsityProfile profile_from_coeffs(const Vector& coeffs, const GramInfo& gram,
                                      double eps_supp = 1e-9);

// lp norm (p in {1,2}) of v after zeroing its S largest-magnitude entries;
// ties keep the lower index first.
double best_s_term_error(const Vector& v, Eigen::Index S, int p);

// 2 * sigma_S(coeffs)_1 / sqrt(a * S); requires a > 0 and S >= 1.
double kr15_error_bound(double frame_lower, Eigen::Index S, const Vector& coeffs);

}  // namespace anabp
