#include "anabp/cosparsity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace anabp {

CosparsityProfile profile_from_coeffs(const Vector& coeffs, const GramInfo& gram,
                                      double eps_supp) {
  const Eigen::Index N = coeffs.size();
  CosparsityProfile prof;
  prof.sign = Vector::Zero(N);
  const double peak = coeffs.cwiseAbs().maxCoeff();
  const double thresh = eps_supp * peak;
  for (Eigen::Index k = 0; k < N; ++k) {
    if (peak > 0.0 && std::abs(coeffs(k)) > thresh) {
      prof.support.push_back(k);
      prof.sign(k) = coeffs(k) > 0.0 ? 1.0 : -1.0;
    } else {
      prof.cosupport.push_back(k);
    }
  }
  prof.S = static_cast<Eigen::Index>(prof.support.size());
  prof.L = static_cast<Eigen::Index>(prof.cosupport.size());

  const Matrix& G = gram.gram;
  double gen_s = 0.0;
  for (Eigen::Index a : prof.support) {
    double row = 0.0;
    for (Eigen::Index b : prof.support) row += prof.sign(b) * G(a, b);
    gen_s += prof.sign(a) * row;
  }
  prof.gen_sparsity = gen_s;

  double gen_l = 0.0;
  double gen_lbar = 0.0;
  for (Eigen::Index a : prof.cosupport) {
    const double ga = G(a, a);
    gen_lbar += std::sqrt(ga);
    for (Eigen::Index b : prof.cosupport)
      gen_l += G(a, b) * G(a, b) / std::sqrt(ga * G(b, b));
  }
  prof.gen_cosparsity = gen_l;
  prof.gen_cosparsity_diag = gen_lbar;
  return prof;
}

CosparsityProfile analysis_profile(const AnalysisOperator& op, const GramInfo& gram,
                                   const Vector& x, double eps_supp) {
  if (x.size() != op.cols())
    throw std::invalid_argument("analysis_profile: dimension mismatch");
  return profile_from_coeffs(op.matrix * x, gram, eps_supp);
}

double best_s_term_error(const Vector& v, Eigen::Index S, int p) {
  if (S < 0 || S > v.size())
    throw std::invalid_argument("best_s_term_error: S out of range");
  if (p != 1 && p != 2) throw std::invalid_argument("best_s_term_error: p must be 1 or 2");
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(v(a)) > std::abs(v(b));
  });
  double acc = 0.0;
  for (std::size_t r = static_cast<std::size_t>(S); r < idx.size(); ++r) {
    const double m = std::abs(v(idx[r]));
    acc += p == 1 ? m : m * m;
  }
  return p == 1 ? acc : std::sqrt(acc);
}

double kr15_error_bound(double frame_lower, Eigen::Index S, const Vector& coeffs) {
  if (frame_lower <= 0.0) throw std::invalid_argument("kr15_error_bound: a must be > 0");
  if (S < 1) throw std::invalid_argument("kr15_error_bound: S must be >= 1");
  return 2.0 * best_s_term_error(coeffs, S, 1) /
         std::sqrt(frame_lower * static_cast<double>(S));
}

}  // namespace anabp
