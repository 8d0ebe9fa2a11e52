#include "anabp/rate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace anabp {

namespace {
constexpr double kSqrt2OverPi = 0.79788456080286535588;
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kBracketLo = 1e-12;
constexpr double kBracketHi = 40.0;
}  // namespace

double h_eval(double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("h_eval: tau must be > 0");
  // erf(t/sqrt2) - 1 written through erfc to keep relative accuracy for
  // large tau, where the two terms nearly cancel.
  return kSqrt2OverPi * std::exp(-0.5 * tau * tau) / tau - std::erfc(tau * kInvSqrt2);
}

double h_inverse(double rho, bool* clamped) {
  if (!(rho > 0.0)) throw std::invalid_argument("h_inverse: rho must be > 0");
  if (clamped) *clamped = false;
  double lo = kBracketLo, hi = kBracketHi;
  if (rho >= h_eval(lo)) {
    if (clamped) *clamped = true;
    return lo;
  }
  const double h_hi = h_eval(hi);
  if (rho <= h_hi) {
    if (clamped) *clamped = true;
    return hi;
  }
  // Geometric bisection: h spans ~25 orders of magnitude over the bracket,
  // so the midpoint is taken in log space.
  for (int it = 0; it < 300 && hi - lo > 4e-16 * lo; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (h_eval(mid) > rho)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double phi_eval(double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("phi_eval: rho must be > 0");
  return 1.0 - std::erfc(h_inverse(rho) * kInvSqrt2);
}

long exact_recovery_m(double M, double u) {
  if (M < 0.0) throw std::invalid_argument("exact_recovery_m: M must be >= 0");
  if (!(u > 0.0)) throw std::invalid_argument("exact_recovery_m: u must be > 0");
  const double bound = (std::sqrt(M) + u) * (std::sqrt(M) + u) + 1.0;
  return static_cast<long>(std::floor(bound)) + 1;
}

double exact_recovery_probability(double u) { return 1.0 - std::exp(-0.5 * u * u); }

long RateReport::m_exact(double u) const { return exact_recovery_m(M, u); }

double sampling_rate_from_profile(const CosparsityProfile& prof, Eigen::Index n) {
  if (prof.L == 0) return static_cast<double>(n);
  const double lbar = prof.gen_cosparsity_diag;
  return static_cast<double>(n) -
         (lbar * lbar / prof.gen_cosparsity) * phi_eval(prof.gen_sparsity / prof.gen_cosparsity);
}

RateReport sampling_rate(const AnalysisOperator& op, const GramInfo& gram,
                         const Vector& x, double eps_supp) {
  RateReport report;
  const Eigen::Index n = op.cols();
  const Vector coeffs = op.matrix * x;
  if (coeffs.cwiseAbs().maxCoeff() == 0.0) {
    report.degenerate = Degeneracy::kernel_member;
    report.M = static_cast<double>(kernel_basis(op.matrix).dim());
    return report;
  }
  const CosparsityProfile prof = profile_from_coeffs(coeffs, gram, eps_supp);
  if (prof.L == 0) {
    report.degenerate = Degeneracy::full_support;
    report.M = static_cast<double>(n);
    return report;
  }
  report.M = sampling_rate_from_profile(prof, n);
  report.simplified = simplified_rate(prof, n);
  return report;
}

double simplified_rate(const CosparsityProfile& prof, Eigen::Index n) {
  if (!(prof.gen_sparsity > 0.0) || prof.cosupport.empty())
    throw std::invalid_argument("simplified_rate: degenerate profile");
  const double S = prof.gen_sparsity;
  const double L = prof.gen_cosparsity;
  const double lbar = prof.gen_cosparsity_diag;
  const double nd = static_cast<double>(n);
  const double left = nd - lbar * lbar / L +
                      (lbar / L) * (lbar / L) * (2.0 * S * std::log((S + lbar) / S) + S);
  const double right = nd - (2.0 / M_PI) * lbar * lbar / (S + lbar);
  return std::min(left, right);
}

namespace {

long smallest_m_for(double rhs) {
  // m^2/(m+1) >= rhs  <=>  m >= (rhs + sqrt(rhs^2 + 4 rhs)) / 2
  const double root = 0.5 * (rhs + std::sqrt(rhs * rhs + 4.0 * rhs));
  long m = static_cast<long>(std::ceil(root));
  if (m < 1) m = 1;
  while (static_cast<double>(m) * m / (m + 1.0) < rhs) ++m;
  while (m > 1 && static_cast<double>(m - 1) * (m - 1) / static_cast<double>(m) >= rhs) --m;
  return m;
}

}  // namespace

long krz_bound_frame(Eigen::Index n, Eigen::Index N, double frame_upper,
                     double cosupport_norm_sum, double eps, double tau) {
  if (!(frame_upper > 0.0) || !(eps > 0.0) || eps >= 1.0 || tau < 0.0 || N < 1)
    throw std::invalid_argument("krz_bound_frame: invalid parameters");
  const double inner = static_cast<double>(n) -
                       2.0 * cosupport_norm_sum * cosupport_norm_sum /
                           (M_PI * frame_upper * static_cast<double>(N));
  if (inner < 0.0) throw std::invalid_argument("krz_bound_frame: negative inner square root");
  const double rhs_root = std::sqrt(inner) + std::sqrt(2.0 * std::log(1.0 / eps) + tau);
  return smallest_m_for(rhs_root * rhs_root);
}

long krz_bound_tv1(Eigen::Index n, Eigen::Index N, Eigen::Index S, double eps, double tau) {
  if (!(eps > 0.0) || eps >= 1.0 || tau < 0.0 || N < 1)
    throw std::invalid_argument("krz_bound_tv1: invalid parameters");
  const double frac = 1.0 - static_cast<double>(S + 1) / static_cast<double>(N);
  const double inner = static_cast<double>(n) * (1.0 - frac * frac / M_PI);
  if (inner < 0.0) throw std::invalid_argument("krz_bound_tv1: negative inner square root");
  const double rhs_root = std::sqrt(inner) + std::sqrt(2.0 * std::log(1.0 / eps) + tau);
  return smallest_m_for(rhs_root * rhs_root);
}

StableReport stable_bound(const AnalysisOperator& op, const GramInfo& gram,
                          const Vector& x, const Subspace& U, double R, double u,
                          double eta, long m) {
  const Vector pux = project(U, x);
  const double pux_l1 = (op.matrix * pux).lpNorm<1>();
  if (pux_l1 == 0.0)
    throw std::invalid_argument("stable_bound: Psi P_U x vanishes");

  StableReport report;
  report.x_bar = ((op.matrix * x).lpNorm<1>() / pux_l1) * pux;
  const double M_bar = sampling_rate(op, gram, report.x_bar).M;
  const double oversampling = std::isinf(R) ? 1.0 : (R + 1.0) / R;
  const double bracket = oversampling * (std::sqrt(M_bar) + 1.0) + u;
  report.m0 = bracket * bracket + 1.0;
  if (static_cast<double>(m) <= report.m0) return report;  // insufficient m

  const double dist = (x - report.x_bar).norm();
  const double approx_term = (std::isinf(R) && dist == 0.0) ? 0.0 : R * dist;
  const double noise_term =
      2.0 * eta / (std::sqrt(static_cast<double>(m) - 1.0) - std::sqrt(report.m0 - 1.0));
  report.error = std::max(approx_term, noise_term);
  return report;
}

double approx_error_upper(const AnalysisOperator& op, const Vector& x, const Subspace& U) {
  const Vector pux = project(U, x);
  const Vector pux_perp = x - pux;
  const double denom = (op.matrix * pux).lpNorm<1>();
  if (denom == 0.0)
    throw std::invalid_argument("approx_error_upper: Psi P_U x vanishes");
  return pux.norm() / denom * (op.matrix * pux_perp).lpNorm<1>() + pux_perp.norm();
}

}  // namespace anabp
