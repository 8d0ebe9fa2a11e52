#include "anabp/statdim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "anabp/rate.hpp"
#include "anabp/rng.hpp"

namespace anabp {

DescentProgram::DescentProgram(const AnalysisOperator& op, Vector x, double t)
    : psi_(op.matrix), t_(t) {
  if (!(t > 0.0)) throw std::invalid_argument("DescentProgram: t must be > 0");
  if (x.size() != psi_.cols()) throw std::invalid_argument("DescentProgram: dimension");
  coeffs0_ = psi_ * x;
  radius_ = coeffs0_.lpNorm<1>();
  Eigen::SelfAdjointEigenSolver<Matrix> es(psi_.transpose() * psi_);
  eigvec_ = es.eigenvectors();
  eigval_ = es.eigenvalues().cwiseMax(0.0);

  Eigen::Index nnz = 0;
  for (Eigen::Index i = 0; i < psi_.size(); ++i) nnz += psi_.data()[i] != 0.0 ? 1 : 0;
  use_sparse_ = nnz * 5 < psi_.size() * 2;  // density below 40%
  if (use_sparse_) psi_sparse_ = psi_.sparseView();
}

Vector DescentProgram::apply(const Vector& v) const {
  return use_sparse_ ? Vector(psi_sparse_ * v) : Vector(psi_ * v);
}

Vector DescentProgram::apply_adjoint(const Vector& v) const {
  return use_sparse_ ? Vector(psi_sparse_.transpose() * v) : Vector(psi_.transpose() * v);
}

namespace {

// min 1/2 sum d_i h_i^2 - r_i h_i subject to |h|_2 <= 1, via the secular
// equation sum (r_i / (d_i + mu))^2 = 1 for the ball multiplier mu >= 0.
Vector trust_region_solve(const Vector& d, const Vector& r) {
  const double rn = r.norm();
  if (rn == 0.0) return Vector::Zero(r.size());
  auto norm_at = [&](double mu) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      const double q = r(i) / (d(i) + mu);
      acc += q * q;
    }
    return acc;
  };
  bool interior = true;
  for (Eigen::Index i = 0; i < r.size(); ++i)
    if (d(i) <= 0.0 && r(i) != 0.0) interior = false;
  if (interior && norm_at(0.0) <= 1.0) {
    Vector h(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) h(i) = d(i) > 0.0 ? r(i) / d(i) : 0.0;
    return h;
  }
  double lo = 0.0, hi = rn;  // norm_at(rn) <= 1 always
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (norm_at(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  const double mu = 0.5 * (lo + hi);
  Vector h(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) h(i) = r(i) / (d(i) + mu);
  return h;
}

}  // namespace

double DescentProgram::value(const Vector& g_in, bool* converged, double tol,
                             int max_iters, double rho0, double* final_rho) const {
  const Eigen::Index N = psi_.rows();
  if (g_in.size() != psi_.cols()) throw std::invalid_argument("DescentProgram: g dimension");
  const double g_norm = g_in.norm();
  if (g_norm == 0.0) {
    if (converged) *converged = true;
    if (final_rho) *final_rho = rho0;
    return 0.0;
  }
  // The value is positively homogeneous in g; solving at unit norm keeps the
  // iteration scale-free.
  const Vector g = g_in / g_norm;

  Vector h = Vector::Zero(psi_.cols());
  Vector z = coeffs0_;
  Vector u = Vector::Zero(N);
  double rho = rho0;
  const double alpha = 1.7;

  bool ok = false;
  Vector d = rho * t_ * t_ * eigval_;
  for (int it = 0; it < max_iters; ++it) {
    // h-step: min -<g,h> + rho/2 |t Psi h + c - z + u|^2 over the unit ball.
    const Vector rhs = g + rho * t_ * apply_adjoint(z - u - coeffs0_);
    h = eigvec_ * trust_region_solve(d, eigvec_.transpose() * rhs);

    const Vector zh = t_ * apply(h) + coeffs0_;
    const Vector zh_rel = alpha * zh + (1.0 - alpha) * z;
    const Vector z_old = z;
    z = l1_ball_project(zh_rel + u, radius_);
    u += zh_rel - z;

    const double r_pri = (zh - z).norm();
    const double r_dual = rho * t_ * apply_adjoint(z - z_old).norm();
    const double scale = std::max({zh.norm(), z.norm(), 1.0});
    if (r_pri <= tol * scale && r_dual <= tol) {
      ok = true;
      break;
    }
    if ((it + 1) % 50 == 0) {
      if (r_pri > 10.0 * r_dual && rho < 1e8) {
        rho *= 2.0;
        u *= 0.5;
        d = rho * t_ * t_ * eigval_;
      } else if (r_dual > 10.0 * r_pri && rho > 1e-8) {
        rho *= 0.5;
        u *= 2.0;
        d = rho * t_ * t_ * eigval_;
      }
    }
  }
  if (converged) *converged = ok;
  if (final_rho) *final_rho = rho;
  return g_norm * g.dot(h);
}

double descent_program_value(const AnalysisOperator& op, const Vector& x, double t,
                             const Vector& g, bool* converged) {
  return DescentProgram(op, x, t).value(g, converged);
}

StatDimEstimate statistical_dimension(const AnalysisOperator& op, const Vector& x,
                                      double t, int k, std::uint64_t seed, int threads) {
  if (k < 1) throw std::invalid_argument("statistical_dimension: k must be >= 1");
  const DescentProgram program(op, x, t);
  const Eigen::Index n = op.cols();

  // One pilot draw calibrates the splitting penalty for all samples; the
  // result stays deterministic under any thread schedule.
  double rho0 = 1.0;
  {
    Rng rng(Rng::derive(seed, 0x70696c6fULL));
    Vector g(n);
    for (Eigen::Index j = 0; j < n; ++j) g(j) = rng.normal();
    program.value(g, nullptr, 1e-8, 20000, 1.0, &rho0);
  }

  std::vector<double> squared(static_cast<std::size_t>(k), 0.0);
  std::vector<char> good(static_cast<std::size_t>(k), 0);

  if (threads <= 0)
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min<int>(threads, k);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= k) return;
      Rng rng(Rng::derive(seed, 0x73746174ULL + static_cast<std::uint64_t>(i)));
      Vector g(n);
      for (Eigen::Index j = 0; j < n; ++j) g(j) = rng.normal();
      bool ok = false;
      const double v = program.value(g, &ok, 1e-8, 20000, rho0);
      squared[static_cast<std::size_t>(i)] = v * v;
      good[static_cast<std::size_t>(i)] = ok ? 1 : 0;
    }
  };
  std::vector<std::thread> pool;
  for (int tix = 1; tix < threads; ++tix) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  StatDimEstimate est;
  est.scale_t = t;
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    if (good[static_cast<std::size_t>(i)]) {
      sum += squared[static_cast<std::size_t>(i)];
      ++est.samples;
    } else {
      ++est.failures;
    }
  }
  if (est.samples == 0) return est;
  est.mean = sum / est.samples;
  double ss = 0.0;
  for (int i = 0; i < k; ++i)
    if (good[static_cast<std::size_t>(i)]) {
      const double d = squared[static_cast<std::size_t>(i)] - est.mean;
      ss += d * d;
    }
  if (est.samples > 1)
    est.std_error = std::sqrt(ss / (est.samples - 1)) / std::sqrt(static_cast<double>(est.samples));
  return est;
}

bool verify_mean_width_sandwich(const StatDimEstimate& estimate, double M) {
  return estimate.mean <= M + 1.0 + 3.0 * estimate.std_error;
}

double clip(double s, double t) {
  const double m = std::min(std::abs(s), t);
  return s >= 0.0 ? m : -m;
}

double clipped_cov_bound(double ip, double beta1, double beta2) {
  if (beta1 < 0.0 || beta2 < 0.0)
    throw std::invalid_argument("clipped_cov_bound: beta must be >= 0");
  const double bmin = std::min(beta1, beta2);
  const double bmax = std::max(beta1, beta2);
  if (bmax == 0.0) return 0.0;
  const double val = 1.0 - std::erfc(bmin * 0.70710678118654752440) -
                     h_eval(bmax) * bmin * bmax;
  return std::abs(ip) * val;
}

OracleEstimate clipped_cov_oracle_rho(double rho, double beta1, double beta2,
                                      long samples, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("clipped_cov_oracle: samples must be >= 2");
  rho = std::clamp(rho, -1.0, 1.0);
  const double mix = std::sqrt(std::max(0.0, 1.0 - rho * rho));

  const long chunk = 1 << 14;
  const long chunks = (samples + chunk - 1) / chunk;
  std::vector<double> part_sum(static_cast<std::size_t>(chunks), 0.0);
  std::vector<double> part_sq(static_cast<std::size_t>(chunks), 0.0);

  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::atomic<long> next{0};
  auto worker = [&]() {
    for (;;) {
      const long c = next.fetch_add(1);
      if (c >= chunks) return;
      Rng rng(Rng::derive(seed, 0x636c6970ULL + static_cast<std::uint64_t>(c)));
      const long lo = c * chunk;
      const long hi = std::min(samples, lo + chunk);
      double s = 0.0, sq = 0.0;
      for (long i = lo; i < hi; ++i) {
        const double g1 = rng.normal();
        const double g2 = rho * g1 + mix * rng.normal();
        const double v = clip(g1, beta1) * clip(g2, beta2);
        s += v;
        sq += v * v;
      }
      part_sum[static_cast<std::size_t>(c)] = s;
      part_sq[static_cast<std::size_t>(c)] = sq;
    }
  };
  std::vector<std::thread> pool;
  for (int tix = 1; tix < threads; ++tix) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  double sum = 0.0, sum_sq = 0.0;
  for (long c = 0; c < chunks; ++c) {
    sum += part_sum[static_cast<std::size_t>(c)];
    sum_sq += part_sq[static_cast<std::size_t>(c)];
  }
  OracleEstimate est;
  est.mean = sum / static_cast<double>(samples);
  const double var =
      std::max(0.0, (sum_sq - sum * sum / static_cast<double>(samples)) /
                        static_cast<double>(samples - 1));
  est.std_error = std::sqrt(var / static_cast<double>(samples));
  return est;
}

OracleEstimate clipped_cov_oracle(const Vector& v1, const Vector& v2, double beta1,
                                  double beta2, long samples, std::uint64_t seed) {
  if (v1.size() != v2.size())
    throw std::invalid_argument("clipped_cov_oracle: dimension mismatch");
  return clipped_cov_oracle_rho(v1.dot(v2), beta1, beta2, samples, seed);
}

}  // namespace anabp
