#include "anabp/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "anabp/rng.hpp"

namespace anabp {

namespace {

constexpr int kJumps = 11;
constexpr double kJumpPos[kJumps] = {0.1, 0.13, 0.15, 0.23, 0.25, 0.40,
                                     0.44, 0.65, 0.76, 0.78, 0.81};
constexpr double kJumpHeight[kJumps] = {4.0, -5.0, 3.0, -4.0, 5.0, -4.2,
                                        2.1, 4.3, -3.1, 2.1, -4.2};

// Steps realized as h * (1 + sign(t - t_j)) / 2, so a sample landing exactly
// on a jump carries the half level (t = 0.25 hits the grid whenever 4 | n).
// The reference coefficient counts depend on this convention.
double blocks_at(double t) {
  double v = 0.0;
  for (int j = 0; j < kJumps; ++j) {
    if (t > kJumpPos[j])
      v += kJumpHeight[j];
    else if (t == kJumpPos[j])
      v += 0.5 * kJumpHeight[j];
  }
  return v;
}

// Uniform random S-subset of {0, ..., n-1} by partial Fisher-Yates.
std::vector<Eigen::Index> random_subset(Eigen::Index n, Eigen::Index s, Rng& rng) {
  std::vector<Eigen::Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Eigen::Index{0});
  for (Eigen::Index i = 0; i < s; ++i) {
    const auto j = i + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(s));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

Vector blocks_signal(Eigen::Index n) {
  if (n < 2) throw std::invalid_argument("blocks_signal: n must be >= 2");
  // Sampled at t = j/n for j = 1..n, the grid of the original construction;
  // the reference coefficient counts are only reproduced on this grid.
  Vector x(n);
  for (Eigen::Index j = 0; j < n; ++j)
    x(j) = blocks_at(static_cast<double>(j + 1) / static_cast<double>(n));
  return x;
}

Vector blocks_smooth_signal(Eigen::Index n) {
  Vector x = blocks_signal(n);
  const double t0 = 0.44, t1 = 0.65;
  const double left = blocks_at(0.5 * (0.40 + 0.44));   // level just before t0
  const double right = blocks_at(0.5 * (0.65 + 0.76));  // level from t1 on
  for (Eigen::Index j = 0; j < n; ++j) {
    const double t = static_cast<double>(j + 1) / static_cast<double>(n);
    if (t >= t0 && t < t1)
      x(j) = left + (right - left) * 0.5 * (1.0 - std::cos(M_PI * (t - t0) / (t1 - t0)));
  }
  return x;
}

Vector dense_jumps_signal(Eigen::Index n, Eigen::Index s_tv) {
  if (n < 2 || s_tv < 0 || s_tv > n)
    throw std::invalid_argument("dense_jumps_signal: invalid parameters");
  Vector x = Vector::Zero(n);
  for (Eigen::Index j = 0; j < s_tv; ++j) x(j) = (j % 2 == 0) ? 1.0 : -1.0;
  return x;
}

Vector random_piecewise_signal(Eigen::Index n, Eigen::Index s_tv, std::uint64_t seed,
                               bool literal_kernel) {
  if (n < 2 || s_tv < 0 || s_tv > n - 1)
    throw std::invalid_argument("random_piecewise_signal: invalid parameters");
  Rng rng(Rng::derive(seed, 0x7077636fULL));
  const std::vector<Eigen::Index> jumps = random_subset(n - 1, s_tv, rng);

  Matrix B;
  if (!literal_kernel) {
    // ker of the unselected difference rows: piecewise-constant vectors with
    // breakpoints exactly at the selected positions; normalized indicator
    // blocks form an orthonormal basis of it.
    B = Matrix::Zero(n, s_tv + 1);
    Eigen::Index start = 0;
    for (Eigen::Index b = 0; b <= s_tv; ++b) {
      const Eigen::Index end = b < s_tv ? jumps[static_cast<std::size_t>(b)] + 1 : n;
      const double v = 1.0 / std::sqrt(static_cast<double>(end - start));
      for (Eigen::Index i = start; i < end; ++i) B(i, b) = v;
      start = end;
    }
  } else {
    Matrix rows(s_tv, n);
    for (Eigen::Index r = 0; r < s_tv; ++r) {
      rows.row(r).setZero();
      rows(r, jumps[static_cast<std::size_t>(r)]) = -1.0;
      rows(r, jumps[static_cast<std::size_t>(r)] + 1) = 1.0;
    }
    B = kernel_basis(rows).basis;
  }

  Vector c(B.cols());
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng.normal();
  return B * c;
}

Vector random_cosparse_signal(const AnalysisOperator& op, Eigen::Index S,
                              std::uint64_t seed) {
  const Eigen::Index N = op.rows();
  if (S < 0 || S > N) throw std::invalid_argument("random_cosparse_signal: S out of range");
  Rng rng(Rng::derive(seed, 0x636f7370ULL));
  const std::vector<Eigen::Index> support = random_subset(N, S, rng);
  std::vector<bool> in_support(static_cast<std::size_t>(N), false);
  for (Eigen::Index k : support) in_support[static_cast<std::size_t>(k)] = true;

  Matrix rows(N - S, op.cols());
  Eigen::Index r = 0;
  for (Eigen::Index k = 0; k < N; ++k)
    if (!in_support[static_cast<std::size_t>(k)]) rows.row(r++) = op.matrix.row(k);
  const Subspace ker = kernel_basis(rows);
  if (ker.dim() == 0)
    throw InfeasibleConfig("random_cosparse_signal: cosupport rows have trivial kernel");

  Vector c(ker.dim());
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng.normal();
  return ker.basis * c;
}

}  // namespace anabp
