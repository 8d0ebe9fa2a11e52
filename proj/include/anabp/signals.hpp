#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "anabp/operators.hpp"

namespace anabp {

// Raised when a requested random construction has no solution (e.g. the
// cosupport rows of a general-position frame already have trivial kernel).
struct InfeasibleConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Donoho-Johnstone piecewise-constant test signal with 11 jumps, sampled at
// (j - 1/2)/n for j = 1..n.
Vector blocks_signal(Eigen::Index n);

// blocks with the section over t in [0.44, 0.65) replaced by a raised-cosine
// ramp joining the neighbouring levels; analysis-compressible rather than
// analysis-sparse.
Vector blocks_smooth_signal(Eigen::Index n);

// x_j = (-1)^{j-1} for j = 1..s_tv, zero afterwards.
Vector dense_jumps_signal(Eigen::Index n, Eigen::Index s_tv);

// Gaussian vector in the space of signals that are constant except across
// s_tv uniformly chosen jump positions. literal_kernel switches to the
// kernel of the *selected* difference rows instead of their complement.
Vector random_piecewise_signal(Eigen::Index n, Eigen::Index s_tv, std::uint64_t seed,
                               bool literal_kernel = false);

// Gaussian vector in ker of the rows outside a uniformly random support of
// size S; throws InfeasibleConfig when that kernel is trivial.
Vector random_cosparse_signal(const AnalysisOperator& op, Eigen::Index S,
                              std::uint64_t seed);

}  // namespace anabp
