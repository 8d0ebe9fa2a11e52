#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "anabp/linalg.hpp"

namespace anabp {

enum class OperatorKind : std::uint32_t {
  dwt_haar = 0,
  rdwt_haar = 1,
  irdwt_haar = 2,
  rdwt_haar_2d = 3,
  irdwt_haar_2d = 4,
  tv1 = 5,
  tv2 = 6,
  random_tight = 7,
  identity = 8,
  custom = 9,
};

std::string kind_name(OperatorKind k);
std::optional<OperatorKind> kind_from_name(const std::string& name);

// Analysis operator Psi in R^{N x n}: rows are the analysis vectors; no row
// may be zero. `levels` holds the wavelet scale count J (0 otherwise).
struct AnalysisOperator {
  Matrix matrix;
  OperatorKind kind = OperatorKind::custom;
  int levels = 0;
  std::optional<std::uint64_t> seed;

  Eigen::Index rows() const { return matrix.rows(); }  // N
  Eigen::Index cols() const { return matrix.cols(); }  // n
};

// Gram matrix G = Psi Psi^T together with row norms sqrt(g_kk) and the frame
// bounds (a, b) = extreme eigenvalues of Psi^T Psi.
struct GramInfo {
  Matrix gram;
  Vector row_norms;
  double frame_lower = 0.0;
  double frame_upper = 0.0;
};

AnalysisOperator make_identity(Eigen::Index n);
AnalysisOperator make_custom(Matrix m);

// Forward differences with von Neumann boundary: (n-1) x n, row k = e_{k+1} - e_k.
AnalysisOperator build_tv1(Eigen::Index n);

// 2D anisotropic total variation [tv1 (x) I ; I (x) tv1] on column-major
// vectorized nxn images, 2*(n-1)*n rows.
AnalysisOperator build_tv2(Eigen::Index n_side);

// Orthonormal decimated Haar transform, n a power of two, 1 <= J <= log2(n).
// Rows: detail levels 1..J (fine to coarse), then the approximation block.
AnalysisOperator build_haar_dwt(Eigen::Index n, int levels);

enum class FrameVariant { primal, dual };

// Undecimated (a trous) Haar frame with periodic shifts, N = (J+1)*n.
// primal: every row unit norm. dual: detail rows at level j scaled by 2^-j,
// approximation rows by 2^-J, so that dual^T * primal = I_n.
AnalysisOperator build_haar_undecimated(Eigen::Index n, int levels, FrameVariant variant);

// Separable 2D a trous Haar frame: 3 detail subbands per scale plus the
// scale-J approximation, N = (3J+1)*n^2; dual subband weights 4^-j / 4^-J.
AnalysisOperator build_haar_undecimated_2d(Eigen::Index n_side, int levels, FrameVariant variant);

// Tight random frame from the SVD of a seeded Gaussian matrix: singular
// values are replaced by ones, so Psi^T Psi = I_n when N >= n (and
// Psi Psi^T = I_N when N < n, in which case the rows do not form a frame).
AnalysisOperator build_random_tight(Eigen::Index N, Eigen::Index n, std::uint64_t seed);

GramInfo gram_info(const AnalysisOperator& op);

}  // namespace anabp
