#include "anabp/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "anabp/rng.hpp"

namespace anabp {

std::string kind_name(OperatorKind k) {
  switch (k) {
    case OperatorKind::dwt_haar: return "dwt_haar";
    case OperatorKind::rdwt_haar: return "rdwt_haar";
    case OperatorKind::irdwt_haar: return "irdwt_haar";
    case OperatorKind::rdwt_haar_2d: return "rdwt_haar_2d";
    case OperatorKind::irdwt_haar_2d: return "irdwt_haar_2d";
    case OperatorKind::tv1: return "tv1";
    case OperatorKind::tv2: return "tv2";
    case OperatorKind::random_tight: return "random_tight";
    case OperatorKind::identity: return "identity";
    case OperatorKind::custom: return "custom";
  }
  return "custom";
}

std::optional<OperatorKind> kind_from_name(const std::string& name) {
  static const std::unordered_map<std::string, OperatorKind> table = {
      {"dwt_haar", OperatorKind::dwt_haar},
      {"rdwt_haar", OperatorKind::rdwt_haar},
      {"irdwt_haar", OperatorKind::irdwt_haar},
      {"rdwt_haar_2d", OperatorKind::rdwt_haar_2d},
      {"irdwt_haar_2d", OperatorKind::irdwt_haar_2d},
      {"tv1", OperatorKind::tv1},
      {"tv2", OperatorKind::tv2},
      {"random_tight", OperatorKind::random_tight},
      {"identity", OperatorKind::identity},
      {"custom", OperatorKind::custom},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

AnalysisOperator make_identity(Eigen::Index n) {
  return AnalysisOperator{Matrix::Identity(n, n), OperatorKind::identity, 0, {}};
}

AnalysisOperator make_custom(Matrix m) {
  return AnalysisOperator{std::move(m), OperatorKind::custom, 0, {}};
}

AnalysisOperator build_tv1(Eigen::Index n) {
  if (n < 2) throw std::invalid_argument("build_tv1: n must be >= 2");
  Matrix m = Matrix::Zero(n - 1, n);
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    m(k, k) = -1.0;
    m(k, k + 1) = 1.0;
  }
  return AnalysisOperator{std::move(m), OperatorKind::tv1, 0, {}};
}

AnalysisOperator build_tv2(Eigen::Index ns) {
  if (ns < 2) throw std::invalid_argument("build_tv2: side length must be >= 2");
  const Eigen::Index n = ns * ns;
  const Eigen::Index block = (ns - 1) * ns;
  Matrix m = Matrix::Zero(2 * block, n);
  // Column-major vectorization: pixel (r, c) sits at index r + c*ns.
  // Block 1: tv1 (x) I, differences along the second (column) index.
  for (Eigen::Index k = 0; k < ns - 1; ++k) {
    for (Eigen::Index r = 0; r < ns; ++r) {
      m(k * ns + r, r + k * ns) = -1.0;
      m(k * ns + r, r + (k + 1) * ns) = 1.0;
    }
  }
  // Block 2: I (x) tv1, differences along the first (row) index.
  for (Eigen::Index c = 0; c < ns; ++c) {
    for (Eigen::Index k = 0; k < ns - 1; ++k) {
      m(block + c * (ns - 1) + k, k + c * ns) = -1.0;
      m(block + c * (ns - 1) + k, k + 1 + c * ns) = 1.0;
    }
  }
  return AnalysisOperator{std::move(m), OperatorKind::tv2, 0, {}};
}

AnalysisOperator build_haar_dwt(Eigen::Index n, int levels) {
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("build_haar_dwt: n must be a power of two");
  Eigen::Index p = 0;
  while ((Eigen::Index{1} << p) < n) ++p;
  if (levels < 1 || levels > p)
    throw std::invalid_argument("build_haar_dwt: levels out of range");
  Matrix m = Matrix::Zero(n, n);
  Eigen::Index row = 0;
  for (int j = 1; j <= levels; ++j) {
    const Eigen::Index len = Eigen::Index{1} << j;
    const Eigen::Index half = len / 2;
    const double v = std::pow(2.0, -0.5 * j);
    for (Eigen::Index k = 0; k < n / len; ++k, ++row) {
      for (Eigen::Index i = 0; i < half; ++i) {
        m(row, k * len + i) = v;
        m(row, k * len + half + i) = -v;
      }
    }
  }
  const Eigen::Index len = Eigen::Index{1} << levels;
  const double v = std::pow(2.0, -0.5 * levels);
  for (Eigen::Index k = 0; k < n / len; ++k, ++row) {
    for (Eigen::Index i = 0; i < len; ++i) m(row, k * len + i) = v;
  }
  return AnalysisOperator{std::move(m), OperatorKind::dwt_haar, levels, {}};
}

namespace {

// Level-j detail atom: 2^(j-1) taps of +2^(-j/2) followed by as many of
// -2^(-j/2); unit l2 norm. Approximation atom: 2^J taps of 2^(-J/2).
Vector haar_detail_atom(Eigen::Index n, int j) {
  Vector atom = Vector::Zero(n);
  const Eigen::Index half = Eigen::Index{1} << (j - 1);
  const double v = std::pow(2.0, -0.5 * j);
  for (Eigen::Index i = 0; i < half; ++i) {
    atom(i) = v;
    atom(half + i) = -v;
  }
  return atom;
}

Vector haar_approx_atom(Eigen::Index n, int j) {
  Vector atom = Vector::Zero(n);
  const Eigen::Index len = Eigen::Index{1} << j;
  const double v = std::pow(2.0, -0.5 * j);
  for (Eigen::Index i = 0; i < len; ++i) atom(i) = v;
  return atom;
}

void fill_shifts(Matrix& m, Eigen::Index row0, const Vector& atom, double scale) {
  const Eigen::Index n = atom.size();
  for (Eigen::Index s = 0; s < n; ++s)
    for (Eigen::Index i = 0; i < n; ++i)
      m(row0 + s, (s + i) % n) = scale * atom(i);
}

}  // namespace

AnalysisOperator build_haar_undecimated(Eigen::Index n, int levels, FrameVariant variant) {
  if (levels < 1) throw std::invalid_argument("build_haar_undecimated: levels must be >= 1");
  if (n % (Eigen::Index{1} << levels) != 0)
    throw std::invalid_argument("build_haar_undecimated: n must be divisible by 2^levels");
  const bool dual = variant == FrameVariant::dual;
  Matrix m = Matrix::Zero((levels + 1) * n, n);
  for (int j = 1; j <= levels; ++j) {
    const double scale = dual ? std::pow(2.0, -j) : 1.0;
    fill_shifts(m, (j - 1) * n, haar_detail_atom(n, j), scale);
  }
  fill_shifts(m, levels * n, haar_approx_atom(n, levels),
              dual ? std::pow(2.0, -levels) : 1.0);
  return AnalysisOperator{std::move(m),
                          dual ? OperatorKind::irdwt_haar : OperatorKind::rdwt_haar,
                          levels,
                          {}};
}

AnalysisOperator build_haar_undecimated_2d(Eigen::Index ns, int levels, FrameVariant variant) {
  if (levels < 1) throw std::invalid_argument("build_haar_undecimated_2d: levels must be >= 1");
  if (ns % (Eigen::Index{1} << levels) != 0)
    throw std::invalid_argument("build_haar_undecimated_2d: side must be divisible by 2^levels");
  const bool dual = variant == FrameVariant::dual;
  const Eigen::Index n = ns * ns;
  Matrix m = Matrix::Zero((3 * levels + 1) * n, n);
  Eigen::Index row0 = 0;
  // Coefficient at shifts (s, t): <u_s v_t^T, X> with u along the first image
  // index and v along the second; column-major flattening r + c*ns.
  auto fill_subband = [&](const Vector& u, const Vector& v, double scale) {
    for (Eigen::Index t = 0; t < ns; ++t) {
      for (Eigen::Index s = 0; s < ns; ++s) {
        const Eigen::Index row = row0 + t * ns + s;
        for (Eigen::Index c = 0; c < ns; ++c) {
          const double vc = v((ns + c - t) % ns);
          if (vc == 0.0) continue;
          for (Eigen::Index r = 0; r < ns; ++r) {
            const double ur = u((ns + r - s) % ns);
            if (ur != 0.0) m(row, r + c * ns) = scale * ur * vc;
          }
        }
      }
    }
    row0 += n;
  };
  for (int j = 1; j <= levels; ++j) {
    const Vector w = haar_detail_atom(ns, j);
    const Vector l = haar_approx_atom(ns, j);
    const double scale = dual ? std::pow(4.0, -j) : 1.0;
    fill_subband(l, w, scale);
    fill_subband(w, l, scale);
    fill_subband(w, w, scale);
  }
  const Vector lJ = haar_approx_atom(ns, levels);
  fill_subband(lJ, lJ, dual ? std::pow(4.0, -levels) : 1.0);
  return AnalysisOperator{std::move(m),
                          dual ? OperatorKind::irdwt_haar_2d : OperatorKind::rdwt_haar_2d,
                          levels,
                          {}};
}

AnalysisOperator build_random_tight(Eigen::Index N, Eigen::Index n, std::uint64_t seed) {
  if (N < 1 || n < 1) throw std::invalid_argument("build_random_tight: N, n must be >= 1");
  Rng rng(Rng::derive(seed, 0x7469676874ULL));
  Matrix g(N, n);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.normal();
  Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix psi = svd.matrixU() * svd.matrixV().transpose();
  return AnalysisOperator{std::move(psi), OperatorKind::random_tight, 0, seed};
}

GramInfo gram_info(const AnalysisOperator& op) {
  GramInfo info;
  info.gram.noalias() = op.matrix * op.matrix.transpose();
  info.gram = 0.5 * (info.gram + info.gram.transpose()).eval();
  info.row_norms = info.gram.diagonal().cwiseMax(0.0).cwiseSqrt();
  Matrix psitpsi = op.matrix.transpose() * op.matrix;
  Eigen::SelfAdjointEigenSolver<Matrix> es(psitpsi, Eigen::EigenvaluesOnly);
  info.frame_lower = es.eigenvalues().minCoeff();
  info.frame_upper = es.eigenvalues().maxCoeff();
  return info;
}

}  // namespace anabp
