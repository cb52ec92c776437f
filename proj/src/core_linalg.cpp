#include "reallog/core_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "reallog/error.hpp"

namespace reallog {

namespace {

constexpr double kZeroMatrixScale = 1e-14;

// Kuhn's augmenting-path step for the bipartite graph "row i may take column j".
bool augment(Eigen::Index row, const std::vector<std::vector<char>>& allowed,
             std::vector<char>& visited, std::vector<Eigen::Index>& owner) {
  for (std::size_t col = 0; col < allowed[row].size(); ++col) {
    if (!allowed[row][col] || visited[col]) continue;
    visited[col] = 1;
    if (owner[col] < 0 || augment(owner[col], allowed, visited, owner)) {
      owner[col] = row;
      return true;
    }
  }
  return false;
}

bool has_perfect_matching(const std::vector<std::vector<double>>& dist, double bound) {
  const std::size_t n = dist.size();
  std::vector<std::vector<char>> allowed(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) allowed[i][j] = dist[i][j] <= bound ? 1 : 0;
  std::vector<Eigen::Index> owner(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<char> visited(n, 0);
    if (!augment(static_cast<Eigen::Index>(i), allowed, visited, owner)) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::SingularMap: return "SingularMap";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NotInK: return "NotInK";
    case ErrorCode::NotInKStar: return "NotInKStar";
    case ErrorCode::NegativeAxisEigenvalue: return "NegativeAxisEigenvalue";
    case ErrorCode::UnsupportedJordanStructure: return "UnsupportedJordanStructure";
    case ErrorCode::InconsistentJordanProfile: return "InconsistentJordanProfile";
    case ErrorCode::NotAnEigenvalue: return "NotAnEigenvalue";
    case ErrorCode::NotScalarImage: return "NotScalarImage";
    case ErrorCode::DegenerateRecovery: return "DegenerateRecovery";
    case ErrorCode::DegenerateAngle: return "DegenerateAngle";
    case ErrorCode::NonpositiveDeterminant: return "NonpositiveDeterminant";
    case ErrorCode::SampleBudgetExceeded: return "SampleBudgetExceeded";
  }
  return "Unknown";
}

void Tolerances::validate() const {
  for (double v : {eig_cluster, rank_rel, residual_rel, imag_zero}) {
    if (!(v > 0.0 && v < 1.0))
      throw Error(ErrorCode::InvalidArgument, "tolerances must lie strictly between 0 and 1");
  }
}

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " must be a non-empty square matrix, got " +
                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) throw Error(ErrorCode::NonFiniteEntry, std::string(what) + " has NaN/Inf entries");
}

double tolerance_scale(const Matrix& a) {
  const double norm = a.norm();
  return norm > 0.0 ? norm : kZeroMatrixScale;
}

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

Matrix invert(const Matrix& a, const Tolerances& tol) {
  require_square(a, "invert");
  require_finite(a, "invert");
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  qr.setThreshold(tol.rank_rel);
  if (qr.rank() < a.rows())
    throw Error(ErrorCode::SingularMatrix, "numerical rank " + std::to_string(qr.rank()) + " < " +
                                               std::to_string(a.rows()));
  return qr.inverse();
}

int numerical_rank(const Matrix& a, const Tolerances& tol) {
  if (a.size() == 0) return 0;
  require_finite(a, "numerical_rank");
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  const auto diag = qr.matrixQR().diagonal().cwiseAbs();
  const double largest = diag.size() ? diag.maxCoeff() : 0.0;
  if (largest == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < diag.size(); ++i)
    if (diag(i) > tol.rank_rel * largest) ++rank;
  return rank;
}

SchurForm real_schur(const Matrix& a, const Tolerances& /*tol*/) {
  require_square(a, "real_schur");
  require_finite(a, "real_schur");
  const Eigen::Index n = a.rows();
  Eigen::RealSchur<Matrix> schur(n);
  schur.setMaxIterations(40 * n);
  schur.compute(a, true);
  if (schur.info() != Eigen::Success)
    throw Error(ErrorCode::ConvergenceFailure,
                "real Schur QR iteration did not converge within " + std::to_string(40 * n) + " sweeps");
  SchurForm out{schur.matrixU(), schur.matrixT()};
  // Eigen leaves stale values below the quasi-triangular pattern; clear them.
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 2; i < n; ++i) out.t(i, j) = 0.0;
  return out;
}

std::vector<DiagonalBlock> quasi_triangular_blocks(const Matrix& t) {
  std::vector<DiagonalBlock> blocks;
  const Eigen::Index n = t.rows();
  Eigen::Index i = 0;
  while (i < n) {
    if (i + 1 < n && t(i + 1, i) != 0.0) {
      blocks.push_back({i, 2});
      i += 2;
    } else {
      blocks.push_back({i, 1});
      i += 1;
    }
  }
  return blocks;
}

std::pair<Complex, Complex> eigenvalues_2x2(double a, double b, double c, double d) {
  const double mean = 0.5 * (a + d);
  const double half_diff = 0.5 * (a - d);
  const double disc = half_diff * half_diff + b * c;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    // Avoid cancellation for the smaller root.
    const double big = mean >= 0.0 ? mean + root : mean - root;
    const double det = a * d - b * c;
    const double small = big != 0.0 ? det / big : mean - root;
    return {Complex(big, 0.0), Complex(small, 0.0)};
  }
  const double im = std::sqrt(-disc);
  return {Complex(mean, im), Complex(mean, -im)};
}

Spectrum eigenvalues(const Matrix& a, const Tolerances& tol) {
  const SchurForm schur = real_schur(a, tol);
  Spectrum out;
  out.source_norm = a.norm();
  out.values.reserve(static_cast<std::size_t>(a.rows()));
  for (const auto& blk : quasi_triangular_blocks(schur.t)) {
    const Eigen::Index i = blk.start;
    if (blk.size == 1) {
      out.values.emplace_back(schur.t(i, i), 0.0);
    } else {
      const auto [l1, l2] =
          eigenvalues_2x2(schur.t(i, i), schur.t(i, i + 1), schur.t(i + 1, i), schur.t(i + 1, i + 1));
      out.values.push_back(l1);
      out.values.push_back(l2);
    }
  }
  return out;
}

double matching_distance(const std::vector<Complex>& s1, const std::vector<Complex>& s2) {
  if (s1.size() != s2.size())
    throw Error(ErrorCode::LengthMismatch, "spectra of lengths " + std::to_string(s1.size()) + " and " +
                                               std::to_string(s2.size()));
  const std::size_t n = s1.size();
  if (n == 0) return 0.0;
  std::vector<std::vector<double>> dist(n, std::vector<double>(n));
  std::vector<double> candidates;
  candidates.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      dist[i][j] = std::abs(s1[i] - s2[j]);
      candidates.push_back(dist[i][j]);
    }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  // The optimum is one of the pairwise distances; find the smallest feasible one.
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (has_perfect_matching(dist, candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return candidates[lo];
}

double matching_distance(const Spectrum& s1, const Spectrum& s2) {
  return matching_distance(s1.values, s2.values);
}

std::vector<int> power_rank_sequence(const Matrix& b, int kmax, double threshold) {
  require_square(b, "power_rank_sequence");
  const Eigen::Index n = b.rows();
  std::vector<int> ranks{static_cast<int>(n)};
  Matrix basis = identity(n);
  for (int k = 1; k <= kmax; ++k) {
    if (basis.cols() == 0) {
      ranks.push_back(0);
      continue;
    }
    const Matrix image = b * basis;
    Eigen::ColPivHouseholderQR<Matrix> qr(image);
    const auto diag = qr.matrixQR().diagonal().cwiseAbs();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < diag.size(); ++i)
      if (diag(i) > threshold) ++rank;
    const Matrix q = qr.householderQ() * Matrix::Identity(n, rank);
    basis = q;
    ranks.push_back(static_cast<int>(rank));
  }
  return ranks;
}

Matrix null_space_basis(const Matrix& a, double threshold) {
  const Eigen::Index cols = a.cols();
  Eigen::ColPivHouseholderQR<Matrix> qr(a.transpose());
  const auto diag = qr.matrixQR().diagonal().cwiseAbs();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < diag.size(); ++i)
    if (diag(i) > threshold) ++rank;
  const Matrix q = qr.householderQ() * identity(cols);
  return q.rightCols(cols - rank);
}

Matrix range_basis(const Matrix& a, double threshold) {
  const Eigen::Index rows = a.rows();
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  const auto diag = qr.matrixQR().diagonal().cwiseAbs();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < diag.size(); ++i)
    if (diag(i) > threshold) ++rank;
  return qr.householderQ() * Matrix::Identity(rows, rank);
}

}  // namespace reallog
