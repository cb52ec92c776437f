#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace reallog {

/// Dense real square matrix. Entries are stored column-major by Eigen; the
/// semantic order used for I/O and normalization is row-major.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

/// Relative tolerances shared by every numerical decision in the library.
/// All are scaled by the Frobenius norm of the matrix under test, falling back
/// to an absolute scale of 1e-14 for the zero matrix.
struct Tolerances {
  double eig_cluster = 1e-8;
  double rank_rel = 1e-10;
  double residual_rel = 1e-9;
  double imag_zero = 1e-8;

  /// Throws InvalidArgument unless every field lies in (0, 1).
  void validate() const;
};

struct Spectrum {
  std::vector<Complex> values;
  double source_norm = 0.0;

  std::size_t size() const noexcept { return values.size(); }
};

/// A = Q T Q^T with Q orthogonal and T quasi upper triangular. Every 2x2
/// diagonal block of T carries a complex-conjugate eigenvalue pair.
struct SchurForm {
  Matrix q;
  Matrix t;
};

/// Diagonal block layout of a quasi-triangular matrix: start index and size
/// (1 or 2) of each block.
struct DiagonalBlock {
  Eigen::Index start;
  Eigen::Index size;
};

void require_square(const Matrix& a, const char* what);
void require_finite(const Matrix& a, const char* what);

/// ||A||_F, or 1e-14 when A is the zero matrix.
double tolerance_scale(const Matrix& a);

Matrix invert(const Matrix& a, const Tolerances& tol = {});

/// Number of column-pivoted QR diagonal magnitudes above rank_rel times the
/// largest one. Rectangular input is accepted.
int numerical_rank(const Matrix& a, const Tolerances& tol = {});

SchurForm real_schur(const Matrix& a, const Tolerances& tol = {});

/// Diagonal blocks of a quasi-triangular matrix, read off its subdiagonal.
std::vector<DiagonalBlock> quasi_triangular_blocks(const Matrix& t);

/// Eigenvalues of a 2x2 block [[a, b], [c, d]].
std::pair<Complex, Complex> eigenvalues_2x2(double a, double b, double c, double d);

Spectrum eigenvalues(const Matrix& a, const Tolerances& tol = {});

/// Bottleneck matching distance: min over permutations p of max_i |s1_i - s2_p(i)|.
double matching_distance(const Spectrum& s1, const Spectrum& s2);
double matching_distance(const std::vector<Complex>& s1, const std::vector<Complex>& s2);

/// Ranks r_0 = n, r_1, ..., r_kmax of B^k computed by pushing an orthonormal
/// basis of range(B^(k-1)) through B and re-orthonormalizing. Directions whose
/// image falls below `threshold` (absolute) are dropped at each step.
std::vector<int> power_rank_sequence(const Matrix& b, int kmax, double threshold);

/// Orthonormal basis of the numerical null space of A (columns), using a
/// rank decision relative to rank_rel * ||A||_F.
Matrix null_space_basis(const Matrix& a, double threshold);

/// Orthonormal basis of the numerical column space of A.
Matrix range_basis(const Matrix& a, double threshold);

Matrix identity(Eigen::Index n);

}  // namespace reallog
