#pragma once

#include <cstdint>

#include "reallog/core_linalg.hpp"

namespace reallog {

/// Trace of B_theta = A_theta R(theta) targeted by shear_A_theta.
inline constexpr double kShearTraceTarget = -3.0;

Matrix rotation(double theta);

/// [[1, b], [0, 1]] with b chosen so that trace(A_theta R(theta)) equals
/// `trace_target`. Throws DegenerateAngle when sin(theta) vanishes.
Matrix shear_A_theta(double theta, double trace_target = kShearTraceTarget);

/// A_theta R(theta): determinant 1, trace equal to the target.
Matrix product_B_theta(double theta, double trace_target = kShearTraceTarget);

/// A_theta placed in the leading 2x2 block of an n x n identity. M only has
/// its dimension checked.
Matrix embedded_witness(double theta, Eigen::Index n, const Matrix& m);

/// `block` placed at rows/columns (i, j) of an n x n matrix whose remaining
/// diagonal entries equal `fill`.
Matrix embed_pair(const Matrix& block, Eigen::Index n, Eigen::Index i, Eigen::Index j, double fill = 1.0);

/// Trace and discriminant data of C(theta) = R(theta) [[a, b], [c, d]]:
/// trace(C) = r0 cos(theta - phase), det(C) = ad - bc, and the discriminant
/// trace^2 - 4 det peaks at max_discriminant = r0^2 - 4 det.
struct TwoByTwoAnalysis {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  double r0 = 0.0;
  double phase = 0.0;
  double det = 0.0;
  double max_discriminant = 0.0;
};

/// Throws NonpositiveDeterminant when ad - bc <= 0.
TwoByTwoAnalysis analyze_two_by_two(double a, double b, double c, double d);

/// |max over a uniform grid on [0, pi) of disc(C(theta)) - ((a-d)^2 + (b+c)^2)|,
/// with trace and determinant taken from the explicit product. grid >= 100.
double discriminant_max_check(double a, double b, double c, double d, int grid);

enum class DensitySampling {
  K,
  /// Rank n-1 matrices, where det (degree n) vanishes identically.
  SingularVariety,
};

/// Number of monomials of total degree <= degree in `vars` variables.
std::size_t monomial_count(int vars, int degree);

/// Exponent vectors of all monomials of total degree <= degree, graded by
/// degree and lexicographic within a degree, constant term first.
std::vector<std::vector<int>> graded_lex_monomials(int vars, int degree);

/// True iff the samples-by-monomials evaluation matrix has full column rank,
/// i.e. no nonzero polynomial of that degree vanishes on all samples.
/// Requires samples >= 2 * monomial_count(n^2, degree).
bool zariski_density_witness(int n, int degree, int samples, std::uint64_t seed,
                             DensitySampling sampling = DensitySampling::K, const Tolerances& tol = {});

}  // namespace reallog
