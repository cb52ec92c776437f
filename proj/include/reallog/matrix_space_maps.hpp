#pragma once

#include "reallog/core_linalg.hpp"

namespace reallog {

/// Linear map on n x n matrices, vec(phi(A)) = big * vec(A) with vec the
/// column-stacking isomorphism.
struct MatrixSpaceMap {
  Eigen::Index n = 0;
  Matrix big;
};

/// phi(A) = c P A P^{-1} (or c P A^T P^{-1} when transposed).
struct StandardForm {
  double c = 1.0;
  Matrix p;
  bool transposed = false;
};

Vector vec(const Matrix& a);
Matrix unvec(const Vector& v, Eigen::Index n);

/// E_ij: the n x n matrix unit with a single 1 at (i, j).
Matrix matrix_unit(Eigen::Index n, Eigen::Index i, Eigen::Index j);

/// Permutation K_n with K vec(A) = vec(A^T).
Matrix commutation_matrix(Eigen::Index n);

/// Unit Frobenius norm, first entry in row-major order with magnitude above
/// 1e-8 * max |p_ij| made positive.
Matrix normalize_conjugator(const Matrix& p);

MatrixSpaceMap identity_map(Eigen::Index n);
MatrixSpaceMap transpose_map(Eigen::Index n);

/// A -> P A Q, or A -> P A^T Q; big = (Q^T kron P) [K_n].
MatrixSpaceMap from_two_sided(const Matrix& p, const Matrix& q, bool transposed);
MatrixSpaceMap from_standard(const StandardForm& sf, const Tolerances& tol = {});

Matrix apply(const MatrixSpaceMap& m, const Matrix& a);

/// (m1 o m2)(A) = m1(m2(A)).
MatrixSpaceMap compose(const MatrixSpaceMap& m1, const MatrixSpaceMap& m2);
MatrixSpaceMap inverse(const MatrixSpaceMap& m, const Tolerances& tol = {});
MatrixSpaceMap scaled(const MatrixSpaceMap& m, double s);

bool is_bijective(const MatrixSpaceMap& m, const Tolerances& tol = {});

/// Throws DimensionMismatch unless big is n^2 x n^2.
void validate(const MatrixSpaceMap& m);

}  // namespace reallog
