#include "reallog/matrix_space_maps.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "reallog/error.hpp"

namespace reallog {

namespace {

constexpr double kLeadingEntryRel = 1e-8;

void require_dim(const Matrix& a, Eigen::Index n, const char* what) {
  if (a.rows() != n || a.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": expected " + std::to_string(n) + "x" +
                                                  std::to_string(n) + ", got " + std::to_string(a.rows()) + "x" +
                                                  std::to_string(a.cols()));
}

}  // namespace

Vector vec(const Matrix& a) { return Eigen::Map<const Vector>(a.data(), a.size()); }

Matrix unvec(const Vector& v, Eigen::Index n) {
  if (n < 0 || v.size() != n * n)
    throw Error(ErrorCode::DimensionMismatch,
                "unvec: vector of length " + std::to_string(v.size()) + " is not n^2 for n = " + std::to_string(n));
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

Matrix matrix_unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  Matrix e = Matrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

Matrix commutation_matrix(Eigen::Index n) {
  Matrix k = Matrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) k(j + i * n, i + j * n) = 1.0;
  return k;
}

Matrix normalize_conjugator(const Matrix& p) {
  const double norm = p.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw Error(ErrorCode::SingularMatrix, "cannot normalize a zero matrix");
  Matrix out = p / norm;
  const double cutoff = kLeadingEntryRel * out.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      if (std::abs(out(i, j)) > cutoff) {
        if (out(i, j) < 0.0) out = -out;
        return out;
      }
  return out;
}

void validate(const MatrixSpaceMap& m) {
  if (m.n < 1) throw Error(ErrorCode::DimensionMismatch, "map dimension must be positive");
  require_dim(m.big, m.n * m.n, "map matrix");
}

MatrixSpaceMap identity_map(Eigen::Index n) { return {n, identity(n * n)}; }

MatrixSpaceMap transpose_map(Eigen::Index n) { return {n, commutation_matrix(n)}; }

MatrixSpaceMap from_two_sided(const Matrix& p, const Matrix& q, bool transposed) {
  require_square(p, "from_two_sided");
  require_dim(q, p.rows(), "from_two_sided Q");
  const Eigen::Index n = p.rows();
  Matrix big = Eigen::kroneckerProduct(q.transpose(), p);
  if (transposed) big = big * commutation_matrix(n);
  return {n, big};
}

MatrixSpaceMap from_standard(const StandardForm& sf, const Tolerances& tol) {
  require_square(sf.p, "from_standard");
  if (!(sf.c > 0.0)) throw Error(ErrorCode::InvalidArgument, "standard form scale must be positive");
  return from_two_sided(sf.c * sf.p, invert(sf.p, tol), sf.transposed);
}

Matrix apply(const MatrixSpaceMap& m, const Matrix& a) {
  validate(m);
  require_dim(a, m.n, "apply");
  return unvec(m.big * vec(a), m.n);
}

MatrixSpaceMap compose(const MatrixSpaceMap& m1, const MatrixSpaceMap& m2) {
  validate(m1);
  validate(m2);
  if (m1.n != m2.n) throw Error(ErrorCode::DimensionMismatch, "compose: maps act on different dimensions");
  return {m1.n, m1.big * m2.big};
}

MatrixSpaceMap inverse(const MatrixSpaceMap& m, const Tolerances& tol) {
  validate(m);
  if (!is_bijective(m, tol)) throw Error(ErrorCode::SingularMap, "map is not bijective");
  try {
    return {m.n, invert(m.big, tol)};
  } catch (const Error& e) {
    throw Error(ErrorCode::SingularMap, e.what());
  }
}

MatrixSpaceMap scaled(const MatrixSpaceMap& m, double s) { return {m.n, s * m.big}; }

bool is_bijective(const MatrixSpaceMap& m, const Tolerances& tol) {
  validate(m);
  return numerical_rank(m.big, tol) == m.n * m.n;
}

}  // namespace reallog
