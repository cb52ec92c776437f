#pragma once

#include <map>
#include <string>
#include <vector>

#include "reallog/core_linalg.hpp"

namespace reallog {

enum class EigTag { PositiveReal, NegativeReal, Zero, NonRealPair };

std::string_view to_string(EigTag tag) noexcept;

/// One eigenvalue cluster. For NonRealPair the value is the representative
/// with positive imaginary part and the multiplicity counts both members of
/// every conjugate pair.
struct EigClass {
  Complex value;
  EigTag tag;
  int cluster_multiplicity;
};

/// Jordan structure at one real eigenvalue: block size -> number of blocks.
struct JordanProfile {
  double eigenvalue = 0.0;
  std::map<int, int> block_counts;

  int algebraic_multiplicity() const;
  int geometric_multiplicity() const;
  bool semisimple() const;
  /// First block size whose count is odd, or 0 when every count is even.
  int first_odd_size() const;
};

struct MembershipVerdict {
  bool in_set = false;
  std::string witness;  // empty iff in_set
};

enum class MatrixSet { K, KStar, Closure };

std::string_view to_string(MatrixSet set) noexcept;

/// Groups eigenvalues into clusters and tags each one. Clusters are grown to
/// cover the spread a defective eigenvalue shows under rounding, and a
/// cluster is kept only when the kernel chain of (A - mean I) has exactly the
/// cluster's multiplicity as its stable dimension.
std::vector<EigClass> classify_spectrum(const Matrix& a, const Tolerances& tol = {});

JordanProfile jordan_profile(const Matrix& a, double mu, const Tolerances& tol = {});

MembershipVerdict in_K(const Matrix& a, const Tolerances& tol = {});

/// Culver's criterion: invertible, and at every negative eigenvalue each
/// Jordan block size occurs an even number of times.
MembershipVerdict in_K_star(const Matrix& a, const Tolerances& tol = {});

/// Every negative eigenvalue has even geometric multiplicity; zero allowed.
MembershipVerdict in_closure(const Matrix& a, const Tolerances& tol = {});

MembershipVerdict membership(MatrixSet set, const Matrix& a, const Tolerances& tol = {});

/// A matrix in K within Frobenius distance eps of A, obtained by turning each
/// semisimple negative pair mu*I_2 into |mu|*R(pi - delta).
Matrix approximate_from_K(const Matrix& a, double eps, const Tolerances& tol = {});

/// Half the distance from the spectrum to (-inf, 0].
double openness_radius(const Matrix& a, const Tolerances& tol = {});

/// Frobenius radius eta such that ||E||_F < eta keeps every eigenvalue of A+E
/// within 0.1 * delta_0 of the spectrum of A. Uses the larger of the
/// Bauer-Fike bound (diagonalizable A) and Henrici's bound (any A).
double conservative_perturbation_radius(const Matrix& a, const Tolerances& tol = {});

/// Real basis that splits off the semisimple negative eigenvalues:
/// basis^{-1} A basis = diag(A_K, mu_1 I, ..., mu_k I) up to rounding.
struct NegativeSplit {
  struct Block {
    double mu;
    Eigen::Index start;
    Eigen::Index dim;
  };
  Matrix basis;
  Matrix basis_inv;
  Eigen::Index complement_dim = 0;
  std::vector<Block> negative_blocks;
};

/// Throws NotInKStar when A is outside K*, UnsupportedJordanStructure when a
/// negative eigenvalue is defective.
NegativeSplit split_negative_semisimple(const Matrix& a, const Tolerances& tol = {});

}  // namespace reallog
