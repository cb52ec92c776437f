#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "reallog/matrix_space_maps.hpp"
#include "reallog/membership.hpp"

namespace reallog {

enum class Verdict {
  StandardPreserver,
  NotPreserver,
  NotBijective,
  /// Not of standard form, but no witness was found within the budget.
  Undetermined,
};

enum class HomomorphismKind { Automorphism, AntiAutomorphism, Neither };

std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(HomomorphismKind k) noexcept;

/// A in `set` while phi(A) is not.
struct Witness {
  Matrix a;
  Matrix image;
  MatrixSet set = MatrixSet::KStar;
  std::string explanation;
};

struct AnalysisResult {
  Verdict verdict = Verdict::Undetermined;
  std::optional<StandardForm> form;
  std::optional<Witness> witness;
  /// Why the standard-form pipeline stopped, when it did.
  std::string reason;
};

struct SearchOptions {
  int budget = 10000;
  std::uint64_t seed = 0;
};

/// Factors of a two-sided map: phi(A) = P A Q, or P A^T Q when transposed.
struct TwoSidedFactors {
  Matrix p;
  Matrix q;
  bool transposed = false;
};

/// Nearest Kronecker-product structure of big (or big * K_n). Empty unless
/// the rearranged matrix has numerical rank one.
std::optional<TwoSidedFactors> two_sided_factors(const MatrixSpaceMap& phi, const Tolerances& tol = {});

/// c = trace(phi(I)) / n; throws NotScalarImage unless phi(I) = c I and c > 0.
double recover_scale(const MatrixSpaceMap& phi, const Tolerances& tol = {});

HomomorphismKind classify_homomorphism(const MatrixSpaceMap& psi, const Tolerances& tol = {});

/// Normalized P with psi(A) = P A P^{-1}; psi must be a unital automorphism.
Matrix recover_conjugator(const MatrixSpaceMap& psi, const Tolerances& tol = {});

AnalysisResult analyze(const MatrixSpaceMap& phi, const Tolerances& tol = {}, const SearchOptions& opts = {});

/// Structured candidates first, then random members of `target`; each
/// candidate consumes one unit of budget.
std::optional<Witness> falsify_preservation(const MatrixSpaceMap& phi, MatrixSet target, int budget,
                                            const Tolerances& tol = {}, std::uint64_t seed = 0);

struct GlCheck {
  bool preserves = true;
  std::optional<Matrix> witness;
  std::string explanation;
};

/// Samples invertible A (image must be invertible) and rank-deficient A
/// (image must stay singular, i.e. phi^{-1} maps GL_n into GL_n).
GlCheck check_gl_preservation(const MatrixSpaceMap& phi, int samples, const Tolerances& tol = {},
                              std::uint64_t seed = 0);

}  // namespace reallog
