#include "reallog/preserver_analysis.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "reallog/constructions.hpp"
#include "reallog/error.hpp"
#include "reallog/matrix_functions.hpp"
#include "reallog/random.hpp"

namespace reallog {

namespace {

constexpr double kPi = std::numbers::pi;
// Relative slack on products of basis images; they carry cond(P)-sized
// rounding, far below the O(1) defect of a non-homomorphism.
constexpr double kHomomorphismRel = 1e-6;
constexpr double kBasisVerifyRel = 1e-8;
// Rank decision on powers of (M - mu I) while building flags at a
// possibly defective eigenvalue.
constexpr double kFlagRankRel = 1e-7;

const double kTraceTargets[] = {-3.0, -4.5, -6.0};
const double kRotationFills[] = {1.0, 0.1, 1e-2, 1e-3};
const double kRotationOffsets[] = {0.0, 0.3, -0.3};
// Two spacings so that a collision of mu * d_k with another eigenvalue of M
// cannot occur for both.
const std::pair<double, double> kSplitDiagonals[] = {{1.0, 0.5}, {1.1, 0.37}};

struct Certificate {
  StandardForm form;
  double residual = 0.0;
};

Matrix image_of_unit(const MatrixSpaceMap& m, Eigen::Index i, Eigen::Index j) {
  return unvec(m.big.col(i + j * m.n), m.n);
}

// Max over the basis of ||phi(E_ij) - c P E_ij' P^{-1}||_F, E_ij' = E_ji when transposed.
double basis_residual(const MatrixSpaceMap& phi, const StandardForm& sf, const Tolerances& tol) {
  const Matrix p_inv = invert(sf.p, tol);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < phi.n; ++i)
    for (Eigen::Index j = 0; j < phi.n; ++j) {
      const Matrix e = sf.transposed ? matrix_unit(phi.n, j, i) : matrix_unit(phi.n, i, j);
      worst = std::max(worst, (image_of_unit(phi, i, j) - sf.c * sf.p * e * p_inv).norm());
    }
  return worst;
}

Certificate certify_standard(const MatrixSpaceMap& phi, const Tolerances& tol) {
  const double c = recover_scale(phi, tol);
  MatrixSpaceMap psi = scaled(phi, 1.0 / c);
  const HomomorphismKind kind = classify_homomorphism(psi, tol);
  if (kind == HomomorphismKind::Neither)
    throw Error(ErrorCode::DegenerateRecovery, "phi(I)^{-1} phi is neither multiplicative nor anti-multiplicative");
  const bool transposed = kind == HomomorphismKind::AntiAutomorphism;
  if (transposed) psi = compose(psi, transpose_map(phi.n));
  Certificate cert{{c, recover_conjugator(psi, tol), transposed}};
  cert.residual = basis_residual(phi, cert.form, tol);
  const double bound = kBasisVerifyRel * c * condition_number(cert.form.p);
  if (!(cert.residual <= bound))
    throw Error(ErrorCode::DegenerateRecovery,
                "basis residual " + std::to_string(cert.residual) + " exceeds " + std::to_string(bound));
  return cert;
}

std::optional<Witness> test_candidate(const MatrixSpaceMap& phi, const Matrix& a, MatrixSet target,
                                      const Tolerances& tol) {
  if (!a.allFinite()) return std::nullopt;
  try {
    if (!membership(target, a, tol).in_set) return std::nullopt;
    Matrix image = apply(phi, a);
    const MembershipVerdict v = membership(target, image, tol);
    if (v.in_set) return std::nullopt;
    const std::string name(to_string(target));
    return Witness{a, std::move(image), target, "A in " + name + ", phi(A) not in " + name + ": " + v.witness};
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::vector<Matrix> negative_pair_seeds(Eigen::Index n) {
  std::vector<Matrix> out;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) out.push_back(embed_pair(-identity(2), n, i, j));
  out.push_back(identity(n));
  return out;
}

std::vector<Matrix> rotation_grid_seeds(Eigen::Index n) {
  std::vector<Matrix> out;
  for (int k = 1; k < 12; ++k) {
    if (k == 6) continue;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) out.push_back(embed_pair(rotation(kPi * k / 6.0), n, i, j));
  }
  return out;
}

// For a non-real eigenvalue r e^{i theta} of M with eigenvector x + iy,
// S = [x, y, complement] block-triangularizes M with leading block
// r R(-theta); conjugating A_{-theta} (+) I by S gives a unipotent A whose
// product with M has two distinct negative eigenvalues in that block.
void complex_pair_gadgets(const Matrix& m, const Tolerances& tol, std::vector<Matrix>& out) {
  const Eigen::Index n = m.rows();
  Eigen::EigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) return;
  const double scale = tolerance_scale(m);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex lambda = es.eigenvalues()(k);
    if (lambda.imag() <= tol.imag_zero * scale) continue;
    const Eigen::VectorXcd v = es.eigenvectors().col(k);
    Matrix pair(n, 2);
    pair.col(0) = v.real();
    pair.col(1) = v.imag();
    const Matrix complement = null_space_basis(pair.transpose(), tol.rank_rel * pair.norm());
    if (complement.cols() != n - 2) continue;
    Matrix s(n, n);
    s << pair, complement;
    Matrix s_inv;
    try {
      s_inv = invert(s, tol);
    } catch (const Error&) {
      continue;
    }
    for (double target : kTraceTargets) {
      Matrix core = identity(n);
      core.topLeftCorner(2, 2) = shear_A_theta(-std::arg(lambda), target);
      out.push_back(s * core * s_inv);
    }
  }
}

// At a negative eigenvalue mu of algebraic multiplicity m, a flag-adapted
// basis of the generalized eigenspace makes M upper triangular there; a
// positive diagonal A with distinct entries on that block splits the
// eigenvalue mu into distinct simple negative eigenvalues of AM.
void negative_split_gadgets(const Matrix& m, const Tolerances& tol, std::vector<Matrix>& out) {
  const Eigen::Index n = m.rows();
  for (const EigClass& cls : classify_spectrum(m, tol)) {
    if (cls.tag != EigTag::NegativeReal) continue;
    const double mu = cls.value.real();
    const int mult = cls.cluster_multiplicity;
    const Matrix shifted = m - mu * identity(n);
    Matrix flag(n, 0);
    Matrix power = identity(n);
    for (int j = 1; j <= mult && flag.cols() < mult; ++j) {
      power = shifted * power;
      const Matrix kernel = null_space_basis(power, kFlagRankRel * tolerance_scale(power));
      const Matrix fresh = kernel - flag * (flag.transpose() * kernel);
      const Matrix added = range_basis(fresh, kFlagRankRel * std::max(1.0, fresh.norm()));
      Matrix grown(n, flag.cols() + added.cols());
      grown << flag, added;
      flag = grown;
    }
    if (flag.cols() != mult) continue;
    const Matrix complement = range_basis(power, kFlagRankRel * tolerance_scale(power));
    if (complement.cols() != n - mult) continue;
    Matrix s(n, n);
    s << flag, complement;
    Matrix s_inv;
    try {
      s_inv = invert(s, tol);
    } catch (const Error&) {
      continue;
    }
    for (const auto& [base, step] : kSplitDiagonals) {
      Vector diag = Vector::Ones(n);
      for (int k = 0; k < mult; ++k) diag(k) = base + step * k;
      out.push_back(s * diag.asDiagonal() * s_inv);
    }
  }
}

// R(theta) on coordinates (i, j), t elsewhere: as t -> 0 the spectrum of AM
// approaches that of R(theta) M[{i,j}], whose trace is most negative at
// theta = phase + pi.
void coordinate_rotation_gadgets(const Matrix& m, std::vector<Matrix>& out) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double phase = std::atan2(m(i, j) - m(j, i), m(i, i) + m(j, j));
      for (double offset : kRotationOffsets)
        for (double fill : kRotationFills) out.push_back(embed_pair(rotation(phase + kPi + offset), n, i, j, fill));
    }
}

std::vector<Matrix> structured_candidates(const MatrixSpaceMap& phi, const Tolerances& tol) {
  std::vector<Matrix> out = negative_pair_seeds(phi.n);
  if (const auto factors = two_sided_factors(phi, tol)) {
    const Matrix m = factors->q * factors->p;
    std::vector<Matrix> gadgets;
    complex_pair_gadgets(m, tol, gadgets);
    negative_split_gadgets(m, tol, gadgets);
    coordinate_rotation_gadgets(m, gadgets);
    // P A^T Q is similar to A^T M, so the transposed case feeds A = gadget^T.
    for (Matrix& g : gadgets) out.push_back(factors->transposed ? Matrix(g.transpose()) : g);
  }
  for (Matrix& g : rotation_grid_seeds(phi.n)) out.push_back(std::move(g));
  return out;
}

Matrix random_candidate(Eigen::Index n, std::uint64_t seed, std::uint64_t trial) {
  Rng rng = make_rng(seed, trial);
  const Matrix g = random_gaussian(n, n, rng);
  if (trial % 2 == 0) return expm(g * (uniform(0.2, 1.5, rng) / std::sqrt(static_cast<double>(n))));
  return g;
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::StandardPreserver: return "StandardPreserver";
    case Verdict::NotPreserver: return "NotPreserver";
    case Verdict::NotBijective: return "NotBijective";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "?";
}

std::string_view to_string(HomomorphismKind k) noexcept {
  switch (k) {
    case HomomorphismKind::Automorphism: return "Automorphism";
    case HomomorphismKind::AntiAutomorphism: return "AntiAutomorphism";
    case HomomorphismKind::Neither: return "Neither";
  }
  return "?";
}

std::optional<TwoSidedFactors> two_sided_factors(const MatrixSpaceMap& phi, const Tolerances& tol) {
  validate(phi);
  const Eigen::Index n = phi.n;
  for (bool transposed : {false, true}) {
    // big = (Q^T kron P) K^[transposed] and K^2 = I.
    const Matrix big = transposed ? Matrix(phi.big * commutation_matrix(n)) : phi.big;
    Matrix rearranged(n * n, n * n);
    for (Eigen::Index b = 0; b < n; ++b)
      for (Eigen::Index a = 0; a < n; ++a) {
        const Matrix block = big.block(a * n, b * n, n, n);
        rearranged.row(a + b * n) = vec(block).transpose();
      }
    Eigen::JacobiSVD<Matrix> svd(rearranged, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    if (!(s(0) > 0.0)) return std::nullopt;
    if (s.size() > 1 && s(1) > tol.residual_rel * s(0)) continue;
    const double root = std::sqrt(s(0));
    const Matrix x = unvec(root * svd.matrixU().col(0), n);  // Q^T
    const Matrix y = unvec(root * svd.matrixV().col(0), n);  // P
    return TwoSidedFactors{y, x.transpose(), transposed};
  }
  return std::nullopt;
}

double recover_scale(const MatrixSpaceMap& phi, const Tolerances& tol) {
  validate(phi);
  const Matrix image = apply(phi, identity(phi.n));
  const double c = image.trace() / static_cast<double>(phi.n);
  const double defect = (image - c * identity(phi.n)).norm();
  if (defect > tol.residual_rel * phi.big.norm())
    throw Error(ErrorCode::NotScalarImage, "phi(I) is not a multiple of I (defect " + std::to_string(defect) + ")");
  if (!(c > 0.0)) throw Error(ErrorCode::NotScalarImage, "phi(I) = c I with c = " + std::to_string(c) + " <= 0");
  return c;
}

HomomorphismKind classify_homomorphism(const MatrixSpaceMap& psi, const Tolerances& /*tol*/) {
  validate(psi);
  const Eigen::Index n = psi.n;
  if (n == 1) return HomomorphismKind::Automorphism;
  std::vector<Matrix> images(static_cast<std::size_t>(n * n));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) images[i + j * n] = image_of_unit(psi, i, j);
  const auto img = [&](Eigen::Index i, Eigen::Index j) -> const Matrix& { return images[i + j * n]; };

  bool automorphism = true, anti = true;
  const Matrix zero = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n && (automorphism || anti); ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) {
          // psi(E_ij E_kl) = delta_jk psi(E_il).
          const Matrix& expected = j == k ? img(i, l) : zero;
          const double scale = img(i, j).norm() * img(k, l).norm() + expected.norm();
          if (automorphism && (img(i, j) * img(k, l) - expected).norm() > kHomomorphismRel * scale) automorphism = false;
          if (anti && (img(k, l) * img(i, j) - expected).norm() > kHomomorphismRel * scale) anti = false;
        }
  if (automorphism) return HomomorphismKind::Automorphism;
  if (anti) return HomomorphismKind::AntiAutomorphism;
  return HomomorphismKind::Neither;
}

Matrix recover_conjugator(const MatrixSpaceMap& psi, const Tolerances& tol) {
  validate(psi);
  const Eigen::Index n = psi.n;
  // psi(E_11) = p_1 q_1^T, so its largest column is a multiple of P e_1.
  const Matrix f = image_of_unit(psi, 0, 0);
  Eigen::Index best = 0;
  f.colwise().norm().maxCoeff(&best);
  const Vector p1 = f.col(best);
  Matrix p(n, n);
  for (Eigen::Index j = 0; j < n; ++j) p.col(j) = image_of_unit(psi, j, 0) * p1;
  if (!(p.norm() > 0.0) || numerical_rank(p, tol) < n)
    throw Error(ErrorCode::DegenerateRecovery, "assembled conjugator is numerically singular");
  return normalize_conjugator(p);
}

AnalysisResult analyze(const MatrixSpaceMap& phi, const Tolerances& tol, const SearchOptions& opts) {
  validate(phi);
  AnalysisResult out;
  if (!is_bijective(phi, tol)) {
    out.verdict = Verdict::NotBijective;
    out.reason = "numerical rank of the map is below n^2";
    return out;
  }
  if (phi.n == 1) {
    const double c = phi.big(0, 0);
    if (c > 0.0) {
      out.verdict = Verdict::StandardPreserver;
      out.form = StandardForm{c, Matrix::Ones(1, 1), false};
    } else {
      out.verdict = Verdict::NotPreserver;
      const Matrix a = Matrix::Ones(1, 1);
      out.witness = Witness{a, apply(phi, a), MatrixSet::KStar, "A = 1 in Kstar, phi(A) = " + std::to_string(c) +
                                                                   " is not positive"};
    }
    return out;
  }
  try {
    out.form = certify_standard(phi, tol).form;
    out.verdict = Verdict::StandardPreserver;
    return out;
  } catch (const Error& e) {
    out.reason = e.what();
  }
  for (MatrixSet target : {MatrixSet::KStar, MatrixSet::K}) {
    if (auto w = falsify_preservation(phi, target, opts.budget, tol, opts.seed)) {
      out.verdict = Verdict::NotPreserver;
      out.witness = std::move(w);
      return out;
    }
  }
  out.verdict = Verdict::Undetermined;
  return out;
}

std::optional<Witness> falsify_preservation(const MatrixSpaceMap& phi, MatrixSet target, int budget,
                                            const Tolerances& tol, std::uint64_t seed) {
  validate(phi);
  if (target == MatrixSet::Closure)
    throw Error(ErrorCode::InvalidArgument, "witness search targets K or Kstar");
  int spent = 0;
  for (const Matrix& a : structured_candidates(phi, tol)) {
    if (spent++ >= budget) return std::nullopt;
    if (auto w = test_candidate(phi, a, target, tol)) return w;
  }
  for (std::uint64_t trial = 0; spent < budget; ++trial, ++spent)
    if (auto w = test_candidate(phi, random_candidate(phi.n, seed, trial), target, tol)) return w;
  return std::nullopt;
}

GlCheck check_gl_preservation(const MatrixSpaceMap& phi, int samples, const Tolerances& tol, std::uint64_t seed) {
  validate(phi);
  const Eigen::Index n = phi.n;
  GlCheck out;
  for (int s = 0; s < samples; ++s) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(s));
    const Matrix a = random_gaussian(n, n, rng);
    if (numerical_rank(a, tol) == n && numerical_rank(apply(phi, a), tol) < n) {
      out = {false, a, "invertible A has a singular image"};
      return out;
    }
    if (n < 2) continue;
    const Matrix singular = random_gaussian(n, n - 1, rng) * random_gaussian(n - 1, n, rng);
    if (numerical_rank(apply(phi, singular), tol) == n) {
      out = {false, singular, "singular A has an invertible image"};
      return out;
    }
  }
  return out;
}

}  // namespace reallog
