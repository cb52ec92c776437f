#include "reallog/matrix_functions.hpp"

#include <array>
#include <cmath>
#include <string>

#include <Eigen/LU>

#include "reallog/error.hpp"
#include "reallog/membership.hpp"

namespace reallog {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Largest 1-norms for which the degree-m Pade approximant is accurate to
// unit roundoff in double precision.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

constexpr int kMaxSquarings = 1000;
constexpr int kMaxSquareRoots = 100;
constexpr double kLogPadeRadius = 0.25;
constexpr int kLogQuadratureNodes = 8;

double one_norm(const Matrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// U (odd part) and V (even part) of the Pade approximant r = (V - U)^{-1} (V + U).
void pade_terms(const Matrix& a, int degree, Matrix& u, Matrix& v) {
  const Eigen::Index n = a.rows();
  const Matrix id = identity(n);
  const Matrix a2 = a * a;
  switch (degree) {
    case 3: {
      constexpr std::array<double, 4> b{120., 60., 12., 1.};
      u = a * (b[3] * a2 + b[1] * id);
      v = b[2] * a2 + b[0] * id;
      return;
    }
    case 5: {
      constexpr std::array<double, 6> b{30240., 15120., 3360., 420., 30., 1.};
      const Matrix a4 = a2 * a2;
      u = a * (b[5] * a4 + b[3] * a2 + b[1] * id);
      v = b[4] * a4 + b[2] * a2 + b[0] * id;
      return;
    }
    case 7: {
      constexpr std::array<double, 8> b{17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
      const Matrix a4 = a2 * a2;
      const Matrix a6 = a4 * a2;
      u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
      v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
      return;
    }
    case 9: {
      constexpr std::array<double, 10> b{17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                         2162160.,     110880.,     3960.,       90.,        1.};
      const Matrix a4 = a2 * a2;
      const Matrix a6 = a4 * a2;
      const Matrix a8 = a6 * a2;
      u = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
      v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
      return;
    }
    default: {
      constexpr std::array<double, 14> b{64764752532480000., 32382376266240000., 7771770303897600.,
                                         1187353796428800.,  129060195264000.,   10559470521600.,
                                         670442572800.,      33522128640.,       1323241920.,
                                         40840800.,          960960.,            16380.,
                                         182.,               1.};
      const Matrix a4 = a2 * a2;
      const Matrix a6 = a4 * a2;
      u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
      v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
      return;
    }
  }
}

struct QuadratureRule {
  std::array<double, kLogQuadratureNodes> nodes;
  std::array<double, kLogQuadratureNodes> weights;
};

// Gauss-Legendre rule on [0, 1] via Newton iteration on P_m.
QuadratureRule gauss_legendre_unit() {
  QuadratureRule rule{};
  constexpr int m = kLogQuadratureNodes;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule.nodes[i] = 0.5 * (1.0 + x);
    rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);  // 2/((1-x^2)P'^2), halved for [0, 1]
  }
  return rule;
}

// log(I + E) = integral_0^1 E (I + tE)^{-1} dt, evaluated by Gauss-Legendre;
// the m-point rule equals the [m/m] Pade approximant of log(1 + x).
Matrix log_one_plus(const Matrix& e) {
  static const QuadratureRule rule = gauss_legendre_unit();
  const Eigen::Index n = e.rows();
  Matrix out = Matrix::Zero(n, n);
  for (int j = 0; j < kLogQuadratureNodes; ++j) {
    const Matrix lhs = identity(n) + rule.nodes[j] * e;
    out += rule.weights[j] * lhs.partialPivLu().solve(e);
  }
  return out;
}

void require_quasi_triangular(const Matrix& t) {
  require_square(t, "sqrtm_real");
  const Eigen::Index n = t.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 2; i < n; ++i)
      if (t(i, j) != 0.0)
        throw Error(ErrorCode::InvalidArgument, "sqrtm_real expects a quasi upper triangular matrix");
  for (Eigen::Index i = 0; i + 2 < n; ++i)
    if (t(i + 1, i) != 0.0 && t(i + 2, i + 1) != 0.0)
      throw Error(ErrorCode::InvalidArgument, "quasi-triangular diagonal blocks must be 1x1 or 2x2");
}

Matrix sqrt_diagonal_block(const Matrix& b) {
  if (b.rows() == 1) {
    if (!(b(0, 0) > 0.0))
      throw Error(ErrorCode::NegativeAxisEigenvalue, "eigenvalue " + std::to_string(b(0, 0)));
    return b.cwiseSqrt();
  }
  // Cayley-Hamilton for X^2 = B: X = (B + sqrt(det B) I) / sqrt(tr B + 2 sqrt(det B)).
  const double det = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
  if (!(det > 0.0)) throw Error(ErrorCode::NegativeAxisEigenvalue, "2x2 block with nonpositive determinant");
  const double s = std::sqrt(det);
  const double t2 = b.trace() + 2.0 * s;
  if (!(t2 > 0.0)) throw Error(ErrorCode::NegativeAxisEigenvalue, "2x2 block with eigenvalues on (-inf, 0]");
  return (b + s * identity(2)) / std::sqrt(t2);
}

// Solves X_ii Z + Z X_jj = rhs for a p x q block Z via its Kronecker form.
Matrix solve_block_sylvester(const Matrix& xii, const Matrix& xjj, const Matrix& rhs) {
  const Eigen::Index p = xii.rows(), q = xjj.rows();
  Matrix k = Matrix::Zero(p * q, p * q);
  for (Eigen::Index c = 0; c < q; ++c) {
    k.block(c * p, c * p, p, p) += xii;
    for (Eigen::Index r = 0; r < q; ++r) k.block(c * p, r * p, p, p) += xjj(r, c) * identity(p);
  }
  const Vector rhs_vec = Eigen::Map<const Vector>(rhs.data(), p * q);
  const Vector z = k.fullPivLu().solve(rhs_vec);
  return Eigen::Map<const Matrix>(z.data(), p, q);
}

double relative_residual(const Matrix& x, const Matrix& a) {
  return (expm(x) - a).norm() / tolerance_scale(a);
}

}  // namespace

std::string_view to_string(LogKind kind) noexcept {
  return kind == LogKind::Principal ? "Principal" : "PairedNegativeSemisimple";
}

Matrix expm(const Matrix& x) {
  require_square(x, "expm");
  require_finite(x, "expm");
  const double norm = one_norm(x);
  constexpr std::array<std::pair<int, double>, 4> low{{{3, kTheta3}, {5, kTheta5}, {7, kTheta7}, {9, kTheta9}}};
  Matrix u, v;
  for (auto [degree, theta] : low) {
    if (norm <= theta) {
      pade_terms(x, degree, u, v);
      return (v - u).partialPivLu().solve(v + u);
    }
  }
  const int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
  if (squarings > kMaxSquarings)
    throw Error(ErrorCode::Overflow, "norm " + std::to_string(norm) + " exceeds the scaling budget");
  pade_terms(x / std::ldexp(1.0, squarings), 13, u, v);
  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  if (!r.allFinite()) throw Error(ErrorCode::Overflow, "matrix exponential overflowed");
  return r;
}

Matrix sqrtm_real(const Matrix& t, const Tolerances& /*tol*/) {
  require_finite(t, "sqrtm_real");
  require_quasi_triangular(t);
  const auto blocks = quasi_triangular_blocks(t);
  const Eigen::Index n = t.rows();
  Matrix x = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const auto bj = blocks[j];
    x.block(bj.start, bj.start, bj.size, bj.size) = sqrt_diagonal_block(t.block(bj.start, bj.start, bj.size, bj.size));
    for (std::size_t ii = j; ii-- > 0;) {
      const auto bi = blocks[ii];
      Matrix rhs = t.block(bi.start, bj.start, bi.size, bj.size);
      for (std::size_t k = ii + 1; k < j; ++k) {
        const auto bk = blocks[k];
        rhs -= x.block(bi.start, bk.start, bi.size, bk.size) * x.block(bk.start, bj.start, bk.size, bj.size);
      }
      x.block(bi.start, bj.start, bi.size, bj.size) =
          solve_block_sylvester(x.block(bi.start, bi.start, bi.size, bi.size),
                                x.block(bj.start, bj.start, bj.size, bj.size), rhs);
    }
  }
  return x;
}

LogResult logm_principal(const Matrix& a, const Tolerances& tol) {
  require_square(a, "logm_principal");
  require_finite(a, "logm_principal");
  if (const auto v = in_K(a, tol); !v.in_set) throw Error(ErrorCode::NotInK, v.witness);

  const SchurForm schur = real_schur(a, tol);
  const Eigen::Index n = a.rows();
  Matrix t = schur.t;
  int roots = 0;
  while (one_norm(t - identity(n)) > kLogPadeRadius) {
    if (++roots > kMaxSquareRoots)
      throw Error(ErrorCode::ConvergenceFailure, "square-root phase did not approach the identity");
    t = sqrtm_real(t, tol);
  }
  const Matrix log_t = std::ldexp(1.0, roots) * log_one_plus(t - identity(n));

  LogResult out;
  out.log_matrix = schur.q * log_t * schur.q.transpose();
  out.kind = LogKind::Principal;
  out.roundtrip_residual = relative_residual(out.log_matrix, a);
  return out;
}

LogResult real_log_paired(const Matrix& a, const Tolerances& tol) {
  require_square(a, "real_log_paired");
  require_finite(a, "real_log_paired");
  if (const auto v = in_K_star(a, tol); !v.in_set) throw Error(ErrorCode::NotInKStar, v.witness);

  const NegativeSplit split = split_negative_semisimple(a, tol);
  const Eigen::Index n = a.rows();
  const Eigen::Index c = split.complement_dim;
  Matrix log_block = Matrix::Zero(n, n);
  if (c > 0) {
    const Matrix reduced = split.basis_inv * a * split.basis;
    log_block.topLeftCorner(c, c) = logm_principal(reduced.topLeftCorner(c, c), tol).log_matrix;
  }
  Matrix pair(2, 2);
  pair << 0.0, kPi, -kPi, 0.0;
  for (const auto& blk : split.negative_blocks) {
    const double ln_abs = std::log(std::abs(blk.mu));
    for (Eigen::Index p = 0; p < blk.dim; p += 2)
      log_block.block(blk.start + p, blk.start + p, 2, 2) = ln_abs * identity(2) + pair;
  }

  LogResult out;
  out.log_matrix = split.basis * log_block * split.basis_inv;
  out.kind = LogKind::PairedNegativeSemisimple;
  out.roundtrip_residual = relative_residual(out.log_matrix, a);
  return out;
}

}  // namespace reallog
