#include "reallog/constructions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "reallog/error.hpp"
#include "reallog/membership.hpp"
#include "reallog/random.hpp"

namespace reallog {

namespace {

constexpr double kDegenerateSine = 1e-12;
constexpr int kRejectionAttemptsPerSample = 1000;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void append_degree(int vars, int remaining, int var, std::vector<int>& current,
                   std::vector<std::vector<int>>& out) {
  if (var == vars - 1) {
    current[var] = remaining;
    out.push_back(current);
    current[var] = 0;
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[var] = e;
    append_degree(vars, remaining - e, var + 1, current, out);
  }
  current[var] = 0;
}

Matrix sample_for(DensitySampling sampling, int n, Rng& rng, const Tolerances& tol) {
  if (sampling == DensitySampling::SingularVariety)
    return random_gaussian(n, n - 1, rng) * random_gaussian(n - 1, n, rng);
  for (int attempt = 0; attempt < kRejectionAttemptsPerSample; ++attempt) {
    Matrix a = random_gaussian(n, n, rng);
    if (in_K(a, tol).in_set) return a;
  }
  throw Error(ErrorCode::SampleBudgetExceeded, "rejection sampling from K stalled");
}

}  // namespace

Matrix rotation(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

Matrix shear_A_theta(double theta, double trace_target) {
  const double s = std::sin(theta);
  if (std::abs(s) < kDegenerateSine)
    throw Error(ErrorCode::DegenerateAngle, "sin(theta) vanishes at theta = " + std::to_string(theta));
  Matrix a(2, 2);
  a << 1.0, (trace_target - 2.0 * std::cos(theta)) / s, 0.0, 1.0;
  return a;
}

Matrix product_B_theta(double theta, double trace_target) {
  return shear_A_theta(theta, trace_target) * rotation(theta);
}

Matrix embedded_witness(double theta, Eigen::Index n, const Matrix& m) {
  if (n < 2) throw Error(ErrorCode::DimensionMismatch, "embedding needs n >= 2");
  if (m.rows() != n || m.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "companion matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  return embed_pair(shear_A_theta(theta), n, 0, 1);
}

Matrix embed_pair(const Matrix& block, Eigen::Index n, Eigen::Index i, Eigen::Index j, double fill) {
  if (block.rows() != 2 || block.cols() != 2 || i == j || i < 0 || j < 0 || i >= n || j >= n)
    throw Error(ErrorCode::DimensionMismatch, "embed_pair needs a 2x2 block and distinct indices below n");
  Matrix out = fill * identity(n);
  const Eigen::Index idx[2] = {i, j};
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out(idx[r], idx[c]) = block(r, c);
  return out;
}

TwoByTwoAnalysis analyze_two_by_two(double a, double b, double c, double d) {
  TwoByTwoAnalysis out{a, b, c, d};
  out.det = a * d - b * c;
  if (!(out.det > 0.0))
    throw Error(ErrorCode::NonpositiveDeterminant, "ad - bc = " + std::to_string(out.det));
  out.r0 = std::hypot(a + d, b - c);
  out.phase = std::atan2(b - c, a + d);
  out.max_discriminant = (a - d) * (a - d) + (b + c) * (b + c);
  return out;
}

double discriminant_max_check(double a, double b, double c, double d, int grid) {
  if (grid < 100) throw Error(ErrorCode::InvalidArgument, "grid must have at least 100 points");
  Matrix m(2, 2);
  m << a, b, c, d;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid; ++k) {
    const Matrix cm = rotation(std::numbers::pi * k / grid) * m;
    const double tr = cm.trace();
    const double det = cm(0, 0) * cm(1, 1) - cm(0, 1) * cm(1, 0);
    best = std::max(best, tr * tr - 4.0 * det);
  }
  return std::abs(best - ((a - d) * (a - d) + (b + c) * (b + c)));
}

std::size_t monomial_count(int vars, int degree) {
  return static_cast<std::size_t>(std::llround(binomial(vars + degree, degree)));
}

std::vector<std::vector<int>> graded_lex_monomials(int vars, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(vars, 0);
  for (int d = 0; d <= degree; ++d) append_degree(vars, d, 0, current, out);
  return out;
}

bool zariski_density_witness(int n, int degree, int samples, std::uint64_t seed, DensitySampling sampling,
                             const Tolerances& tol) {
  if (n < 1 || degree < 0) throw Error(ErrorCode::InvalidArgument, "need n >= 1 and degree >= 0");
  if (sampling == DensitySampling::SingularVariety && n < 2)
    throw Error(ErrorCode::InvalidArgument, "the singular variety control needs n >= 2");
  const int vars = n * n;
  const auto monomials = graded_lex_monomials(vars, degree);
  if (static_cast<std::size_t>(samples) < 2 * monomials.size())
    throw Error(ErrorCode::InvalidArgument, "need at least " + std::to_string(2 * monomials.size()) + " samples");

  Rng rng = make_rng(seed);
  Matrix eval(samples, static_cast<Eigen::Index>(monomials.size()));
  for (int s = 0; s < samples; ++s) {
    const Matrix a = sample_for(sampling, n, rng, tol);
    const Vector x = Eigen::Map<const Vector>(a.data(), vars);
    for (std::size_t k = 0; k < monomials.size(); ++k) {
      double v = 1.0;
      for (int i = 0; i < vars; ++i)
        if (monomials[k][i] > 0) v *= std::pow(x(i), monomials[k][i]);
      eval(s, static_cast<Eigen::Index>(k)) = v;
    }
  }
  return numerical_rank(eval, tol) == eval.cols();
}

}  // namespace reallog
