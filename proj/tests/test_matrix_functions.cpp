#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "oracles.hpp"
#include "reallog/error.hpp"
#include "reallog/matrix_functions.hpp"
#include "reallog/membership.hpp"
#include "reallog/random.hpp"

using namespace reallog;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("expm examples") {
  CHECK((expm(Matrix::Zero(3, 3)) - identity(3)).norm() == 0.0);
  const double t = kPi / 4;
  const Matrix x = t * m2(0, 1, -1, 0);
  CHECK((expm(x) - m2(std::cos(t), std::sin(t), -std::sin(t), std::cos(t))).norm() < 1e-15);
  CHECK((expm(x) - oracle::taylor_expm(x)).norm() < 1e-15);
  CHECK((expm(diag({std::log(2.0), std::log(3.0)})) - diag({2, 3})).norm() < 1e-14);
}

TEST_CASE("expm matches the Taylor oracle across Pade degrees") {
  for (int k = 0; k < 200; ++k) {
    Rng rng = make_rng(31, k);
    const Eigen::Index n = uniform_int(1, 8, rng);
    Matrix x = random_gaussian(n, n, rng);
    // Norms from 1e-3 to 20 exercise every degree and the squaring phase.
    x *= std::pow(10.0, uniform(-3.0, 1.3, rng)) / x.cwiseAbs().colwise().sum().maxCoeff();
    const Matrix want = oracle::taylor_expm(x);
    CHECK((expm(x) - want).norm() <= 1e-12 * want.norm());
  }
}

TEST_CASE("expm of commuting sums factors") {
  for (int k = 0; k < 50; ++k) {
    Rng rng = make_rng(32, k);
    const Eigen::Index n = uniform_int(1, 6, rng);
    Matrix c = random_gaussian(n, n, rng);
    c /= c.norm();
    const Matrix a = 0.5 * c + 0.3 * c * c;
    const Matrix b = -0.7 * c + 0.2 * c * c * c + identity(n);
    CHECK((expm(a + b) - expm(a) * expm(b)).norm() <= 1e-12 * expm(a + b).norm());
  }
}

TEST_CASE("expm overflow and input errors") {
  CHECK(code_of([] { expm(1e6 * identity(2)); }) == ErrorCode::Overflow);
  CHECK(code_of([] { expm(Matrix::Zero(2, 3)); }) == ErrorCode::DimensionMismatch);
  Matrix nan = identity(2);
  nan(0, 0) = std::nan("");
  CHECK(code_of([&] { expm(nan); }) == ErrorCode::NonFiniteEntry);
}

TEST_CASE("sqrtm_real examples") {
  CHECK((sqrtm_real(identity(2)) - identity(2)).norm() == 0.0);
  CHECK((sqrtm_real(diag({4, 9})) - diag({2, 3})).norm() < 1e-15);
  CHECK((sqrtm_real(m2(4, 1, 0, 4)) - m2(2, 0.25, 0, 2)).norm() < 1e-15);
  CHECK(code_of([] { sqrtm_real(diag({-1, 1})); }) == ErrorCode::NegativeAxisEigenvalue);
  CHECK(code_of([] { sqrtm_real(diag({0, 1})); }) == ErrorCode::NegativeAxisEigenvalue);
  Matrix full = Matrix::Ones(3, 3);
  CHECK(code_of([&] { sqrtm_real(full); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("sqrtm_real squares back on quasi-triangular factors") {
  for (int k = 0; k < 100; ++k) {
    Rng rng = make_rng(33, k);
    const Eigen::Index n = uniform_int(1, 10, rng);
    const Matrix a = random_gaussian(n, n, rng) + 3.0 * identity(n);
    if (!in_K(a).in_set) continue;
    const Matrix t = real_schur(a).t;
    const Matrix x = sqrtm_real(t);
    CHECK((x * x - t).norm() <= 1e-12 * t.norm());
  }
}

TEST_CASE("logm_principal examples") {
  const LogResult r = logm_principal(identity(3));
  CHECK(r.log_matrix.norm() == 0.0);
  CHECK(r.kind == LogKind::Principal);
  CHECK(r.roundtrip_residual == 0.0);
  CHECK((logm_principal(5.0 * identity(2)).log_matrix - std::log(5.0) * identity(2)).norm() < 1e-14);
  const Matrix r90 = m2(0, -1, 1, 0);
  const LogResult rr = logm_principal(r90);
  CHECK((rr.log_matrix - (kPi / 2) * m2(0, -1, 1, 0)).norm() < 1e-14);
  CHECK(rr.roundtrip_residual < 1e-14);
  CHECK(code_of([] { logm_principal(-identity(2)); }) == ErrorCode::NotInK);
}

TEST_CASE("logm_principal roundtrips and is similarity equivariant") {
  for (int k = 0; k < 100; ++k) {
    Rng rng = make_rng(34, k);
    const Eigen::Index n = uniform_int(1, 10, rng);
    Matrix x = random_gaussian(n, n, rng);
    x *= uniform(0.01, 2.0, rng) / x.norm();
    const Matrix a = oracle::taylor_expm(x);
    const LogResult r = logm_principal(a);
    CHECK((r.log_matrix - x).norm() <= 1e-10);
    CHECK(r.roundtrip_residual <= 1e-12);
    const Matrix s = random_conditioned(n, 10.0, rng);
    const Matrix sl = logm_principal(s * a * s.inverse()).log_matrix;
    CHECK((sl - s * r.log_matrix * s.inverse()).norm() <= 1e-9 * std::max(1.0, r.log_matrix.norm()));
  }
}

TEST_CASE("real_log_paired examples") {
  SUBCASE("-I") {
    const LogResult r = real_log_paired(-identity(2));
    CHECK(r.kind == LogKind::PairedNegativeSemisimple);
    CHECK(r.roundtrip_residual < 1e-10);
    const Matrix pj = kPi * m2(0, 1, -1, 0);
    CHECK(std::min((r.log_matrix - pj).norm(), (r.log_matrix + pj).norm()) < 1e-14);
    CHECK((oracle::taylor_expm(r.log_matrix) + identity(2)).norm() < 1e-13);
  }
  SUBCASE("diag(-2, -2, 3)") {
    const Matrix a = diag({-2, -2, 3});
    const LogResult r = real_log_paired(a);
    CHECK((oracle::taylor_expm(r.log_matrix) - a).norm() < 1e-12);
    CHECK(r.log_matrix(2, 2) == doctest::Approx(std::log(3.0)));
    CHECK(r.log_matrix(0, 0) == doctest::Approx(std::log(2.0)));
    CHECK(std::abs(r.log_matrix(0, 1)) == doctest::Approx(kPi));
  }
  SUBCASE("identity") { CHECK(real_log_paired(identity(2)).log_matrix.norm() < 1e-15); }
  SUBCASE("errors") {
    CHECK(code_of([] { real_log_paired(diag({-1, 1})); }) == ErrorCode::NotInKStar);
    CHECK(code_of([] { real_log_paired(oracle::jordan_matrix({{-1, 0, 2}, {-1, 0, 2}})); }) ==
          ErrorCode::UnsupportedJordanStructure);
  }
}

TEST_CASE("real_log_paired yields real logarithms of random semisimple K* matrices") {
  for (int k = 0; k < 100; ++k) {
    Rng rng = make_rng(35, k);
    const Eigen::Index n = uniform_int(2, 8, rng);
    Matrix d = Matrix::Zero(n, n);
    Eigen::Index i = 0;
    for (; i + 1 < n && uniform_int(0, 1, rng) == 1; i += 2) d(i, i) = d(i + 1, i + 1) = -uniform(0.3, 3.0, rng);
    for (; i < n; ++i) d(i, i) = uniform(0.3, 3.0, rng);
    const Matrix s = random_conditioned(n, 20.0, rng);
    const Matrix a = s * d * s.inverse();
    const LogResult r = real_log_paired(a);
    CHECK(r.log_matrix.allFinite());
    CHECK((oracle::taylor_expm(r.log_matrix) - a).norm() <= 1e-9 * a.norm());
  }
}
