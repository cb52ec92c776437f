#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "reallog/error.hpp"
#include "reallog/membership.hpp"
#include "reallog/random.hpp"

using namespace reallog;

namespace {

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix rot(double t) { return m2(std::cos(t), -std::sin(t), std::sin(t), std::cos(t)); }

Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

Matrix conjugate_randomly(const Matrix& j, double max_cond, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  const Matrix s = random_conditioned(j.rows(), max_cond, rng);
  return s * j * s.inverse();
}

}  // namespace

TEST_CASE("classify_spectrum examples") {
  SUBCASE("two positive singletons") {
    const auto c = classify_spectrum(diag({1, 2}));
    REQUIRE(c.size() == 2);
    for (const auto& e : c) {
      CHECK(e.tag == EigTag::PositiveReal);
      CHECK(e.cluster_multiplicity == 1);
    }
  }
  SUBCASE("one positive, one negative") {
    const auto c = classify_spectrum(m2(0, -1, -1, 0));
    REQUIRE(c.size() == 2);
    int pos = 0, neg = 0;
    for (const auto& e : c) {
      pos += e.tag == EigTag::PositiveReal && std::abs(e.value - 1.0) < 1e-14;
      neg += e.tag == EigTag::NegativeReal && std::abs(e.value + 1.0) < 1e-14;
    }
    CHECK(pos == 1);
    CHECK(neg == 1);
  }
  SUBCASE("rotation is one non-real pair") {
    const auto c = classify_spectrum(rot(std::numbers::pi / 3));
    REQUIRE(c.size() == 1);
    CHECK(c[0].tag == EigTag::NonRealPair);
    CHECK(c[0].cluster_multiplicity == 2);
    CHECK(c[0].value.imag() > 0.0);
  }
  SUBCASE("zero eigenvalue") {
    const auto c = classify_spectrum(diag({0, 1}));
    int zeros = 0;
    for (const auto& e : c) zeros += e.tag == EigTag::Zero;
    CHECK(zeros == 1);
  }
}

TEST_CASE("jordan_profile examples") {
  CHECK(jordan_profile(diag({-1, -1}), -1.0).block_counts == std::map<int, int>{{1, 2}});
  CHECK(jordan_profile(m2(-1, 1, 0, -1), -1.0).block_counts == std::map<int, int>{{2, 1}});
  const Matrix jj = oracle::jordan_matrix({{-1, 0, 2}, {-1, 0, 2}});
  const JordanProfile p = jordan_profile(jj, -1.0);
  CHECK(p.block_counts == std::map<int, int>{{2, 2}});
  CHECK(p.algebraic_multiplicity() == 4);
  CHECK(p.geometric_multiplicity() == 2);
  CHECK_FALSE(p.semisimple());
  CHECK(p.first_odd_size() == 0);
  try {
    jordan_profile(diag({1, 2}), -1.0);
    FAIL("expected NotAnEigenvalue");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAnEigenvalue);
  }
}

TEST_CASE("jordan_profile survives a well-conditioned similarity") {
  const Matrix j = oracle::jordan_matrix({{-2, 0, 3}, {-2, 0, 1}, {-2, 0, 1}, {1, 0, 2}});
  const JordanProfile p = jordan_profile(conjugate_randomly(j, 50.0, 21), -2.0);
  CHECK(p.block_counts == std::map<int, int>{{1, 2}, {3, 1}});
  CHECK(p.first_odd_size() == 3);
}

TEST_CASE("in_K examples") {
  CHECK(in_K(identity(2)).in_set);
  const auto v = in_K(m2(-1, 0, 0, -1));
  CHECK_FALSE(v.in_set);
  CHECK_FALSE(v.witness.empty());
  CHECK(in_K(rot(2 * std::numbers::pi / 3)).in_set);
  CHECK_FALSE(in_K(rot(std::numbers::pi)).in_set);
  CHECK_FALSE(in_K(diag({0, 1})).in_set);
}

TEST_CASE("in_K_star examples") {
  CHECK(in_K_star(m2(-1, 0, 0, -1)).in_set);
  const auto v = in_K_star(m2(0, -1, -1, 0));
  CHECK_FALSE(v.in_set);
  CHECK(v.witness.find("eigenvalue -1") != std::string::npos);
  CHECK(v.witness.find("block size 1 count 1") != std::string::npos);
  CHECK(in_K_star(oracle::jordan_matrix({{-1, 0, 2}, {-1, 0, 2}})).in_set);
  CHECK_FALSE(in_K_star(oracle::jordan_matrix({{-1, 0, 2}, {-1, 0, 1}, {-1, 0, 1}})).in_set);
  CHECK_FALSE(in_K_star(diag({0, 1})).in_set);
  CHECK_FALSE(in_K_star(m2(-1, 1, 0, -1)).in_set);
}

TEST_CASE("in_closure examples") {
  CHECK(in_closure(Matrix::Zero(2, 2)).in_set);
  CHECK(in_closure(m2(-1, 0, 0, -1)).in_set);
  CHECK_FALSE(in_closure(diag({-1, 1})).in_set);
  CHECK(membership(MatrixSet::Closure, diag({-1, -1, 0})).in_set);
}

TEST_CASE("membership agrees with the ground truth on constructed Jordan forms") {
  for (int k = 0; k < 300; ++k) {
    Rng rng = make_rng(22, k);
    const auto blocks = oracle::random_blocks(8, rng);
    const Matrix j = oracle::jordan_matrix(blocks);
    const Matrix s = random_conditioned(j.rows(), 50.0, rng);
    const Matrix a = s * j * s.inverse();
    CAPTURE(k);
    CHECK(in_K_star(a).in_set == oracle::culver_ground_truth(blocks));
    CHECK(in_K(a).in_set == oracle::k_ground_truth(blocks));
    CHECK(in_closure(a).in_set == oracle::closure_ground_truth(blocks));
  }
}

TEST_CASE("membership chain, similarity and scaling invariance") {
  for (int k = 0; k < 1000; ++k) {
    Rng rng = make_rng(23, k);
    const Eigen::Index n = uniform_int(1, 8, rng);
    Matrix a;
    if (k % 2 == 0) {
      a = random_gaussian(n, n, rng);
    } else {
      const auto blocks = oracle::random_blocks(8, rng);
      const Matrix j = oracle::jordan_matrix(blocks);
      const Matrix s = random_conditioned(j.rows(), 10.0, rng);
      a = s * j * s.inverse();
    }
    const bool k_in = in_K(a).in_set, ks_in = in_K_star(a).in_set, cl_in = in_closure(a).in_set;
    CAPTURE(k);
    if (k_in) CHECK(ks_in);
    if (ks_in) {
      CHECK(numerical_rank(a) == a.rows());
      CHECK(cl_in);
    }
    const Matrix s = random_conditioned(a.rows(), 10.0, rng);
    const Matrix b = s * a * s.inverse();
    CHECK(in_K(b).in_set == k_in);
    CHECK(in_K_star(b).in_set == ks_in);
    const double c = std::exp(uniform(-2.0, 2.0, rng));
    CHECK(in_K(c * a).in_set == k_in);
    CHECK(in_K_star(c * a).in_set == ks_in);
    CHECK(in_closure(c * a).in_set == cl_in);
  }
}

TEST_CASE("approximate_from_K examples") {
  SUBCASE("-I") {
    const Matrix a = -identity(2);
    const Matrix ap = approximate_from_K(a, 0.1);
    CHECK((ap - a).norm() <= 0.1);
    CHECK(in_K(ap).in_set);
    for (const Complex& z : eigenvalues(ap).values) CHECK(std::abs(std::abs(z) - 1.0) < 1e-12);
  }
  SUBCASE("already in K") { CHECK((approximate_from_K(identity(3), 1e-3) - identity(3)).norm() == 0.0); }
  SUBCASE("third entry untouched") {
    const Matrix a = diag({-2, -2, 5});
    const Matrix ap = approximate_from_K(a, 0.01);
    CHECK((ap - a).norm() <= 0.01);
    CHECK(in_K(ap).in_set);
    CHECK(ap(2, 2) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(std::abs(ap(0, 2)) + std::abs(ap(2, 0)) < 1e-14);
  }
  SUBCASE("defective negative eigenvalue is unsupported") {
    try {
      approximate_from_K(oracle::jordan_matrix({{-1, 0, 2}, {-1, 0, 2}}), 0.1);
      FAIL("expected UnsupportedJordanStructure");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnsupportedJordanStructure);
    }
  }
  SUBCASE("outside K* is rejected") {
    try {
      approximate_from_K(diag({-1, 1}), 0.1);
      FAIL("expected NotInKStar");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotInKStar);
    }
  }
}

TEST_CASE("openness radius examples") {
  CHECK(openness_radius(identity(2)) == doctest::Approx(0.5));
  CHECK(openness_radius(diag({2, 3})) == doctest::Approx(1.0));
  CHECK(openness_radius(rot(std::numbers::pi / 2)) == doctest::Approx(0.5));
  CHECK_THROWS_AS(openness_radius(-identity(2)), Error);
}

TEST_CASE("perturbations inside the conservative radius stay in K") {
  for (int k = 0; k < 30; ++k) {
    Rng rng = make_rng(24, k);
    const Eigen::Index n = uniform_int(1, 6, rng);
    Matrix a = random_gaussian(n, n, rng) + 3.0 * identity(n);
    if (!in_K(a).in_set) continue;
    const double eta = conservative_perturbation_radius(a);
    CHECK(eta > 0.0);
    for (int p = 0; p < 100; ++p) {
      Matrix e = random_gaussian(n, n, rng);
      e *= 0.999 * eta / e.norm();
      CHECK(in_K(a + e).in_set);
    }
  }
  // Defective case relies on the Henrici bound.
  const Matrix j = oracle::jordan_matrix({{1, 0, 3}});
  CHECK(conservative_perturbation_radius(j) > 0.0);
}

TEST_CASE("split_negative_semisimple block-diagonalizes") {
  const Matrix a = conjugate_randomly(diag({-2, -2, 3, -1, -1}), 10.0, 25);
  const NegativeSplit split = split_negative_semisimple(a);
  CHECK(split.complement_dim == 1);
  REQUIRE(split.negative_blocks.size() == 2);
  const Matrix d = split.basis_inv * a * split.basis;
  for (const auto& blk : split.negative_blocks) {
    CHECK(blk.dim == 2);
    CHECK((d.block(blk.start, blk.start, 2, 2) - blk.mu * identity(2)).norm() < 1e-10);
  }
}
