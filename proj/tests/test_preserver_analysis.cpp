#include <doctest.h>

#include <cmath>

#include "reallog/error.hpp"
#include "reallog/preserver_analysis.hpp"
#include "reallog/random.hpp"

using namespace reallog;

namespace {

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

MatrixSpaceMap example_swap_map() { return from_two_sided(identity(2), m2(0, 1, 1, 0), false); }

void check_witness(const MatrixSpaceMap& phi, const Witness& w) {
  CHECK(membership(w.set, w.a).in_set);
  CHECK_FALSE(membership(w.set, apply(phi, w.a)).in_set);
  CHECK((w.image - apply(phi, w.a)).norm() == 0.0);
}

}  // namespace

TEST_CASE("recover_scale") {
  CHECK(recover_scale(identity_map(3)) == doctest::Approx(1.0));
  Rng rng = make_rng(51);
  CHECK(recover_scale(from_standard({3.0, random_conditioned(4, 10.0, rng), false})) ==
        doctest::Approx(3.0).epsilon(1e-10));
  try {
    recover_scale(example_swap_map());
    FAIL("expected NotScalarImage");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotScalarImage);
  }
  CHECK_THROWS_AS(recover_scale(scaled(identity_map(2), -1.0)), Error);
}

TEST_CASE("classify_homomorphism") {
  const Matrix p = m2(1, 1, 0, 1);
  CHECK(classify_homomorphism(from_two_sided(p, p.inverse(), false)) == HomomorphismKind::Automorphism);
  CHECK(classify_homomorphism(transpose_map(3)) == HomomorphismKind::AntiAutomorphism);
  CHECK(classify_homomorphism(identity_map(1)) == HomomorphismKind::Automorphism);
  const Matrix q = m2(2, 1, 1, 1);
  CHECK(classify_homomorphism(from_two_sided(identity(2), q, false)) == HomomorphismKind::Neither);
}

TEST_CASE("recover_conjugator") {
  CHECK((recover_conjugator(identity_map(3)) - identity(3) / std::sqrt(3.0)).norm() < 1e-15);
  const Matrix p0 = m2(1, 1, 0, 1);
  const Matrix p = recover_conjugator(from_two_sided(p0, p0.inverse(), false));
  CHECK((p - normalize_conjugator(p0)).norm() < 1e-12);
  Rng rng = make_rng(52);
  const Matrix p5 = random_conditioned(5, 100.0, rng);
  const MatrixSpaceMap psi = from_two_sided(p5, p5.inverse(), false);
  const Matrix r = recover_conjugator(psi);
  const Matrix r_inv = r.inverse();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 5; ++j) {
      const Matrix e = matrix_unit(5, i, j);
      worst = std::max(worst, (apply(psi, e) - r * e * r_inv).cwiseAbs().maxCoeff());
    }
  CHECK(worst < 1e-8);
}

TEST_CASE("analyze examples") {
  SUBCASE("conjugation with scale") {
    const AnalysisResult r = analyze(from_standard({2.0, m2(1, 1, 0, 1), false}));
    REQUIRE(r.verdict == Verdict::StandardPreserver);
    CHECK(r.form->c == doctest::Approx(2.0));
    CHECK_FALSE(r.form->transposed);
    CHECK((r.form->p - normalize_conjugator(m2(1, 1, 0, 1))).norm() < 1e-12);
  }
  SUBCASE("swap map is not a preserver") {
    const MatrixSpaceMap phi = example_swap_map();
    const AnalysisResult r = analyze(phi);
    REQUIRE(r.verdict == Verdict::NotPreserver);
    REQUIRE(r.witness);
    CHECK(r.witness->a == -identity(2));
    CHECK(r.witness->image == m2(0, -1, -1, 0));
    check_witness(phi, *r.witness);
  }
  SUBCASE("transpose") {
    const AnalysisResult r = analyze(transpose_map(3));
    REQUIRE(r.verdict == Verdict::StandardPreserver);
    CHECK(r.form->transposed);
    CHECK(r.form->c == doctest::Approx(1.0));
    CHECK((r.form->p - identity(3) / std::sqrt(3.0)).norm() < 1e-14);
  }
  SUBCASE("not bijective") {
    CHECK(analyze(from_two_sided(m2(1, 0, 0, 0), identity(2), false)).verdict == Verdict::NotBijective);
  }
  SUBCASE("one dimension") {
    const AnalysisResult good = analyze({1, Matrix::Constant(1, 1, 2.5)});
    REQUIRE(good.verdict == Verdict::StandardPreserver);
    CHECK(good.form->c == 2.5);
    const AnalysisResult bad = analyze({1, Matrix::Constant(1, 1, -2.0)});
    REQUIRE(bad.verdict == Verdict::NotPreserver);
    CHECK(bad.witness->a(0, 0) == 1.0);
  }
}

TEST_CASE("analyze recovers random standard forms, gauge-invariantly") {
  for (int k = 0; k < 300; ++k) {
    Rng rng = make_rng(53, k);
    const Eigen::Index n = uniform_int(2, 6, rng);
    const StandardForm sf{std::exp(uniform(-2, 2, rng)), random_conditioned(n, 100.0, rng), k % 2 == 1};
    const double lambda = uniform(0.1, 10.0, rng) * (k % 3 == 0 ? -1.0 : 1.0);
    const AnalysisResult r = analyze(from_standard({sf.c, lambda * sf.p, sf.transposed}));
    REQUIRE(r.verdict == Verdict::StandardPreserver);
    CHECK(std::abs(r.form->c - sf.c) <= 1e-9 * sf.c);
    CHECK(r.form->transposed == sf.transposed);
    CHECK((r.form->p - normalize_conjugator(sf.p)).norm() <= 1e-8);
  }
}

TEST_CASE("falsify_preservation") {
  const MatrixSpaceMap phi = example_swap_map();
  const auto w = falsify_preservation(phi, MatrixSet::KStar, 10);
  REQUIRE(w);
  check_witness(phi, *w);
  CHECK_FALSE(falsify_preservation(identity_map(3), MatrixSet::KStar, 500));
  CHECK_FALSE(falsify_preservation(identity_map(3), MatrixSet::K, 500));
  CHECK_FALSE(falsify_preservation(phi, MatrixSet::KStar, 0));
  CHECK_THROWS_AS(falsify_preservation(phi, MatrixSet::Closure, 10), Error);

  SUBCASE("deterministic per seed") {
    Rng rng = make_rng(54);
    const MatrixSpaceMap m = from_two_sided(random_gaussian(3, 3, rng), random_gaussian(3, 3, rng), true);
    const auto a = falsify_preservation(m, MatrixSet::KStar, 1000, {}, 7);
    const auto b = falsify_preservation(m, MatrixSet::KStar, 1000, {}, 7);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(a->a == b->a);
  }
  SUBCASE("diag(1, 2) right factor agrees with analyze") {
    Matrix q = identity(2);
    q(1, 1) = 2.0;
    const MatrixSpaceMap m = from_two_sided(identity(2), q, false);
    const auto w = falsify_preservation(m, MatrixSet::KStar, 10000);
    const AnalysisResult r = analyze(m);
    CHECK(r.verdict != Verdict::StandardPreserver);
    CHECK(w.has_value() == (r.verdict == Verdict::NotPreserver));
    if (w) check_witness(m, *w);
  }
}

TEST_CASE("two-sided non-preservers are falsified") {
  int found = 0, total = 0;
  for (int k = 0; k < 100; ++k) {
    Rng rng = make_rng(55, k);
    const Eigen::Index n = uniform_int(2, 4, rng);
    const MatrixSpaceMap m = from_two_sided(random_gaussian(n, n, rng), random_gaussian(n, n, rng), k % 2 == 0);
    ++total;
    if (const auto w = falsify_preservation(m, MatrixSet::KStar, 10000, {}, k)) {
      check_witness(m, *w);
      ++found;
    }
  }
  CHECK(found >= 99 * total / 100);
}

TEST_CASE("gadgets cover a K*-member M with a defective paired negative eigenvalue") {
  // M = S (J_2(-1) (+) J_2(-1) (+) 2) S^{-1} lies in K*, so I is no witness.
  Matrix j = Matrix::Zero(5, 5);
  j(0, 0) = j(1, 1) = j(2, 2) = j(3, 3) = -1.0;
  j(0, 1) = j(2, 3) = 1.0;
  j(4, 4) = 2.0;
  Rng rng = make_rng(56);
  const Matrix s = random_conditioned(5, 5.0, rng);
  const MatrixSpaceMap phi = from_two_sided(identity(5), s * j * s.inverse(), false);
  const auto w = falsify_preservation(phi, MatrixSet::KStar, 200);
  REQUIRE(w);
  check_witness(phi, *w);
}

TEST_CASE("check_gl_preservation") {
  CHECK(check_gl_preservation(identity_map(3), 50).preserves);
  Rng rng = make_rng(57);
  CHECK(check_gl_preservation(from_standard({2.0, random_conditioned(4, 10.0, rng), true}), 50).preserves);
  // Swapping entries (0,0) and (0,1) makes a generic rank-one matrix invertible.
  Matrix big = identity(4);
  big.row(0).swap(big.row(2));
  const GlCheck g = check_gl_preservation({2, big}, 200);
  CHECK_FALSE(g.preserves);
  REQUIRE(g.witness);
}

TEST_CASE("two_sided_factors recovers M = QP") {
  Rng rng = make_rng(58);
  const Matrix p = random_gaussian(3, 3, rng), q = random_gaussian(3, 3, rng);
  for (bool t : {false, true}) {
    const auto f = two_sided_factors(from_two_sided(p, q, t));
    REQUIRE(f);
    CHECK(f->transposed == t);
    CHECK((f->q * f->p - q * p).norm() <= 1e-10 * (q * p).norm());
  }
  Matrix big = identity(4);
  big.row(0).swap(big.row(2));
  CHECK_FALSE(two_sided_factors({2, big}));
}
