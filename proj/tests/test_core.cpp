#include <gtest/gtest.h>

#include <random>

#include "virmod/confluent.hpp"
#include "virmod/linalg.hpp"
#include "virmod/multipoly.hpp"
#include "virmod/rational.hpp"
#include "test_util.hpp"

using namespace virmod;
using testutil::R;

// ---- Rational -------------------------------------------------------------

TEST(Rational, CanonicalForm) {
  EXPECT_EQ(Rational(6, -4).to_string(), "-3/2");
  EXPECT_EQ(Rational::parse(" 10/4 ").to_string(), "5/2");
  EXPECT_EQ(Rational::parse("-7").to_string(), "-7");
  EXPECT_THROW(Rational::parse("1/0"), parse_error);
  EXPECT_THROW(Rational::parse("x"), parse_error);
  EXPECT_THROW(Rational::parse(""), parse_error);
}

TEST(Rational, MatchesGmpAcrossFastPathBoundary) {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 2000; ++it) {
    auto pick = [&]() -> mpq_class {
      int bits = static_cast<int>(rng() % 90);
      mpz_class n = 1;
      n <<= bits;
      n += static_cast<unsigned long>(rng() % 1000);
      if (rng() % 2) n = -n;
      mpz_class d = 1 + static_cast<unsigned long>(rng() % 97);
      if (rng() % 3 == 0) d <<= static_cast<unsigned>(rng() % 70);
      mpq_class q(n, d);
      q.canonicalize();
      return q;
    };
    mpq_class a = pick(), b = pick();
    Rational ra(a), rb(b);
    EXPECT_EQ((ra + rb).to_mpq(), mpq_class(a + b));
    EXPECT_EQ((ra - rb).to_mpq(), mpq_class(a - b));
    EXPECT_EQ((ra * rb).to_mpq(), mpq_class(a * b));
    if (b != 0) {
      EXPECT_EQ((ra / rb).to_mpq(), mpq_class(a / b));
    }
    EXPECT_EQ(ra < rb, a < b);
    EXPECT_EQ(ra == rb, a == b);
  }
}

TEST(Rational, PowAndBinomial) {
  EXPECT_EQ(pow(Rational(2), -3), Rational(1, 8));
  EXPECT_EQ(pow(Rational(-3, 2), 3), Rational(-27, 8));
  EXPECT_EQ(binomial(5, 2), Rational(10));
  EXPECT_EQ(binomial(3, 4), Rational(0));
  EXPECT_EQ(binomial(3, -1), Rational(0));
}

// ---- MultiPoly --------------------------------------------------------------

namespace {
const VariableTable& tv() {
  static const VariableTable v{"T"};
  return v;
}
const VariableTable& dtv() {
  static const VariableTable v{"D", "T"};
  return v;
}
MultiPoly T() { return MultiPoly::variable(tv(), "T"); }
MultiPoly C(const VariableTable& v, Rational c) { return MultiPoly::constant(v, c); }
}  // namespace

TEST(MultiPoly, Add) {
  EXPECT_TRUE((T() + (-T())).is_zero());
  MultiPoly D = MultiPoly::variable(dtv(), "D");
  EXPECT_EQ((D + C(dtv(), 1)) + D, D.scaled(2) + C(dtv(), 1));
  EXPECT_EQ((T() * T() + C(tv(), R("1/2"))) + C(tv(), R("1/2")), T() * T() + C(tv(), 1));
  EXPECT_THROW(T() + MultiPoly::variable(dtv(), "T"), mismatch_error);
}

TEST(MultiPoly, Mul) {
  MultiPoly D = MultiPoly::variable(dtv(), "D");
  MultiPoly dm2 = D - C(dtv(), 2);
  EXPECT_EQ(dm2 * dm2, D * D - D.scaled(4) + C(dtv(), 4));
  EXPECT_TRUE((dm2 * MultiPoly(dtv())).is_zero());
  EXPECT_EQ((T() - C(tv(), 3)) * (T() + C(tv(), 3)), T() * T() - C(tv(), 9));
}

TEST(MultiPoly, PowLinear) {
  EXPECT_EQ(poly_pow_linear(dtv(), "D", 1, 0), C(dtv(), 1));
  MultiPoly D = MultiPoly::variable(dtv(), "D");
  EXPECT_EQ(poly_pow_linear(dtv(), "D", 2, 2), D * D - D.scaled(4) + C(dtv(), 4));
  // oracle: repeated multiplication
  MultiPoly dp1 = D + C(dtv(), 1);
  EXPECT_EQ(poly_pow_linear(dtv(), "D", -1, 3), dp1 * dp1 * dp1);
}

TEST(MultiPoly, Derive) {
  EXPECT_EQ(poly_derive(T().pow(3), "T"), T().pow(2).scaled(3));
  MultiPoly D = MultiPoly::variable(dtv(), "D");
  MultiPoly t = MultiPoly::variable(dtv(), "T");
  EXPECT_TRUE(poly_derive(D * D, "T").is_zero());
  EXPECT_EQ(poly_derive(t * D.scaled(2) + t * t, "T"), D.scaled(2) + t.scaled(2));
}

TEST(MultiPoly, DivLinear) {
  EXPECT_EQ(poly_div_linear(T() * T() - C(tv(), 9), "T", 3), T() + C(tv(), 3));
  EXPECT_EQ(poly_div_linear(T().scaled(2) - C(tv(), 10), "T", 5), C(tv(), 2));
  EXPECT_EQ(poly_div_linear(T().pow(3) - C(tv(), 8), "T", 2), T() * T() + T().scaled(2) + C(tv(), 4));
  EXPECT_THROW(poly_div_linear(T() * T(), "T", 1), precondition_error);
}

TEST(MultiPoly, DivLinearRoundTrip) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    MultiPoly q = testutil::random_poly(rng, tv(), 6);
    Rational a = testutil::random_rational(rng, 5);
    MultiPoly p = q * (T() - C(tv(), a));
    EXPECT_EQ(poly_div_linear(p, "T", a), q);
  }
}

TEST(MultiPoly, Substitute) {
  VariableTable v{"D1", "U", "D2", "T"};
  MultiPoly d1 = MultiPoly::variable(v, "D1"), d2 = MultiPoly::variable(v, "D2"), u = MultiPoly::variable(v, "U");
  MultiPoly rep = u - d1;
  EXPECT_EQ(poly_substitute(d2, "D2", rep), u - d1);
  EXPECT_EQ(poly_substitute(d1 * d2, "D2", rep), d1 * u - d1 * d1);
  EXPECT_EQ(poly_evaluate(T() * T() + C(tv(), 1), "T", 0), C(tv(), 1));
}

TEST(MultiPoly, SubstituteIsRingHomomorphism) {
  std::mt19937_64 rng(12);
  VariableTable v{"D", "T"};
  for (int it = 0; it < 100; ++it) {
    MultiPoly a = testutil::random_poly(rng, v, 3), b = testutil::random_poly(rng, v, 3);
    MultiPoly rep = testutil::random_poly(rng, v, 2);
    EXPECT_EQ(poly_substitute(a + b, "T", rep), poly_substitute(a, "T", rep) + poly_substitute(b, "T", rep));
    EXPECT_EQ(poly_substitute(a * b, "T", rep), poly_substitute(a, "T", rep) * poly_substitute(b, "T", rep));
  }
}

// ---- linear algebra ---------------------------------------------------------

TEST(Linalg, ExactRank) {
  EXPECT_EQ(exact_rank(std::vector<SparseVector>{}), 0u);
  EXPECT_EQ(exact_rank(Matrix{{1, 0}, {0, 1}, {1, 1}}), 2u);
  EXPECT_EQ(exact_rank(Matrix{{1, 2, 3}, {2, 4, 6}}), 1u);
}

TEST(Linalg, RankInvariantUnderScalingAndPermutation) {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 100; ++it) {
    std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        m(i, j) = rng() % 3 == 0 ? Rational() : testutil::random_rational(rng, 3);
    // make some rows dependent
    if (rows > 2)
      for (std::size_t j = 0; j < cols; ++j) m(rows - 1, j) = m(0, j) + m(1, j) * Rational(2);
    std::size_t r = exact_rank(m);
    Matrix s = m;
    std::vector<std::size_t> perm(rows);
    for (std::size_t i = 0; i < rows; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < rows; ++i) {
      Rational c = testutil::random_rational(rng, 5);
      if (c.is_zero()) c = 1;
      for (std::size_t j = 0; j < cols; ++j) s(i, j) = m(perm[i], j) * c;
    }
    EXPECT_EQ(exact_rank(s), r);
  }
}

TEST(Linalg, SolveSquare) {
  auto x = solve_square(Matrix::identity(3), {{1, 2, 3}});
  EXPECT_EQ(x[0], (std::vector<Rational>{1, 2, 3}));
  auto y = solve_square(Matrix{{1, 1}, {1, 2}}, {{3, 5}});
  EXPECT_EQ(y[0], (std::vector<Rational>{1, 2}));
  try {
    solve_square(Matrix{{1, 1}, {2, 2}}, {{1, 1}});
    FAIL() << "expected singular";
  } catch (const singular_matrix_error& e) {
    EXPECT_EQ(e.kernel(), (std::vector<Rational>{-1, 1}));
  }
}

// ---- confluent Vandermonde --------------------------------------------------

TEST(Confluent, Matrix) {
  Rational l(5, 2), l1(2), l2(-3);
  EXPECT_EQ(confluent_vandermonde({{l}, {1}, 0}), (Matrix{{1}}));
  EXPECT_EQ(confluent_vandermonde({{l1, l2}, {1, 1}, 0}), (Matrix{{1, 1}, {l1, l2}}));
  EXPECT_EQ(confluent_vandermonde({{l}, {2}, 0}), (Matrix{{1, 0}, {l, l}}));
}

TEST(Confluent, FormulaExamples) {
  Rational l1(2), l2(-3, 4), l(7, 5);
  EXPECT_EQ(confluent_det_formula({{l1, l2}, {1, 1}, 0}), l2 - l1);
  EXPECT_EQ(confluent_det_formula({{l}, {2}, 0}), l);
  EXPECT_EQ(confluent_det_formula({{3}, {1}, 5}), pow(Rational(3), 5));
  EXPECT_EQ(confluent_det_formula({{l}, {3}, 0}), Rational(2) * pow(l, 3));
  EXPECT_THROW(confluent_det_formula({{2, 2}, {1, 1}, 0}), precondition_error);
}

TEST(Confluent, FormulaMatchesCofactorExpansion) {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 150; ++it) {
    ConfluentSpec spec = testutil::random_confluent(rng, 6, 4);
    Matrix m = confluent_vandermonde(spec);
    EXPECT_EQ(confluent_det_formula(spec), testutil::cofactor_det(m));
    EXPECT_EQ(determinant(m), testutil::cofactor_det(m));
  }
}
