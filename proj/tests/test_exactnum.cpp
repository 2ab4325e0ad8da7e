#include <gtest/gtest.h>

#include <random>

#include "plfocal/exactnum.hpp"

using namespace plfocal;

TEST(Rational, ArithmeticIsExact) {
  Rational a(1, 3), b(1, 6);
  EXPECT_EQ(a + b, Rational(1, 2));
  EXPECT_EQ(a * b, Rational(1, 18));
  EXPECT_EQ(a / b, Rational(2));
  EXPECT_TRUE(Rational(3, 8).is_dyadic());
  EXPECT_FALSE(Rational(1, 3).is_dyadic());
}

TEST(Rational, ParseForms) {
  EXPECT_EQ(Rational::parse("3/4"), Rational(3, 4));
  EXPECT_EQ(Rational::parse("-5"), Rational(-5));
  EXPECT_EQ(Rational::parse("3/2^3"), Rational(3, 8));
  EXPECT_THROW(Rational::parse("1/0"), Error);
  EXPECT_THROW(Rational::parse("x"), Error);
}

TEST(Dyadic, CanonicalFormAndRoundTrip) {
  Dyadic d(mpz_class(6), 3);
  EXPECT_EQ(d.num(), 3);
  EXPECT_EQ(d.exp(), 2u);
  EXPECT_EQ(Dyadic::parse(d.str()), d);
  EXPECT_EQ(Dyadic(Rational(5, 16)).to_rational(), Rational(5, 16));
  EXPECT_THROW(Dyadic(Rational(1, 3)), Error);
}

TEST(SlopeDecompose, Examples) {
  SlopeGroup two({Rational(2)});
  SlopeGroup two_three({Rational(2), Rational(3)});
  EXPECT_EQ(slope_decompose(Rational(8), two), (ExpVec{3}));
  EXPECT_EQ(slope_decompose(Rational(1), two_three), (ExpVec{0, 0}));
  EXPECT_EQ(slope_decompose(Rational(6), two_three), (ExpVec{1, 1}));
}

TEST(SlopeDecompose, MatchesExhaustiveSearch) {
  SlopeGroup two_three({Rational(2), Rational(3)});
  Rational target(12, 27);
  ExpVec found;
  for (long a = -8; a <= 8; ++a)
    for (long b = -8; b <= 8; ++b)
      if (Rational::power(Rational(2), a) * Rational::power(Rational(3), b) == target) found = {a, b};
  EXPECT_EQ(slope_decompose(target, two_three), found);
}

TEST(SlopeDecompose, RoundTripOnSampledVectors) {
  SlopeGroup g({Rational(2), Rational(3, 5)});
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    ExpVec v{static_cast<long>(rng() % 17) - 8, static_cast<long>(rng() % 17) - 8};
    EXPECT_EQ(g.decompose(g.compose(v)), v);
  }
}

TEST(SlopeDecompose, Errors) {
  SlopeGroup two({Rational(2)});
  EXPECT_THROW(slope_decompose(Rational(3), two), Error);
  EXPECT_THROW(SlopeGroup({Rational(2), Rational(4)}), Error);
  try {
    SlopeGroup({Rational(2), Rational(8)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndependenceViolation);
  }
}

TEST(LatticeSign, Examples) {
  LatticePreorder std2 = LatticePreorder::standard(2);
  EXPECT_EQ(lattice_sign({0, 0}, std2), Sign::Residue);
  EXPECT_EQ(lattice_sign({0, 0}, std2.opposite()), Sign::Residue);
  EXPECT_EQ(lattice_sign({0, 2}, LatticePreorder(2, {{1, 0}, {0, 1}})), Sign::Positive);
  LatticePreorder first(2, {{1, 0}});
  EXPECT_EQ(lattice_sign({-1, 5}, first), Sign::Negative);
  EXPECT_EQ(lattice_sign({0, 5}, first), Sign::Residue);
  EXPECT_FALSE(first.is_total());
  EXPECT_TRUE(std2.is_total());
}

TEST(LatticeSign, OppositeNegates) {
  LatticePreorder o(2, {{2, -1}});
  for (long a = -3; a <= 3; ++a)
    for (long b = -3; b <= 3; ++b) EXPECT_EQ(o.opposite().sign({a, b}), negate(o.sign({a, b})));
}

TEST(ModuleIndex, Examples) {
  EXPECT_EQ(module_index(2, 1), 1);
  EXPECT_EQ(module_index(3, 2), 1);
  EXPECT_EQ(module_index(5, 2), 3);
  EXPECT_EQ(module_index(3, 1), 2);
  EXPECT_EQ(module_index(5, 3), 2);
}

TEST(ModuleIndex, Errors) {
  try {
    module_index(2, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateSlope);
  }
  EXPECT_THROW(module_index(4, 2), Error);
}

TEST(Factorize, SmallNumbers) {
  auto f = factorize(mpz_class(360));
  EXPECT_EQ(f.at(mpz_class(2)), 3);
  EXPECT_EQ(f.at(mpz_class(3)), 2);
  EXPECT_EQ(f.at(mpz_class(5)), 1);
  EXPECT_EQ(valuation(Rational(9, 8), mpz_class(2)), -3);
}
