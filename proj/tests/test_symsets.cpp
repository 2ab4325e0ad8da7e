#include <gtest/gtest.h>

#include <random>

#include "plfocal/plgroup.hpp"
#include "plfocal/symsets.hpp"

using namespace plfocal;

namespace {

const WordPair kPair("10001", "01110");

std::string random_blocks(std::mt19937& rng, int count) {
  std::string s;
  for (int i = 0; i < count; ++i) s += kPair.block(static_cast<int>(rng() % 2));
  return s;
}

std::string random_bits(std::mt19937& rng, int count) {
  std::string s;
  for (int i = 0; i < count; ++i) s += (rng() % 2) ? '1' : '0';
  return s;
}

// Points of K (blocks only) and arbitrary points, mixed.
std::vector<SetPoint> sample_points(unsigned seed, int count) {
  std::mt19937 rng(seed);
  std::vector<SetPoint> out;
  for (int i = 0; i < count; ++i) {
    long cell = static_cast<long>(rng() % 7) - 3;
    if (i % 2 == 0) out.push_back({cell, random_blocks(rng, static_cast<int>(rng() % 3)), random_blocks(rng, 1 + static_cast<int>(rng() % 2))});
    else out.push_back({cell, random_bits(rng, static_cast<int>(rng() % 8)), random_bits(rng, 1 + static_cast<int>(rng() % 5))});
  }
  return out;
}

PLMap line_bump() {
  return PLMap::line_from_points(Rational(1),
                                 {{Rational(0), Rational(0)}, {Rational(1, 4), Rational(1, 2)},
                                  {Rational(1, 2), Rational(3, 4)}, {Rational(1), Rational(1)}},
                                 Rational(1));
}

}  // namespace

TEST(Cancellation, Examples) {
  EXPECT_TRUE(cancellation_check("0", "1", 10));
  EXPECT_TRUE(cancellation_check("10001", "01110", 20));
  auto rep = cancellation_report("01", "0101", 10);
  EXPECT_FALSE(rep.ok);
  EXPECT_FALSE(rep.witness.empty());
  EXPECT_FALSE(rep.reason.empty());
}

TEST(Cancellation, PrefixThatDoesNotFactor) {
  auto rep = cancellation_report("01", "10", 10);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.witness, "0");
}

TEST(WordPair, Validation) {
  EXPECT_THROW(WordPair("", "1"), Error);
  EXPECT_THROW(WordPair("012", "1"), Error);
  EXPECT_THROW(WordPair("01", "01"), Error);
  EXPECT_FALSE(WordPair("0", "1").non_constant());
  try {
    build_reference(WordPair("0", "1"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidWordPair);
  }
  EXPECT_THROW(build_reference(WordPair("01", "0101")), Error);
}

TEST(SetPoint, ValueAndParse) {
  SetPoint p{2, "1", "01"};
  EXPECT_EQ(p.value(), Rational(2) + Rational(1, 2) + Rational(1, 6));
  SetPoint q = SetPoint::from_rational(p.value());
  EXPECT_EQ(q.value(), p.value());
  EXPECT_EQ(SetPoint::from_rational(Rational(-3, 4)).value(), Rational(-3, 4));
}

TEST(TailSet, ReferenceMembership) {
  TailSet K = build_reference(kPair);
  EXPECT_TRUE(K.contains(SetPoint{0, "", "10001"}));
  EXPECT_TRUE(K.contains(SetPoint{-5, "01110", "1000101110"}));
  EXPECT_FALSE(K.contains(SetPoint{0, "", "1"}));
  EXPECT_FALSE(K.contains(SetPoint{0, "11", "0"}));
  EXPECT_TRUE(K.cells().empty());
  EXPECT_EQ(K.dump(), "K(10001,01110)\n");
}

TEST(TailSet, DumpFormat) {
  TailSet S = build_reference(kPair);
  S.set_cell(1, {});
  S.set_cell(2, {"1", "0111"});
  EXPECT_EQ(S.dump(), "K(10001,01110)\n1: -\n2: 0111 1\n");
  S.set_cell(3, {"10001", "01110"});
  EXPECT_EQ(S.cells().count(3), 0u);  // merged back into the full cell
}

TEST(Image, IdentityAndTranslation) {
  TailSet K = build_reference(kPair);
  EXPECT_EQ(image(PLMap::identity(Model::Line), K), K);
  EXPECT_EQ(image(PLMap::translation(Rational(1)), K), K);
  EXPECT_EQ(image(PLMap::translation(Rational(-3)), K), K);
}

TEST(Image, MembershipOracle) {
  TailSet K = build_reference(kPair);
  auto gens = thompson_line_generators();
  for (const PLMap& g : {gens[1].second, line_bump(), inverse(line_bump()) * gens[0].second}) {
    TailSet gK = image(g, K);
    for (const auto& p : sample_points(5, 60)) EXPECT_EQ(K.contains(p), gK.contains(g(p.value()))) << p.str();
  }
}

TEST(Image, RejectsNonDyadicMaps) {
  TailSet K = build_reference(kPair);
  try {
    image(PLMap::affine(Rational(3), Rational(0)), K);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonDyadicMap);
  }
  EXPECT_THROW(image(thompson_f0(), K), Error);
}

TEST(Alpha, Examples) {
  TailSet K = build_reference(kPair);
  EXPECT_TRUE(alpha(K, K).minus_infinity);
  EXPECT_TRUE(alpha(K, image(PLMap::translation(Rational(1)), K)).minus_infinity);
  TailSet gK = image(line_bump(), K);
  Alpha a = alpha(K, gK);
  ASSERT_FALSE(a.minus_infinity);
  EXPECT_LE(a.value, Rational(1));
  EXPECT_GE(a.value, Rational(0));
  for (const auto& p : sample_points(9, 80)) {
    if (p.value() > a.value) {
      EXPECT_EQ(K.contains(p), gK.contains(p)) << p.str();
    }
  }
}

TEST(MaxBelow, Examples) {
  TailSet K = build_reference(kPair);
  Supremum s = max_below(K, Rational(1));
  EXPECT_TRUE(s.attained);
  EXPECT_EQ(s.value(), Rational(17, 31));
  EXPECT_TRUE(K.contains(s.point));
  EXPECT_EQ(max_below(K, Rational(4)).value(), Rational(3) + Rational(17, 31));
  try {
    max_below(K, Rational(1), Rational(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyBelow);
  }
  EXPECT_THROW(max_below(K, Rational(1, 4), Rational(0)), Error);
}

TEST(MaxBelow, SingleCylinder) {
  TailSet S = build_reference(kPair);
  S.set_cell(0, {"01110"});
  Supremum s = max_below(S, Rational(1));
  EXPECT_TRUE(S.contains(s.point));
  EXPECT_LT(s.value(), Rational(1, 2));
}

TEST(OkCompare, EqualOnSameElement) {
  TailSet K = build_reference(kPair);
  PLMap g = line_bump();
  EXPECT_EQ(ok_compare(g, g, K), Sign::Residue);
  EXPECT_EQ(ok_compare(PLMap::translation(Rational(1)), PLMap::identity(Model::Line), K), Sign::Residue);
  Sign s = ok_compare(g, PLMap::identity(Model::Line), K);
  EXPECT_NE(s, Sign::Residue);
  EXPECT_EQ(ok_compare(PLMap::identity(Model::Line), g, K), negate(s));
}

TEST(PropertyO, Examples) {
  TailSet K = build_reference(kPair);
  EXPECT_TRUE(propertyO_spot(PLMap::identity(Model::Line), K));
  EXPECT_TRUE(propertyO_spot(PLMap::translation(Rational(1)), K));
  EXPECT_TRUE(propertyO_spot(line_bump(), K));
  for (const auto& b : enumerate_ball(thompson_line_generators(), PLMap::identity(Model::Line), 2))
    EXPECT_TRUE(propertyO_spot(b.element, K));
}
