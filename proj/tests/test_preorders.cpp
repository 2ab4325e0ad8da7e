#include <gtest/gtest.h>

#include "plfocal/preorders.hpp"

using namespace plfocal;

namespace {

DiscreteInvariantSet orbit_of_half() { return DiscreteInvariantSet(thompson_f0(), {Rational(1, 2)}); }

NamedGenerators<PLMap> bs2() {
  GroupPresentationContext ctx;
  ctx.family = Family::BieriStrebel;
  return standard_generators(ctx);
}

std::vector<PLMap> f_plus_ball(int radius) {
  std::vector<PLMap> out;
  for (const auto& b : enumerate_ball(thompson_cfp_generators(), PLMap::identity(Model::UnitInterval), radius))
    out.push_back(project_to_f_plus(b.element, thompson_f0()));
  return out;
}

template <class T>
std::vector<T> elements(const std::vector<BallEntry<T>>& ball) {
  std::vector<T> out;
  for (const auto& b : ball) out.push_back(b.element);
  return out;
}

// Sign oracle that flips the sign of one chosen element.
struct CorruptedEngine {
  using element_type = PLMap;
  JumpEngine inner;
  PLMap victim;
  Sign sign(const PLMap& g) const { return g == victim ? negate(inner.sign(g)) : inner.sign(g); }
  std::string name() const { return "corrupted"; }
};

}  // namespace

TEST(DiscreteInvariantSet, Membership) {
  auto K = orbit_of_half();
  EXPECT_TRUE(K.contains(Rational(1, 2)));
  EXPECT_TRUE(K.contains(Rational(3, 4)));
  EXPECT_TRUE(K.contains(Rational(7, 8)));
  EXPECT_TRUE(K.contains(Rational(1, 4)));
  EXPECT_FALSE(K.contains(Rational(5, 8)));
  EXPECT_THROW(DiscreteInvariantSet(thompson_f0(), {Rational(1, 2), Rational(7, 8)}), Error);
}

TEST(Xg, Examples) {
  auto K = orbit_of_half();
  EXPECT_FALSE(xg(PLMap::identity(Model::UnitInterval), K).has_value());
  EXPECT_FALSE(xg(rescale(thompson_f0(), Rational(9, 16), Rational(5, 8)), K).has_value());
  PLMap g = rescale(thompson_f0(), Rational(1, 2), Rational(7, 8));
  ASSERT_TRUE(xg(g, K).has_value());
  EXPECT_EQ(*xg(g, K), Rational(3, 4));
  EXPECT_THROW(xg(thompson_f0(), K), Error);
}

TEST(RestrictionSign, Examples) {
  auto K = orbit_of_half();
  EXPECT_EQ(restriction_sign(PLMap::identity(Model::UnitInterval), K), Sign::Residue);
  PLMap g = rescale(thompson_f0(), Rational(1, 2), Rational(7, 8));
  EXPECT_EQ(g(Rational(3, 4)), Rational(13, 16));
  EXPECT_EQ(restriction_sign(g, K), Sign::Positive);
  EXPECT_EQ(restriction_sign(inverse(g), K), Sign::Negative);
}

TEST(RestrictionSign, ConjugationByAnchorIsInvariant) {
  auto K = orbit_of_half();
  PLMap f = thompson_f0();
  for (const auto& g : f_plus_ball(3))
    EXPECT_EQ(restriction_sign(f * g * inverse(f), K), restriction_sign(g, K));
}

TEST(JumpSign, Examples) {
  SlopeGroup two({Rational(2)});
  auto std1 = LatticePreorder::standard(1);
  EXPECT_EQ(jump_sign(PLMap::translation(Rational(1)), Side::Right, two, std1), Sign::Residue);
  EXPECT_EQ(jump_sign(bs_scale_minus(Rational(0), Rational(2)), Side::Right, two, std1), Sign::Positive);
  EXPECT_EQ(jump_sign(bs_scale_plus(Rational(0), Rational(2)), Side::Right, two, std1), Sign::Negative);
  EXPECT_EQ(jump_sign(bs_scale_plus(Rational(0), Rational(2)), Side::Right, two, std1.opposite()), Sign::Positive);
}

TEST(JumpSign, SlopeOutsideGroup) {
  SlopeGroup two({Rational(2)});
  try {
    jump_sign(bs_scale_plus(Rational(0), Rational(3)), Side::Right, two, LatticePreorder::standard(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SlopeNotInGroup);
  }
}

TEST(PrimeJumpSign, Examples) {
  PLMap id = PLMap::identity(Model::UnitInterval);
  for (long q : {2L, 3L, 5L}) EXPECT_EQ(prime_jump_sign(id, mpz_class(q)), Sign::Residue);
  PLMap g = PLMap::interval_from_points({{Rational(0), Rational(0)}, {Rational(3, 4), Rational(1, 4)}, {Rational(1), Rational(1)}});
  EXPECT_EQ(prime_jump_sign(g, mpz_class(3)), Sign::Positive);
  EXPECT_EQ(prime_jump_sign(g, mpz_class(2)), Sign::Residue);
  PLMap f0 = thompson_f0();
  EXPECT_EQ(combined_prime_sign(f0), prime_jump_sign(f0, mpz_class(2)));
  EXPECT_THROW(prime_jump_sign(PLMap::translation(Rational(1)), mpz_class(2)), Error);
}

TEST(Escaping, Examples) {
  EscapingContext ctx(thompson_f0(), Rational(1, 2));
  PLMap f0 = thompson_f0();
  PLMap g = rescale(f0, Rational(1, 4), Rational(5, 8));
  EXPECT_EQ(escaping_compare(g, g, ctx), Sign::Residue);
  for (long n = -3; n <= 3; ++n)
    EXPECT_EQ(escaping_compare(power(f0, n), PLMap::identity(Model::UnitInterval), ctx), Sign::Residue);
  EXPECT_EQ(escaping_compare(g, PLMap::identity(Model::UnitInterval), ctx), Sign::Positive);
  EXPECT_EQ(escaping_compare(PLMap::identity(Model::UnitInterval), g, ctx), Sign::Negative);
}

TEST(Axioms, RestrictionOnFPlus) {
  auto rep = axioms_report(RestrictionEngine(orbit_of_half()), f_plus_ball(3));
  EXPECT_TRUE(rep.pass) << rep.axiom;
  EXPECT_GT(rep.pairs_checked, 0u);
}

TEST(Axioms, JumpEngines) {
  auto samples = elements(enumerate_ball(bs2(), PLMap::identity(Model::Line), 3));
  SlopeGroup two({Rational(2)});
  for (Side s : {Side::Right, Side::Left})
    for (const auto& o : {LatticePreorder::standard(1), LatticePreorder::standard(1).opposite()}) {
      auto rep = axioms_report(JumpEngine(s, two, o), samples);
      EXPECT_TRUE(rep.pass) << rep.axiom;
    }
}

TEST(Axioms, CorruptedEngineFailsWithWitness) {
  auto samples = elements(enumerate_ball(bs2(), PLMap::identity(Model::Line), 2));
  SlopeGroup two({Rational(2)});
  CorruptedEngine bad{JumpEngine(Side::Right, two, LatticePreorder::standard(1)), bs_scale_plus(Rational(0), Rational(2))};
  auto rep = axioms_report(bad, samples);
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(rep.witness.empty());
}

TEST(Axioms, PointStabilizer) {
  auto samples = elements(enumerate_ball(thompson_cfp_generators(), PLMap::identity(Model::UnitInterval), 3));
  auto rep = axioms_report(PointEngine(Rational(1, 3)), samples);
  EXPECT_TRUE(rep.pass) << rep.axiom;
}
