#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <sstream>

#include "cantor/codings.hpp"
#include "cantor/errors.hpp"

using namespace cantor;

namespace {

BitWord W(const char* s) { return BitWord(s); }

BitWord zeros(unsigned n) { return BitWord(std::string(n, '0')); }

// Levels n >= 1 carry the single word 0^{n+1}; the coded null set is {0^ω}.
Presentation zero_point_null(unsigned levels) {
  Presentation p;
  p.ideal = Ideal::N;
  p.resolution = levels;
  p.levels.resize(levels);
  for (unsigned n = 1; n < levels; ++n) p.levels[n] = {zeros(n + 1)};
  return p;
}

bool member(const Verdict& v) { return v.status == VerdictStatus::MemberVerifiedAtBound; }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::ParseError;
}

Point random_point(std::mt19937_64& rng, unsigned max_prefix) {
  Point y;
  for (unsigned i = 0, len = rng() % (max_prefix + 1); i < len; ++i) y.prefix.push_back(rng() & 1);
  y.tail = (rng() & 1) != 0;
  return y;
}

}  // namespace

TEST(Points, ParseAndRestrict) {
  Point y = Point::parse("01(1)");
  EXPECT_EQ(y.str(), "01(1)");
  EXPECT_EQ(y.restrict(5), W("01111"));
  Point bare = Point::parse("0110");
  EXPECT_FALSE(bare.infinite());
  EXPECT_EQ(bare.available(), 4u);
  EXPECT_EQ(kind_of([&] { bare.restrict(5); }), ErrorKind::InsufficientResolution);
  EXPECT_THROW(Point::parse("01(2)"), Error);
}

TEST(Encode, ZeroPointNullSet) {
  Code c = encode(zero_point_null(11));
  EXPECT_EQ(c.shape, CodeShape::Indexed);
  for (unsigned n = 1; n < 11; ++n) EXPECT_TRUE(c.at(n, zeros(n + 1)));
  EXPECT_EQ(c.indexed.size(), 10u);
  EXPECT_FALSE(c.at(3, zeros(3)));
  EXPECT_EQ(phi_check(c, 8).status, VerdictStatus::UnrefutedAtBound);
}

TEST(Psi, ZeroPointNullSet) {
  Code c = encode(zero_point_null(11));
  Verdict in = psi_member(c, Point::parse("(0)"), 10);
  EXPECT_EQ(in.status, VerdictStatus::MemberVerifiedAtBound);
  Verdict out = psi_member(c, Point::parse("(1)"), 10);
  EXPECT_EQ(out.status, VerdictStatus::NonmemberWitness);
  ASSERT_TRUE(out.witness.n.has_value());
  EXPECT_EQ(*out.witness.n, 1u);
  Point y = Point::parse("(1)");
  EXPECT_TRUE(witness_revalidates(c, out, &y));
  EXPECT_EQ(kind_of([&] { psi_member(c, Point::parse("000"), 10); }), ErrorKind::InsufficientResolution);
}

TEST(Phi, NullRefutedByEmptyWordAtLevelTwo) {
  Code c;
  c.ideal = Ideal::N;
  c.indexed = {{2, BitWord()}};
  Verdict v = phi_check(c, 8);
  EXPECT_EQ(v.status, VerdictStatus::Refuted);
  EXPECT_TRUE(v.conclusive);
  EXPECT_EQ(v.witness.n, 2u);
  ASSERT_TRUE(v.witness.m.has_value());
  EXPECT_EQ(v.witness.value, Rational(1));
  EXPECT_TRUE(witness_revalidates(c, v));
  // Level 0 carries no constraint.
  Code zero;
  zero.ideal = Ideal::N;
  zero.indexed = {{0, BitWord()}};
  EXPECT_EQ(phi_check(zero, 8).status, VerdictStatus::UnrefutedAtBound);
}

TEST(Phi, AntichainViolation) {
  Code c;
  c.ideal = Ideal::E;
  for (unsigned n = 0; n <= 8; ++n) c.indexed.insert({n, W("0")}), c.indexed.insert({n, W("1")});
  EXPECT_EQ(phi_check(c, 8).status, VerdictStatus::UnrefutedAtBound);
  c.indexed.insert({3, W("01")});
  Verdict v = phi_check(c, 8);
  ASSERT_EQ(v.status, VerdictStatus::Refuted);
  EXPECT_EQ(v.witness.clause, "antichain");
  EXPECT_EQ(v.witness.n, 3u);
  EXPECT_TRUE(v.witness.sigma->is_prefix_of(*v.witness.tau));
  EXPECT_TRUE(witness_revalidates(c, v));
}

TEST(Encode, FullMeasureAntichain) {
  Presentation p;
  p.ideal = Ideal::E;
  p.resolution = 8;
  p.levels.assign(9, {W("0"), W("1")});
  Code c = encode(p);
  EXPECT_EQ(phi_check(c, 8).status, VerdictStatus::UnrefutedAtBound);
  // Every point lies in every open level, so the complement-style set is empty.
  EXPECT_FALSE(member(psi_member(c, Point::parse("0(1)"), 8)));
  EXPECT_FALSE(direct_member(p, Point::parse("0(1)")));
}

TEST(Encode, MPlusRootWitness) {
  Presentation p;
  p.ideal = Ideal::MPlus;
  p.resolution = 4;
  p.root = W("0");
  p.levels.assign(5, {W("0")});
  Code c = encode(p);
  Verdict v = phi_check(c, 4);
  EXPECT_EQ(v.status, VerdictStatus::UnrefutedAtBound);
  EXPECT_EQ(v.witness.clause, "rho");
  EXPECT_EQ(v.witness.rho, W("0"));
  EXPECT_TRUE(witness_revalidates(c, v));
}

TEST(Psi, NPlusAvoidsMarkedCylinder) {
  Presentation p;
  p.ideal = Ideal::NPlus;
  p.resolution = 3;
  p.k = 3;
  p.words = {W("1")};
  Code c = encode(p);
  EXPECT_EQ(c.shape, CodeShape::Flat);
  EXPECT_TRUE(member(psi_member(c, Point::parse("(0)"), 3)));
  Verdict out = psi_member(c, Point::parse("1(0)"), 3);
  EXPECT_EQ(out.status, VerdictStatus::NonmemberWitness);
  EXPECT_EQ(out.witness.sigma, W("1"));
  Point y = Point::parse("1(0)");
  EXPECT_TRUE(witness_revalidates(c, out, &y));
  Verdict phi = phi_check(c, 3);
  EXPECT_EQ(phi.status, VerdictStatus::UnrefutedAtBound);
  EXPECT_EQ(phi.witness.k, 3u);
}

TEST(Encode, MalformedPresentations) {
  Presentation e;
  e.ideal = Ideal::E;
  e.resolution = 2;
  e.levels.assign(3, {W("0"), W("1")});
  e.levels[1].push_back(W("01"));
  EXPECT_EQ(kind_of([&] { encode(e); }), ErrorKind::MalformedPresentation);

  Presentation n = zero_point_null(4);
  n.levels[2] = {BitWord()};
  EXPECT_EQ(kind_of([&] { encode(n); }), ErrorKind::MalformedPresentation);

  Presentation np;
  np.ideal = Ideal::NPlus;
  np.resolution = 2;
  np.k = 2;
  np.words = {W("0")};
  EXPECT_EQ(kind_of([&] { encode(np); }), ErrorKind::MalformedPresentation);

  Presentation longw = zero_point_null(4);
  longw.levels[1] = {W("00000")};
  EXPECT_EQ(kind_of([&] { encode(longw); }), ErrorKind::MalformedPresentation);

  Presentation m;
  m.ideal = Ideal::M;
  m.resolution = 2;
  m.levels.assign(3, {W("0")});
  EXPECT_EQ(kind_of([&] { encode(m); }), ErrorKind::MalformedPresentation);
}

TEST(Formats, RoundTrips) {
  for (Ideal ideal : {Ideal::M, Ideal::N, Ideal::E, Ideal::MPlus, Ideal::NPlus, Ideal::EPlus}) {
    Presentation p = random_presentation(ideal, 7);
    std::stringstream ps;
    write_presentation(ps, p);
    Presentation back = read_presentation(ps);
    EXPECT_EQ(encode(back), encode(p)) << ideal_name(ideal);
    Code c = encode(p);
    std::stringstream cs;
    write_code(cs, c);
    EXPECT_EQ(read_code(cs), c) << ideal_name(ideal);
    EXPECT_EQ(parse_ideal(ideal_name(ideal)), ideal);
  }
  std::istringstream junk("pres Q 3\n");
  EXPECT_THROW(read_presentation(junk), Error);
  std::istringstream badcode("code flat N+\nxf 012 1\n");
  EXPECT_THROW(read_code(badcode), Error);
}

TEST(CodingsProperty, EncodePhiPsiAgree) {
  std::mt19937_64 rng(51);
  for (Ideal ideal : {Ideal::M, Ideal::N, Ideal::E, Ideal::MPlus, Ideal::NPlus, Ideal::EPlus}) {
    int members = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Presentation p = random_presentation(ideal, seed);
      Code c = encode(p);
      Verdict phi = phi_check(c, 8);
      EXPECT_NE(phi.status, VerdictStatus::Refuted) << ideal_name(ideal) << " seed " << seed << ": " << describe(phi);
      EXPECT_TRUE(witness_revalidates(c, phi));
      for (int i = 0; i < 30; ++i) {
        Point y = random_point(rng, 10);
        Verdict v = psi_member(c, y, 8);
        EXPECT_EQ(member(v), direct_member(p, y)) << ideal_name(ideal) << " " << y.str() << ": " << describe(v);
        EXPECT_TRUE(witness_revalidates(c, v, &y));
        members += member(v);
      }
    }
    EXPECT_GT(members, 0) << ideal_name(ideal);
  }
}

TEST(CodingsProperty, RefutationsRevalidate) {
  // Overloading a valid null code at one level always refutes φ_N with a genuine sum.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Code c = encode(random_presentation(Ideal::N, seed));
    const unsigned n = 1 + seed % 8;
    c.indexed.insert({n, BitWord(std::string(1, seed % 2 ? '1' : '0'))});
    c.indexed.insert({n, BitWord(std::string(1, seed % 2 ? '0' : '1'))});
    Verdict v = phi_check(c, 8);
    ASSERT_EQ(v.status, VerdictStatus::Refuted);
    EXPECT_TRUE(witness_revalidates(c, v));
    Verdict fake = v;
    fake.witness.n = 0;
    EXPECT_FALSE(witness_revalidates(c, fake));
  }
}

TEST(CodingsProperty, PresentationsAreDeterministic) {
  for (Ideal ideal : {Ideal::M, Ideal::EPlus}) {
    std::ostringstream a, b;
    write_presentation(a, random_presentation(ideal, 3));
    write_presentation(b, random_presentation(ideal, 3));
    EXPECT_EQ(a.str(), b.str());
  }
}
