#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "quasivar/witness.hpp"

using namespace quasivar;

namespace {

std::shared_ptr<const FinStructure> shared(const std::string& name) { return fixtures::loader().structure(fixtures::data(name)); }

std::vector<Atom> conj(const FinStructure& a, const std::string& text, const std::vector<Variable>& vars) {
  return parse_conjunction(text, scope_of(a, vars));
}

const std::vector<Variable> X{{"x", 0}};
const std::vector<Variable> Y{{"y", 0}};
const std::vector<Variable> Z{{"z", 0}};

}  // namespace

TEST(Points, Examples) {
  auto sl3 = shared("sl3.struct");
  EXPECT_EQ(rational_points(sl3, X, conj(*sl3, "x = x", X)).points.size(), 3u);
  // upper set of 1 in the chain 0 < 1 < 2
  auto up = rational_points(sl3, X, conj(*sl3, "meet(x, x) = x & meet(x, 1) = 1", X));
  EXPECT_EQ(up.points, (std::vector<std::vector<int>>{{1}, {2}}));
  EXPECT_TRUE(rational_points(sl3, X, conj(*sl3, "x = 0 & x = 1", X)).empty());
}

TEST(Points, ATypeOfPoints) {
  auto c2 = shared("chain2.struct");
  auto u = make_universe(c2, X, 1);
  auto single = atype_of_points(u, {{1}});
  EXPECT_EQ(single.type, AType::of_values(u, *c2, u->evaluate(*c2, nullptr, {1})));
  auto none = atype_of_points(u, {});
  EXPECT_TRUE(none.degenerate);
  EXPECT_TRUE(none.type.is_full());
  auto both = atype_of_points(u, {{0}, {1}});
  EXPECT_TRUE(both.type.subset_of(single.type));
  EXPECT_FALSE(both.type.contains(parse_atom("leq(x, 0)", scope_of(*c2, X))));
  EXPECT_TRUE(both.type.contains(parse_atom("leq(0, x)", scope_of(*c2, X))));
}

TEST(Nullstellensatz, TrivialStructure) {
  auto one = std::make_shared<const FinStructure>(trivial_structure(fixtures::sig("semilattice.sig")));
  Context ctx{{*one}, 1, 2};
  auto rep = check_nullstellensatz(one, X, {}, ctx);
  EXPECT_TRUE(rep.equal);
  EXPECT_TRUE(rep.left.type.is_full());
}

TEST(Nullstellensatz, Z4IsNotGeometricallyClosed) {
  auto z4 = shared("z4.struct");
  Context ctx{{fixtures::load("z2.struct"), fixtures::load("z3.struct")}, 3, 1};
  auto rep = check_nullstellensatz(z4, X, {}, ctx);
  EXPECT_FALSE(rep.ambient_in_wk);
  EXPECT_FALSE(rep.equal);
  // 2 = 0 lies in the radical but fails at every point of ℤ/4
  EXPECT_FALSE(rep.right_only.empty());
  EXPECT_TRUE(rep.left.type.subset_of(rep.right.radical));
}

TEST(Nullstellensatz, SemilatticeAgainstItself) {
  auto sl2 = shared("sl2.struct");
  Context ctx{{*sl2}, 2, 2};
  auto rep = check_nullstellensatz(sl2, X, conj(*sl2, "meet(x, x) = x", X), ctx);
  EXPECT_TRUE(rep.ambient_in_wk);
  EXPECT_TRUE(rep.right.radical.subset_of(rep.left.type));
  // homs collapsing the parameters make √π⁺ strictly smaller: meet(x, 0) = 0 separates
  EXPECT_FALSE(rep.equal);
  EXPECT_FALSE(rep.left_only.empty());
}

TEST(CoordinateAlgebra, SinglePointIsA) {
  auto sl3 = shared("sl3.struct");
  auto v = rational_points(sl3, X, conj(*sl3, "x = 1", X));
  auto ca = coordinate_algebra(v, 2);
  EXPECT_EQ(ca.algebra.structure.size(0), 3);
  EXPECT_TRUE(ca.onto_depth_part);
  EXPECT_EQ(ca.embeds_in_power, std::optional<bool>(true));
}

TEST(CoordinateAlgebra, WholeLine) {
  auto sl3 = shared("sl3.struct");
  auto ca = coordinate_algebra(rational_points(sl3, X, {}), 2);
  // constants 0, 1, 2, the identity, and x ∧ 1
  EXPECT_EQ(ca.algebra.structure.size(0), 5);
  EXPECT_EQ(ca.classes_at_depth, 5);
  EXPECT_TRUE(ca.onto_depth_part);
  EXPECT_EQ(ca.algebra.reached_depth, 1);
}

TEST(CoordinateAlgebra, EmptyVarietyIsDegenerate) {
  auto sl3 = shared("sl3.struct");
  auto ca = coordinate_algebra(rational_points(sl3, X, conj(*sl3, "x = 0 & x = 1", X)), 1);
  EXPECT_TRUE(ca.degenerate);
  EXPECT_EQ(ca.algebra.structure.size(0), 1);
}

TEST(Witness, MeetWithParameter) {
  auto sl3 = shared("sl3.struct");
  Context ctx{{fixtures::load("sl2.struct"), *sl3}, 3, 1};
  WitnessQuery q{sl3, X, Y, conj(*sl3, "y = meet(x, 1)", {X[0], Y[0]}), {}};
  auto r = extract_witness_terms(q, ctx);
  ASSERT_TRUE(r.terms.has_value());
  EXPECT_EQ(print_term(r.terms->at(0)), "meet(1, x)");
  EXPECT_TRUE(r.verified);
}

TEST(Witness, IdentityTerm) {
  auto sl3 = shared("sl3.struct");
  Context ctx{{*sl3}, 3, 1};
  WitnessQuery q{sl3, X, Y, conj(*sl3, "meet(y, x) = y & meet(x, y) = x", {X[0], Y[0]}), {}};
  auto r = extract_witness_terms(q, ctx);
  ASSERT_TRUE(r.terms.has_value());
  EXPECT_EQ(print_term(r.terms->at(0)), "x");
}

TEST(Witness, NoneWithinBound) {
  auto sl3 = shared("sl3.struct");
  Context ctx{{*sl3}, 3, 1};
  WitnessQuery q{sl3, X, Y, conj(*sl3, "y = meet(meet(x, 1), 2)", {X[0], Y[0]}), {}};
  auto r = extract_witness_terms(q, ctx);
  EXPECT_FALSE(r.terms.has_value());
  EXPECT_EQ(r.missing_output, 0);
  ctx.depth = 2;
  EXPECT_TRUE(extract_witness_terms(q, ctx).terms.has_value());
}

TEST(Witness, GroupInverse) {
  auto c2 = shared("c2.struct");
  Context ctx{{*c2, fixtures::load("s3.struct")}, 6, 1};
  std::vector<Variable> xg{{"x", 0}}, yg{{"y", 0}};
  WitnessQuery q{c2, xg, yg, conj(*c2, "mul(x, y) = e", {xg[0], yg[0]}), {}};
  auto r = extract_witness_terms(q, ctx);
  ASSERT_TRUE(r.terms.has_value());
  EXPECT_EQ(print_term(r.terms->at(0)), "inv(x)");
}

TEST(Witness, NonFunctionalRejected) {
  auto sl3 = shared("sl3.struct");
  Context ctx{{*sl3}, 3, 1};
  WitnessQuery q{sl3, X, Y, conj(*sl3, "meet(x, y) = y", {X[0], Y[0]}), {}};
  EXPECT_THROW(extract_witness_terms(q, ctx), InputError);
}

TEST(Morphism, ComposeMeets) {
  auto sl3 = shared("sl3.struct");
  Context ctx{{*sl3}, 3, 1};
  auto line_x = rational_points(sl3, X, {});
  auto line_y = rational_points(sl3, Y, {});
  auto line_z = rational_points(sl3, Z, {});
  auto f = check_morphism(line_x, line_y, conj(*sl3, "y = meet(x, 2)", {X[0], Y[0]}), ctx);
  auto g = check_morphism(line_y, line_z, conj(*sl3, "z = meet(y, 1)", {Y[0], Z[0]}), ctx);
  ASSERT_TRUE(f.ok) << f.failure;
  ASSERT_TRUE(g.ok) << g.failure;
  auto gf = compose_morphisms(f.morphism, g.morphism, ctx);
  EXPECT_TRUE(gf.check.ok) << gf.check.failure;
  EXPECT_TRUE(gf.graph_agrees);
  auto direct = check_morphism(line_x, line_z, conj(*sl3, "z = meet(x, 1)", {X[0], Z[0]}), ctx);
  EXPECT_EQ(gf.morphism.graph, direct.morphism.graph);
}

TEST(Morphism, IdentityLaw) {
  auto sl3 = shared("sl3.struct");
  Context ctx{{*sl3}, 3, 1};
  auto v = rational_points(sl3, X, conj(*sl3, "meet(x, 1) = 1", X));
  auto w = rational_points(sl3, Y, conj(*sl3, "meet(y, 1) = 1", Y));
  auto id = check_morphism(v, w, conj(*sl3, "meet(x, 1) = 1 & y = x", {X[0], Y[0]}), ctx);
  ASSERT_TRUE(id.ok) << id.failure;
  EXPECT_EQ(id.morphism.graph, v.points);
  auto lz = rational_points(sl3, Z, {});
  auto f = check_morphism(w, lz, conj(*sl3, "meet(y, 1) = 1 & z = meet(y, 0)", {Y[0], Z[0]}), ctx);
  ASSERT_TRUE(f.ok) << f.failure;
  auto fid = compose_morphisms(id.morphism, f.morphism, ctx);
  EXPECT_TRUE(fid.graph_agrees);
  EXPECT_EQ(fid.morphism.graph, f.morphism.graph);
}

TEST(Morphism, OutsideTargetFails) {
  auto sl3 = shared("sl3.struct");
  Context ctx{{*sl3}, 3, 1};
  auto v = rational_points(sl3, X, {});
  auto w = rational_points(sl3, Y, conj(*sl3, "meet(y, 1) = 1", Y));
  auto f = check_morphism(v, w, conj(*sl3, "y = x", {X[0], Y[0]}), ctx);
  EXPECT_FALSE(f.ok);
}

// Points of a random a-type over A ∈ W_K satisfy its radical.
TEST(Property, RationalPointsSatisfyRadical) {
  std::mt19937 rng(3);
  auto sl3 = shared("sl3.struct");
  Context ctx{{fixtures::load("sl2.struct")}, 2, 2};
  std::vector<Variable> xy{{"x", 0}, {"y", 0}};
  auto u = make_universe(sl3, xy, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Atom> pi;
    for (int i = 0; i < 1 + static_cast<int>(rng() % 2); ++i)
      pi.push_back(Atom::equality(u->term(rng() % u->size()), u->term(rng() % u->size())));
    auto rep = check_nullstellensatz(sl3, xy, pi, ctx);
    EXPECT_TRUE(rep.ambient_in_wk);
    EXPECT_TRUE(rep.right.radical.subset_of(rep.left.type));
  }
}
