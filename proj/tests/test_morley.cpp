#include <gtest/gtest.h>

#include "families.hpp"
#include "fixtures.hpp"
#include "quasivar/morley.hpp"

using namespace quasivar;

namespace {

std::shared_ptr<const FinStructure> shared(const std::string& name) { return fixtures::loader().structure(fixtures::data(name)); }

std::set<std::vector<int>> tuples_of(const FinStructure& a, int r) {
  std::set<std::vector<int>> out;
  for (TupleCounter tc(a.arg_sizes(a.signature().relations()[r].args)); !tc.done(); tc.next())
    if (a.holds(r, tc.digits())) out.insert(tc.digits());
  return out;
}

}  // namespace

TEST(StarSignature, PosetGainsComplements) {
  auto ss = morleyize_signature(fixtures::sig("poset.sig"));
  ASSERT_EQ(ss.star->relations().size(), 3u);
  EXPECT_EQ(ss.star->relations()[0].name, "leq");
  EXPECT_EQ(ss.star->relations()[ss.starred[0]].name, "leq_star");
  EXPECT_EQ(ss.star->relations()[ss.unequal[0]].name, "eq_star_s");
}

TEST(StarSignature, RingGainsOnlyDisequality) {
  auto base = fixtures::sig("ring.sig");
  auto ss = morleyize_signature(base);
  EXPECT_EQ(ss.star->functions(), base->functions());
  EXPECT_EQ(ss.star->constants(), base->constants());
  ASSERT_EQ(ss.star->relations().size(), 1u);
}

TEST(StarSignature, CollisionRejected) {
  auto sig = std::make_shared<Signature>(parse_signature("sort s\nrel leq : s s\nrel leq_star : s s\n"));
  EXPECT_THROW(morleyize_signature(sig), InputError);
}

TEST(StarExpand, ChainComplement) {
  auto c2 = fixtures::load("chain2.struct");
  auto ss = morleyize_signature(c2.signature_ptr());
  auto s = star_expand(c2, ss);
  EXPECT_EQ(tuples_of(s, ss.starred[0]), (std::set<std::vector<int>>{{1, 0}}));
  EXPECT_EQ(tuples_of(s, ss.unequal[0]), (std::set<std::vector<int>>{{0, 1}, {1, 0}}));
  EXPECT_TRUE(is_regular(s, ss));
}

TEST(StarExpand, DiscreteComplementIsOffDiagonal) {
  auto d2 = fixtures::load("discrete2.struct");
  auto ss = morleyize_signature(d2.signature_ptr());
  auto s = star_expand(d2, ss);
  EXPECT_EQ(tuples_of(s, ss.starred[0]), (std::set<std::vector<int>>{{0, 1}, {1, 0}}));
}

TEST(StarExpand, OnePointIsNotTrivialAfterExpansion) {
  auto c1 = fixtures::load("chain1.struct");
  auto ss = morleyize_signature(c1.signature_ptr());
  auto s = star_expand(c1, ss);
  EXPECT_TRUE(tuples_of(s, ss.starred[0]).empty());
  EXPECT_FALSE(is_trivial(s));
}

TEST(Regular, FullRelationsAreNotRegular) {
  auto ss = morleyize_signature(fixtures::sig("poset.sig"));
  EXPECT_FALSE(is_regular(trivial_structure(ss.star), ss));
  auto s = star_expand(fixtures::load("chain2.struct"), ss);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      std::vector<int> t{x, y};
      s.set_relation(0, t, true);
      s.set_relation(ss.starred[0], t, true);
    }
  EXPECT_FALSE(is_regular(s, ss));
}

TEST(Strict, FieldsAreStrict) {
  auto th = fixtures::loader().theory(fixtures::data("fields.thy"));
  auto v = is_strict(th);
  EXPECT_TRUE(v.strict);
  ASSERT_TRUE(v.refuting_axiom.has_value());
  EXPECT_EQ(print_sentence(*th.signature, *v.refuting_axiom), "not zero = one");
}

TEST(Strict, EmptyTheoryIsNot) {
  Theory th{"empty", fixtures::sig("poset.sig"), {}};
  EXPECT_FALSE(is_strict(th).strict);
}

TEST(Strict, ChainClassIsNot) {
  auto v = is_strict(std::vector<FinStructure>{fixtures::load("chain2.struct")});
  EXPECT_FALSE(v.strict);
  EXPECT_EQ(v.member, 0);
}

TEST(Strict, StarTheoryIsStrict) {
  auto ss = morleyize_signature(fixtures::sig("ring.sig"));
  auto th = star_theory(Theory{"empty", ss.base, {}}, ss);
  EXPECT_TRUE(is_strict(th).strict);
}

TEST(StarTheory, PrintsAndReparses) {
  auto ss = morleyize_signature(fixtures::sig("poset.sig"));
  auto th = star_theory(Theory{"posets", ss.base, {}}, ss);
  ASSERT_EQ(th.sentences.size(), 4u);
  std::string text = print_theory(th, "poset_star.sig");
  EXPECT_NE(text.find("forall x1:s, x2:s. not leq(x1, x2) & leq_star(x1, x2)"), std::string::npos);
  EXPECT_NE(text.find("forall x1:s, x2:s. true -> x1 = x2 | eq_star_s(x1, x2)"), std::string::npos);
  auto back = parse_theory(text, ss.star);
  EXPECT_EQ(back.sentences, th.sentences);
}

TEST(StarTransfer, MemberOfK) {
  auto r = check_star_transfer(fixtures::load("chain2.struct"), {fixtures::load("chain2.struct")});
  EXPECT_TRUE(r.in_universal);
  EXPECT_TRUE(r.star_in_quasivariety);
}

TEST(StarTransfer, TooBigChain) {
  auto r = check_star_transfer(fixtures::load("chain4.struct"), {fixtures::load("chain3.struct")});
  EXPECT_FALSE(r.in_universal);
  EXPECT_FALSE(r.star_in_quasivariety);
}

TEST(StarTransfer, PointInChain) {
  auto r = check_star_transfer(fixtures::load("chain1.struct"), {fixtures::load("chain2.struct")});
  EXPECT_TRUE(r.in_universal);
  EXPECT_TRUE(r.star_in_quasivariety);
  EXPECT_GT(r.homs_checked, 0);
}

TEST(StarBijection, BottomBelowX) {
  auto c2 = shared("chain2.struct");
  std::vector<Variable> x{{"x", 0}};
  auto pi = std::vector<Atom>{parse_atom("leq(0, x)", scope_of(*c2, x))};
  auto r = star_prime_bijection(c2, x, pi, {fixtures::load("chain2.struct"), fixtures::load("chain3.struct")}, 1);
  EXPECT_TRUE(r.bijection);
  EXPECT_EQ(r.strong_primes.size(), r.star_primes.size());
  // x lands below, between or above the image of 1 in a 3-chain, or equal to 0 or 1
  EXPECT_EQ(r.strong_primes.size(), 4u);
}

TEST(StarBijection, NoExtension) {
  auto c2 = shared("chain2.struct");
  std::vector<Variable> x{{"x", 0}};
  auto pi = std::vector<Atom>{parse_atom("0 = 1", scope_of(*c2, x))};
  auto r = star_prime_bijection(c2, x, pi, {fixtures::load("chain2.struct")}, 1);
  EXPECT_TRUE(r.strong_primes.empty());
  EXPECT_TRUE(r.star_primes.empty());
}

TEST(StarBijection, UniquePoint) {
  auto c2 = shared("chain2.struct");
  std::vector<Variable> x{{"x", 0}};
  auto pi = std::vector<Atom>{parse_atom("x = 1", scope_of(*c2, x))};
  auto r = star_prime_bijection(c2, x, pi, {fixtures::load("chain2.struct")}, 1);
  EXPECT_EQ(r.strong_primes.size(), 1u);
  EXPECT_EQ(r.star_primes.size(), 1u);
}

TEST(StarProperty, ExpansionsAreRegularAndLemmasHold) {
  auto sig = fixtures::sig("poset.sig");
  auto fam = families::up_to(2, [&](int n) { return families::all_binary_relations(sig, n); });
  auto ss = morleyize_signature(sig);
  std::vector<FinStructure> k{fam[5], fam[17]};
  for (const auto& a : fam) {
    EXPECT_TRUE(is_regular(star_expand(a, ss), ss));
    EXPECT_NO_THROW(check_star_transfer(a, k)) << a.name();
  }
}

// existential closedness with m + 1 literals matches geometric closedness of
// the expansion with m premises
TEST(StarProperty, ExistentialClosednessBridge) {
  auto sig = fixtures::sig("poset.sig");
  auto fam = families::up_to(2, [&](int n) { return families::all_binary_relations(sig, n); });
  std::vector<FinStructure> k{fixtures::load("chain3.struct"), fam[9]};
  int closed = 0, open = 0;
  for (const auto& a : fam)
    for (std::optional<int> m : {std::optional<int>(0), std::optional<int>(1), std::optional<int>()}) {
      Scope star_scope{m, 0, 1};
      Scope ec_scope{m ? std::optional<int>(*m + 1) : std::nullopt, 0, 1};
      bool ec = check_existentially_closed(a, k, ec_scope).closed;
      EXPECT_EQ(ec, check_star_geometrically_closed(a, k, star_scope).closed) << a.name();
      (ec ? closed : open)++;
    }
  EXPECT_GT(closed, 0);
  EXPECT_GT(open, 0);
}
