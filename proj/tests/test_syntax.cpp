#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "quasivar/parse.hpp"
#include "quasivar/structure.hpp"

using namespace quasivar;

TEST(Signature, ParsesOneBinaryFunction) {
  auto sig = parse_signature("sort s\nfun meet : s s -> s");
  EXPECT_EQ(sig.sort_count(), 1);
  ASSERT_EQ(sig.functions().size(), 1u);
  EXPECT_EQ(sig.functions()[0].args.size(), 2u);
}

TEST(Signature, RingLanguage) {
  auto sig = parse_signature("sort r\nfun add : r r -> r\nfun neg : r -> r\nfun mul : r r -> r\nconst zero : r\nconst one : r");
  EXPECT_EQ(sig.functions().size(), 3u);
  EXPECT_EQ(sig.constants().size(), 2u);
  EXPECT_TRUE(sig.relations().empty());
}

TEST(Signature, UnknownSortReportsPosition) {
  try {
    parse_signature("rel leq : s s");
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("unknown sort 's'"), std::string::npos);
    EXPECT_NE(msg.find("line 1, column 11"), std::string::npos);
  }
}

TEST(Signature, DuplicateSymbolRejected) {
  EXPECT_THROW(parse_signature("sort s\nfun f : s -> s\nrel f : s"), InputError);
  EXPECT_THROW(parse_signature("sort s\nsort s"), InputError);
}

TEST(Signature, RoundTrip) {
  for (const char* name : {"ring.sig", "poset.sig", "group.sig", "semilattice.sig"}) {
    auto sig = fixtures::sig(name);
    EXPECT_EQ(parse_signature(print_signature(*sig)), *sig) << name;
  }
  auto many = parse_signature("sort a\nsort b\nfun f : a b -> b\nrel r : b a a\nrel p :\nconst c : a");
  EXPECT_EQ(parse_signature(print_signature(many)), many);
}

TEST(Classify, SemiprimeAxiomIsQuasiAlgebraic) {
  auto sig = fixtures::sig("ring.sig");
  auto s = parse_sentence("forall x. mul(x, x) = zero -> x = zero", *sig);
  EXPECT_EQ(classify_sentence(s), Fragment::quasi_algebraic);
}

TEST(Classify, NegatedConjunctionIsHUniversal) {
  auto sig = parse_signature("sort s\nrel R : s s");
  auto s = parse_sentence("forall x. not x = x & R(x, x)", sig);
  EXPECT_EQ(classify_sentence(s), Fragment::h_universal);
}

TEST(Classify, AntisymmetryIsQuasiAlgebraic) {
  auto sig = fixtures::sig("poset.sig");
  auto s = parse_sentence("forall x, y. leq(x, y) & leq(y, x) -> x = y", *sig);
  EXPECT_EQ(classify_sentence(s), Fragment::quasi_algebraic);
  EXPECT_TRUE(has_universal_shape(s));
}

TEST(Classify, OtherShapes) {
  auto sig = fixtures::sig("poset.sig");
  EXPECT_EQ(classify_sentence(parse_sentence("forall x. leq(x, x)", *sig)), Fragment::atomic);
  EXPECT_EQ(classify_sentence(parse_sentence("forall x, y. true -> leq(x, y) | leq(y, x)", *sig)), Fragment::universal);
  EXPECT_EQ(classify_sentence(parse_sentence("forall x, y. leq(x, y) & leq(y, x) -> false", *sig)),
            Fragment::h_universal);
  EXPECT_EQ(classify_sentence(parse_sentence("exists x. leq(x, x)", *sig)), Fragment::coherent);
  EXPECT_THROW(classify_sentence(parse_sentence("forall y. exists x. leq(x, y)", *sig)), InputError);
}

TEST(Classify, AtomicIsQuasiAlgebraicCompatible) {
  auto sig = fixtures::sig("poset.sig");
  auto s = parse_sentence("forall x. leq(x, x)", *sig);
  EXPECT_TRUE(is_quasi_algebraic_compatible(s));
  EXPECT_TRUE(has_universal_shape(s));
}

TEST(Parse, Errors) {
  auto sig = fixtures::sig("ring.sig");
  EXPECT_THROW(parse_sentence("forall x. add(x) = x", *sig), InputError);
  EXPECT_THROW(parse_sentence("forall x. y = x", *sig), InputError);
  EXPECT_THROW(parse_sentence("forall x. x = x & x = x", *sig), InputError);
  EXPECT_THROW(parse_sentence("forall x. x = x ->", *sig), InputError);
  EXPECT_THROW(parse_sentence("forall x, x. x = x", *sig), InputError);
  auto many = parse_signature("sort a\nsort b\nfun f : a -> b");
  EXPECT_THROW(parse_sentence("forall x. f(x) = x", many), InputError);
  EXPECT_THROW(parse_sentence("forall x:a, y:b. f(x) = x", many), InputError);
}

TEST(Parse, ParametersAndPrinting) {
  auto z4 = fixtures::load("z4.struct");
  NameScope scope = scope_of(z4);
  auto s = parse_sentence("add(2, 2) = 0", scope);
  EXPECT_EQ(s.conclusions[0].args[0].args[0].kind, Term::Kind::parameter);
  EXPECT_EQ(print_sentence(z4.signature(), s), "add(2, 2) = 0");
  EXPECT_EQ(parse_sentence(print_sentence(z4.signature(), s), scope), s);
}

TEST(Parse, EmptyPremisePrintsTrue) {
  auto sig = fixtures::sig("poset.sig");
  auto s = Sentence::quasi_algebraic({{"x", 0}}, {}, Atom::apply(*sig, 0, {Term::variable({"x", 0}), Term::variable({"x", 0})}));
  EXPECT_EQ(print_sentence(*sig, s), "forall x:s. true -> leq(x, x)");
  EXPECT_EQ(parse_sentence(print_sentence(*sig, s), *sig), s);
}

TEST(Parse, QuotedNamesRoundTrip) {
  auto sig = parse_signature("sort s\nfun f : s -> s");
  auto a = FinStructure(std::make_shared<Signature>(sig), "A", {{"(a,b)", "x y"}});
  NameScope scope = scope_of(a);
  auto s = parse_sentence("f(\"(a,b)\") = \"x y\"", scope);
  EXPECT_EQ(print_sentence(sig, s), "f(\"(a,b)\") = \"x y\"");
  EXPECT_EQ(parse_sentence(print_sentence(sig, s), scope), s);
}

namespace {

// Random well-sorted sentences over a two-sorted signature with parameters.
class SentenceGen {
 public:
  SentenceGen(const FinStructure& a, unsigned seed) : a_(a), sig_(a.signature()), rng_(seed) {}

  Sentence sentence() {
    std::vector<Variable> prefix;
    int nv = pick(3);
    for (int i = 0; i < nv; ++i) prefix.push_back({"x" + std::to_string(i), pick(sig_.sort_count())});
    vars_ = prefix;
    switch (pick(5)) {
      case 0:
        return Sentence::atomic(prefix, atom());
      case 1:
        return Sentence::quasi_algebraic(prefix, conj(), atom());
      case 2: {
        auto c = conj();
        std::vector<Atom> d{atom(), atom()};
        if (pick(3) == 0) d.clear();
        return Sentence::universal(prefix, c, d);
      }
      case 3:
        return Sentence::h_universal(prefix, conj());
      default: {
        std::vector<Variable> ex{{"y", pick(sig_.sort_count())}};
        vars_ = ex;
        return Sentence::coherent({}, ex, conj());
      }
    }
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::vector<Atom> conj() {
    std::vector<Atom> c;
    int n = pick(3);
    for (int i = 0; i < n; ++i) c.push_back(atom());
    return c;
  }

  Atom atom() {
    if (!sig_.relations().empty() && pick(2) == 0) {
      int r = pick(static_cast<int>(sig_.relations().size()));
      std::vector<Term> args;
      for (SortId s : sig_.relations()[r].args) args.push_back(term(s, 2));
      return Atom::apply(sig_, r, args);
    }
    SortId s = pick(sig_.sort_count());
    return Atom::equality(term(s, 2), term(s, 2));
  }

  Term term(SortId s, int depth) {
    std::vector<int> fns;
    for (std::size_t f = 0; f < sig_.functions().size(); ++f)
      if (sig_.functions()[f].result == s) fns.push_back(static_cast<int>(f));
    if (depth > 0 && !fns.empty() && pick(2) == 0) {
      int f = fns[pick(static_cast<int>(fns.size()))];
      std::vector<Term> args;
      for (SortId a : sig_.functions()[f].args) args.push_back(term(a, depth - 1));
      return Term::apply(sig_, f, args);
    }
    std::vector<Term> leaves;
    for (const auto& v : vars_)
      if (v.sort == s) leaves.push_back(Term::variable(v));
    for (int e = 0; e < a_.size(s); ++e) leaves.push_back(Term::parameter(a_.element_name(s, e), s, e));
    for (std::size_t c = 0; c < sig_.constants().size(); ++c)
      if (sig_.constants()[c].sort == s) leaves.push_back(Term::constant(sig_, static_cast<int>(c)));
    return leaves[pick(static_cast<int>(leaves.size()))];
  }

  const FinStructure& a_;
  const Signature& sig_;
  std::mt19937 rng_;
  std::vector<Variable> vars_;
};

}  // namespace

TEST(Property, PrintParseRoundTrip) {
  auto sig = std::make_shared<Signature>(
      parse_signature("sort a\nsort b\nfun f : a b -> b\nfun g : b -> a\nrel r : b a\nrel p : a\nconst c : a"));
  FinStructure a(sig, "A", {{"u", "v"}, {"w", "(z)"}});
  NameScope scope = scope_of(a);
  SentenceGen gen(a, 7);
  for (int i = 0; i < 500; ++i) {
    Sentence s = gen.sentence();
    std::string text = print_sentence(*sig, s);
    Sentence back = parse_sentence(text, scope);
    ASSERT_EQ(back, s) << text;
    EXPECT_NO_THROW(classify_sentence(back)) << text;
  }
}

TEST(Theory, ParsesHeaderAndSentences) {
  auto th = fixtures::loader().theory(fixtures::data("fields.thy"));
  EXPECT_EQ(th.name, "fields");
  ASSERT_EQ(th.sentences.size(), 2u);
  EXPECT_EQ(classify_sentence(th.sentences[0]), Fragment::h_universal);
  EXPECT_EQ(classify_sentence(th.sentences[1]), Fragment::quasi_algebraic);
}
