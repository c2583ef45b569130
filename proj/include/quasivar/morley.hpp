#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "evaluate.hpp"
#include "homs.hpp"
#include "radical.hpp"
#include "scoped.hpp"

namespace quasivar {

// L*: L plus a complement R* for every relation and a disequality per sort.
// Base symbol indices are kept, so L-terms and L-atoms are valid L*-syntax.
struct StarSignature {
  std::shared_ptr<const Signature> base;
  std::shared_ptr<const Signature> star;
  std::vector<int> starred;  // base relation -> its complement in star
  std::vector<int> unequal;  // sort -> disequality relation in star
};

inline std::string star_name(const std::string& relation) { return relation + "_star"; }
inline std::string unequal_name(const std::string& sort) { return "eq_star_" + sort; }

inline StarSignature morleyize_signature(std::shared_ptr<const Signature> base) {
  auto star = std::make_shared<Signature>(*base);
  StarSignature out{base, nullptr, {}, {}};
  for (const auto& r : base->relations()) {
    if (base->has_symbol(star_name(r.name)))
      throw InputError("cannot morleyize: symbol '" + star_name(r.name) + "' already exists");
    out.starred.push_back(star->add_relation(star_name(r.name), r.args));
  }
  for (int s = 0; s < base->sort_count(); ++s) {
    const auto& n = base->sorts()[s];
    if (base->has_symbol(unequal_name(n))) throw InputError("cannot morleyize: symbol '" + unequal_name(n) + "' already exists");
    out.unequal.push_back(star->add_relation(unequal_name(n), {s, s}));
  }
  out.star = std::move(star);
  return out;
}

namespace detail {

inline std::vector<Variable> fresh_vars(const std::vector<SortId>& sorts) {
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < sorts.size(); ++i) vars.push_back({"x" + std::to_string(i + 1), sorts[i]});
  return vars;
}

inline std::vector<Term> var_terms(const std::vector<Variable>& vars) {
  std::vector<Term> out;
  for (const auto& v : vars) out.push_back(Term::variable(v));
  return out;
}

}  // namespace detail

// ∅*: for each R the pair ∀x̄ ¬(R ∧ R*) and ∀x̄ (R ∨ R*); likewise for = and
// its disequality.
inline std::vector<Sentence> complement_axioms(const StarSignature& ss) {
  const auto& L = *ss.star;
  std::vector<Sentence> out;
  auto pair = [&](std::vector<Variable> vars, Atom pos, Atom neg) {
    out.push_back(Sentence::h_universal(vars, {pos, neg}));
    out.push_back(Sentence::universal(vars, {}, {pos, neg}));
  };
  for (std::size_t r = 0; r < ss.starred.size(); ++r) {
    auto vars = detail::fresh_vars(L.relations()[r].args);
    auto args = detail::var_terms(vars);
    pair(vars, Atom::apply(L, static_cast<int>(r), args), Atom::apply(L, ss.starred[r], args));
  }
  for (int s = 0; s < L.sort_count(); ++s) {
    auto vars = detail::fresh_vars({s, s});
    auto args = detail::var_terms(vars);
    pair(vars, Atom::equality(args[0], args[1]), Atom::apply(L, ss.unequal[s], args));
  }
  return out;
}

// T*: the sentences of T read in L*, plus ∅*.
inline Theory star_theory(const Theory& t, const StarSignature& ss) {
  Theory out;
  out.name = (t.name.empty() ? std::string("theory") : t.name) + "_star";
  out.signature = ss.star;
  out.sentences = t.sentences;
  for (auto& s : complement_axioms(ss)) out.sentences.push_back(std::move(s));
  return out;
}

inline std::string print_theory(const Theory& t, const std::string& signature_path) {
  std::string out = "theory " + print_name(t.name.empty() ? std::string("theory") : t.name) + " over " + signature_path + "\n";
  for (const auto& s : t.sentences) out += print_sentence(*t.signature, s) + "\n";
  return out;
}

// A*: complements of the relation tables, disequality on every sort.
inline FinStructure star_expand(const FinStructure& a, const StarSignature& ss) {
  const auto& L = a.signature();
  std::vector<std::vector<std::string>> carriers;
  for (int s = 0; s < L.sort_count(); ++s) carriers.push_back(a.carrier(s));
  FinStructure out(ss.star, a.name() + "_star", carriers);
  for (std::size_t f = 0; f < L.functions().size(); ++f)
    for (TupleCounter tc(a.arg_sizes(L.functions()[f].args)); !tc.done(); tc.next())
      out.set_function(static_cast<int>(f), tc.digits(), a.apply(static_cast<int>(f), tc.digits()));
  for (std::size_t r = 0; r < L.relations().size(); ++r)
    for (TupleCounter tc(a.arg_sizes(L.relations()[r].args)); !tc.done(); tc.next()) {
      bool v = a.holds(static_cast<int>(r), tc.digits());
      out.set_relation(static_cast<int>(r), tc.digits(), v);
      out.set_relation(ss.starred[r], tc.digits(), !v);
    }
  for (int s = 0; s < L.sort_count(); ++s)
    for (int x = 0; x < a.size(s); ++x)
      for (int y = 0; y < a.size(s); ++y) {
        std::vector<int> t{x, y};
        out.set_relation(ss.unequal[s], t, x != y);
      }
  for (std::size_t c = 0; c < L.constants().size(); ++c) out.set_constant(static_cast<int>(c), a.constant(static_cast<int>(c)));
  return out;
}

inline std::vector<FinStructure> star_expand_all(const std::vector<FinStructure>& k, const StarSignature& ss) {
  std::vector<FinStructure> out;
  for (const auto& m : k) out.push_back(star_expand(m, ss));
  return out;
}

// Regular: every starred relation is the complement of its base relation, and
// every disequality is ≠. Equivalently the structure satisfies ∅*.
inline bool is_regular(const FinStructure& a, const StarSignature& ss) {
  const auto& L = *ss.base;
  for (std::size_t r = 0; r < L.relations().size(); ++r)
    for (TupleCounter tc(a.arg_sizes(L.relations()[r].args)); !tc.done(); tc.next())
      if (a.holds(static_cast<int>(r), tc.digits()) == a.holds(ss.starred[r], tc.digits())) return false;
  for (int s = 0; s < L.sort_count(); ++s)
    for (int x = 0; x < a.size(s); ++x)
      for (int y = 0; y < a.size(s); ++y) {
        std::vector<int> t{x, y};
        if (a.holds(ss.unequal[s], t) != (x != y)) return false;
      }
  return true;
}

// Recovers the L-reduct of an L*-structure.
inline FinStructure base_reduct(const FinStructure& a, const StarSignature& ss) {
  const auto& L = *ss.base;
  std::vector<std::vector<std::string>> carriers;
  for (int s = 0; s < L.sort_count(); ++s) carriers.push_back(a.carrier(s));
  FinStructure out(ss.base, a.name(), carriers);
  for (std::size_t f = 0; f < L.functions().size(); ++f)
    for (TupleCounter tc(a.arg_sizes(L.functions()[f].args)); !tc.done(); tc.next())
      out.set_function(static_cast<int>(f), tc.digits(), a.apply(static_cast<int>(f), tc.digits()));
  for (std::size_t r = 0; r < L.relations().size(); ++r)
    for (TupleCounter tc(a.arg_sizes(L.relations()[r].args)); !tc.done(); tc.next())
      out.set_relation(static_cast<int>(r), tc.digits(), a.holds(static_cast<int>(r), tc.digits()));
  for (std::size_t c = 0; c < L.constants().size(); ++c) out.set_constant(static_cast<int>(c), a.constant(static_cast<int>(c)));
  return out;
}

// ---------------------------------------------------------------------------
// Strictness

struct StrictVerdict {
  bool strict = false;
  std::optional<Sentence> refuting_axiom;  // axiom route: an axiom false in 𝟏
  int member = -1;                         // K route: a member where 𝟏 embeds
  std::optional<Hom> embedding;
};

// 𝟏 ⊭ T: some axiom fails in the one-point structure.
inline StrictVerdict is_strict(const Theory& t) {
  StrictVerdict v;
  FinStructure one = trivial_structure(t.signature);
  for (const auto& s : t.sentences)
    if (!evaluate(s, one)) {
      v.strict = true;
      v.refuting_axiom = s;
      break;
    }
  return v;
}

// Relative to K: 𝟏 embeds in no member.
inline StrictVerdict is_strict(const std::vector<FinStructure>& k) {
  StrictVerdict v;
  v.strict = true;
  for (std::size_t i = 0; i < k.size(); ++i) {
    auto e = first_hom(trivial_structure(k[i].signature_ptr()), k[i], HomMode::embedding);
    if (e) {
      v.strict = false;
      v.member = static_cast<int>(i);
      v.embedding = *e;
      break;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Transfer

// W_{K*} membership with 𝟏 admitted as the empty product.
inline bool in_star_quasivariety(const FinStructure& b, const std::vector<FinStructure>& k_star) {
  return is_trivial(b) || in_quasivariety(b, k_star).member;
}

struct StarTransferReport {
  bool in_universal = false;       // A ∈ U_K
  std::optional<MemberWitness> universal_witness;
  bool star_in_quasivariety = false;  // A* ∈ W_{K*}
  int homs_checked = 0;            // homs between star-expansions, all embeddings
  int one_checks = 0;              // star-expansions without an embedded 𝟏
};

// A ∈ U_K ⟺ A* ∈ W_{K*}, with the embedding and strictness lemmas checked on
// A* and the expansions of K.
inline StarTransferReport check_star_transfer(const FinStructure& a, const std::vector<FinStructure>& k) {
  auto ss = morleyize_signature(a.signature_ptr());
  FinStructure a_star = star_expand(a, ss);
  auto k_star = star_expand_all(k, ss);
  StarTransferReport rep;
  rep.universal_witness = in_universal_class(a, k);
  rep.in_universal = rep.universal_witness.has_value();
  rep.star_in_quasivariety = in_star_quasivariety(a_star, k_star);

  std::vector<const FinStructure*> all{&a_star};
  std::vector<const FinStructure*> bases{&a};
  for (std::size_t i = 0; i < k.size(); ++i) {
    all.push_back(&k_star[i]);
    bases.push_back(&k[i]);
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (one_embeds(*all[i]))
      throw TheoremViolation("the one-point structure embeds in the regular structure " + all[i]->name());
    ++rep.one_checks;
    for (std::size_t j = 0; j < all.size(); ++j)
      for_each_hom(*all[i], *all[j], HomMode::hom, [&](const Hom& f) {
        ++rep.homs_checked;
        if (!is_hom(*all[i], *all[j], f, HomMode::embedding) || !is_hom(*bases[i], *bases[j], f, HomMode::embedding))
          throw TheoremViolation("homomorphism " + all[i]->name() + " -> " + all[j]->name() +
                                 " between regular structures is not an embedding");
        return true;
      });
  }
  if (rep.in_universal != rep.star_in_quasivariety)
    throw TheoremViolation(a.name() + (rep.in_universal ? " embeds in a member of K but its expansion is not"
                                                         : " embeds in no member of K but its expansion is") +
                           " in the quasivariety generated by the expanded class");
  return rep;
}

// ---------------------------------------------------------------------------
// Prime correspondence

// p ↦ p ∪ p*: the L*-type whose starred facts are the L-atoms missing from p.
inline AType star_type(const AType& p, std::shared_ptr<const TermUniverse> u_star, const StarSignature& ss) {
  const auto& u = p.universe();
  if (u.size() != u_star->size()) throw std::logic_error("term universes differ");
  std::vector<long> labels;
  for (int n = 0; n < u.size(); ++n) labels.push_back(p.class_of(n));
  const auto& L = *ss.base;
  std::vector<std::vector<std::vector<int>>> facts(ss.star->relations().size());
  for (std::size_t r = 0; r < L.relations().size(); ++r)
    p.for_each_class_tuple(L.relations()[r].args, [&](const std::vector<int>& cls) {
      std::vector<int> nodes;
      for (int c : cls) nodes.push_back(p.representative(c));
      (p.relation(static_cast<int>(r)).count(cls) ? facts[r] : facts[ss.starred[r]]).push_back(nodes);
    });
  for (int s = 0; s < L.sort_count(); ++s)
    for (int x = 0; x < p.class_count(); ++x)
      for (int y = 0; y < p.class_count(); ++y)
        if (x != y && p.class_sort(x) == s && p.class_sort(y) == s)
          facts[ss.unequal[s]].push_back({p.representative(x), p.representative(y)});
  return AType::from_labels(std::move(u_star), labels, facts);
}

struct StarBijectionReport {
  std::vector<Prime> strong_primes;  // over A[x̄], embeddings into K
  std::vector<Prime> star_primes;    // over A*[x̄], homs into K*
  std::vector<int> matching;         // strong prime i -> star prime matching[i]
  bool bijection = false;
};

inline StarBijectionReport star_prime_bijection(std::shared_ptr<const FinStructure> a, const std::vector<Variable>& vars,
                                                const std::vector<Atom>& pi, const std::vector<FinStructure>& k, int depth) {
  auto ss = morleyize_signature(a->signature_ptr());
  auto a_star = std::make_shared<const FinStructure>(star_expand(*a, ss));
  auto k_star = star_expand_all(k, ss);
  auto u = universe_for(a, vars, depth, pi);
  auto u_star = universe_for(a_star, vars, depth, pi);
  for (int n = 0; n < u->size(); ++n)
    if (u->size() != u_star->size() || !(u->term(n) == u_star->term(n))) throw std::logic_error("term universes differ");

  StarBijectionReport rep;
  rep.strong_primes = primes_containing(close(u, pi), k, HomMode::embedding);
  rep.star_primes = primes_containing(close(u_star, pi), k_star, HomMode::hom);
  std::set<int> hit;
  for (const auto& p : rep.strong_primes) {
    AType big = star_type(p.type, u_star, ss);
    int found = -1;
    for (std::size_t j = 0; j < rep.star_primes.size(); ++j)
      if (rep.star_primes[j].type == big) found = static_cast<int>(j);
    rep.matching.push_back(found);
    if (found < 0)
      throw TheoremViolation("strongly prime a-type has no prime counterpart over the expansion");
    hit.insert(found);
  }
  if (hit.size() != rep.star_primes.size())
    throw TheoremViolation("prime a-type over the expansion does not come from a strongly prime a-type");
  rep.bijection = true;
  return rep;
}

// ---------------------------------------------------------------------------
// Existential closedness against model-completeness of the expansion

struct PrimitiveWitness {
  int member = -1;
  Hom embedding;
  std::vector<Variable> vars;
  std::vector<std::string> literals;  // satisfiable in the member, not in A
  std::vector<int> point;
};

struct ExistentialReport {
  bool closed = true;
  std::optional<PrimitiveWitness> witness;
  int embeddings = 0;
};

// A is existentially closed in U_K within scope: every primitive sentence
// (at most `premise_bound` literals) over A true in a member along an
// embedding is already true in A.
inline ExistentialReport check_existentially_closed(const FinStructure& a, const std::vector<FinStructure>& k,
                                                    const Scope& scope) {
  ExistentialReport rep;
  for (std::size_t i = 0; i < k.size() && rep.closed; ++i)
    for_each_hom(a, k[i], HomMode::embedding, [&](const Hom& f) {
      ++rep.embeddings;
      detail::for_each_scoped_point(a, k[i], f, scope, [&](const std::vector<Variable>& vars, const std::vector<int>& point,
                                                           const detail::ScopedAtoms& atoms) {
        std::vector<detail::ScopedAtom> lits = atoms.true_in_b();
        std::vector<std::string> text;
        for (const auto& l : lits) text.push_back(print_atom(l.atom));
        for (const auto& l : atoms.false_in_b()) {
          PointSet comp(atoms.point_count());
          for (std::size_t p = 0; p < atoms.point_count(); ++p)
            if (!l.in_a.test(p)) comp.set(p);
          lits.push_back({comp, true, l.atom});
          text.push_back("not " + print_atom(l.atom));
        }
        auto reached = detail::reachable_intersections(lits, atoms.point_count(), scope.premise_bound);
        for (const auto& [set, ids] : reached)
          if (set.empty()) {
            PrimitiveWitness w{static_cast<int>(i), f, vars, {}, point};
            for (int id : ids) w.literals.push_back(text[id]);
            rep.closed = false;
            rep.witness = std::move(w);
            return false;
          }
        return true;
      });
      return rep.closed;
    });
  return rep;
}

struct StarClosedReport {
  bool closed = true;
  int member = -1;
  std::optional<ScopedCounterexample> counterexample;
  int homs = 0;
};

// A* is geometrically closed within scope along every hom into K*.
inline StarClosedReport check_star_geometrically_closed(const FinStructure& a, const std::vector<FinStructure>& k,
                                                        const Scope& scope) {
  auto ss = morleyize_signature(a.signature_ptr());
  FinStructure a_star = star_expand(a, ss);
  StarClosedReport rep;
  for (std::size_t i = 0; i < k.size() && rep.closed; ++i) {
    FinStructure m_star = star_expand(k[i], ss);
    for_each_hom(a_star, m_star, HomMode::hom, [&](const Hom& f) {
      ++rep.homs;
      auto v = check_geometrically_closed(a_star, m_star, f, scope);
      if (!v.passes) {
        rep.closed = false;
        rep.member = static_cast<int>(i);
        rep.counterexample = v.counterexample;
      }
      return rep.closed;
    });
  }
  return rep;
}

}  // namespace quasivar
