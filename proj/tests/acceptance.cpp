// Acceptance run: one PASS/FAIL line per criterion, with pinned runtime limits.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli_cases.hpp"
#include "families.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "quasivar/quasivar.hpp"

using namespace quasivar;

namespace {

struct Tally {
  long checked = 0;
  long failures = 0;
  std::string first_failure;
  std::ostringstream notes;

  void expect(bool ok, const std::string& what) {
    ++checked;
    if (ok) return;
    if (failures++ == 0) first_failure = what;
  }
};

using Body = std::function<void(Tally&)>;

struct Criterion {
  const char* name;
  double limit_seconds;
  Body body;
};

// ---------------------------------------------------------------------------
// Shared fixtures

struct Setting {
  std::string label;
  std::shared_ptr<const Signature> sig;
  std::vector<FinStructure> k;
};

Setting poset_setting() { return {"poset", fixtures::sig("poset.sig"), {fixtures::load("chain2.struct"), fixtures::load("chain3.struct")}}; }
Setting semilattice_setting() { return {"semilattice", fixtures::sig("semilattice.sig"), {fixtures::load("sl2.struct")}}; }
Setting ring_setting() { return {"ring", fixtures::sig("ring.sig"), {fixtures::load("z2.struct"), fixtures::load("z3.struct")}}; }

std::shared_ptr<const FinStructure> shared(FinStructure a) { return std::make_shared<const FinStructure>(std::move(a)); }

FinStructure random_structure(const Setting& s, int n, std::mt19937& rng) {
  if (s.label == "poset") return families::random_binary_relation(s.sig, n, rng);
  if (s.label == "semilattice") return families::random_commutative_idempotent(s.sig, n, rng);
  auto all = families::ring_like(s.sig, n);
  return all[rng() % all.size()];
}

Term random_node(const TermUniverse& u, SortId s, std::mt19937& rng) {
  const auto& nodes = u.of_sort(s);
  return u.term(nodes[rng() % nodes.size()]);
}

Atom random_atom(const TermUniverse& u, std::mt19937& rng) {
  const auto& L = u.signature();
  if (!L.relations().empty() && rng() % 2) {
    std::vector<Term> args;
    for (SortId s : L.relations()[0].args) args.push_back(random_node(u, s, rng));
    return Atom::apply(L, 0, args);
  }
  return Atom::equality(random_node(u, 0, rng), random_node(u, 0, rng));
}

std::vector<FinStructure> small_family(const Setting& s) {
  if (s.label == "poset") return families::up_to(3, [&](int n) { return families::all_binary_relations(s.sig, n); });
  if (s.label == "semilattice") return families::up_to(3, [&](int n) { return families::all_commutative_idempotent(s.sig, n); });
  return families::up_to(3, [&](int n) { return families::ring_like(s.sig, n); });
}

// ---------------------------------------------------------------------------
// Criteria

void closure_operators(Tally& t) {
  std::mt19937 rng(20240601);
  std::vector<Setting> settings{poset_setting(), semilattice_setting(), ring_setting()};
  long ideal_checks = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto& s = settings[trial % 3];
    int n = 1 + static_cast<int>(rng() % 4);
    auto a = shared(random_structure(s, n, rng));
    std::vector<Variable> vars;
    if (rng() % 2) vars.push_back({"x", 0});
    auto u = make_universe(a, vars, 1);
    std::vector<Atom> small, large;
    for (int i = rng() % 3; i > 0; --i) small.push_back(random_atom(*u, rng));
    large = small;
    for (int i = rng() % 3; i > 0; --i) large.push_back(random_atom(*u, rng));
    std::string tag = s.label + " trial " + std::to_string(trial);

    AType p = close(u, small), q = close(u, large);
    t.expect(p.contains_all(small), tag + ": close not extensive");
    t.expect(p.subset_of(q), tag + ": close not monotone");
    t.expect(close(u, p.basis()) == p, tag + ": close not idempotent");

    Context ctx{s.k, 4, 1};
    AType rp = radical(u, small, ctx).radical, rq = radical(u, large, ctx).radical;
    t.expect(p.subset_of(rp), tag + ": radical not extensive");
    t.expect(rp.subset_of(rq), tag + ": radical not monotone");
    t.expect(radical(u, rp.basis(), ctx).radical == rp, tag + ": radical not idempotent");

    if (s.label == "ring") {
      std::vector<int> s1, s2;
      for (int e = 0; e < n; ++e) {
        int c = static_cast<int>(rng() % 3);
        if (c == 0) s1.push_back(e);
        if (c <= 1) s2.push_back(e);
      }
      Ideal i1 = ideal_closure(*a, s1), i2 = ideal_closure(*a, s2);
      t.expect(std::includes(i1.begin(), i1.end(), s1.begin(), s1.end()), tag + ": ideal closure not extensive");
      t.expect(std::includes(i2.begin(), i2.end(), i1.begin(), i1.end()), tag + ": ideal closure not monotone");
      t.expect(ideal_closure(*a, i1) == i1, tag + ": ideal closure not idempotent");
      ++ideal_checks;
    }
  }
  t.notes << "200 a-types, " << ideal_checks << " ideal-closure pairs";
}

Term random_ground_term(const FinStructure& a, int depth, std::mt19937& rng) {
  const auto& L = a.signature();
  if (depth == 0 || L.functions().empty() || rng() % 3 == 0) {
    if (!L.constants().empty() && rng() % 4 == 0) return Term::constant(L, static_cast<int>(rng() % L.constants().size()));
    int e = static_cast<int>(rng() % a.size(0));
    return Term::parameter(a.element_name(0, e), 0, e);
  }
  int f = static_cast<int>(rng() % L.functions().size());
  std::vector<Term> args;
  for (std::size_t i = 0; i < L.functions()[f].args.size(); ++i) args.push_back(random_ground_term(a, depth - 1, rng));
  return Term::apply(L, f, std::move(args));
}

void congruence_oracle(Tally& t) {
  std::mt19937 rng(7);
  std::vector<Setting> settings{poset_setting(), semilattice_setting(), ring_setting()};
  int max_size = 0;
  for (int trial = 0; trial < 100;) {
    const auto& s = settings[trial % 3];
    int n = 1 + static_cast<int>(rng() % (s.label == "ring" ? 2 : s.label == "semilattice" ? 3 : 4));
    auto a = shared(random_structure(s, n, rng));
    std::vector<Atom> pi;
    for (int i = 1 + rng() % 3; i > 0; --i) {
      if (s.label == "poset" && rng() % 2) {
        pi.push_back(Atom::apply(a->signature(), 0, {random_ground_term(*a, 0, rng), random_ground_term(*a, 0, rng)}));
      } else {
        pi.push_back(Atom::equality(random_ground_term(*a, 2, rng), random_ground_term(*a, 2, rng)));
      }
    }
    auto u = make_universe(a, {}, 0, pi);
    if (u->size() > 20) continue;
    max_size = std::max(max_size, u->size());
    auto diff = oracles::mismatch(close(u, pi), oracles::naive_close(*u, pi));
    t.expect(!diff, s.label + " instance " + std::to_string(trial) + ": " + diff.value_or(""));
    ++trial;
  }
  t.notes << "100 instances, largest universe " << max_size << " terms";
}

void universal_property(Tally& t) {
  long homs = 0;
  for (const auto& s : {poset_setting(), semilattice_setting()}) {
    auto fam = small_family(s);
    for (const auto& a0 : fam) {
      auto a = shared(a0);
      auto u = universe_for(a, {}, 0, {});
      for (const auto& b : fam)
        for_each_hom(*a, b, HomMode::hom, [&](const Hom& f) {
          ++homs;
          auto q = quotient(atype_of(f, b, u));
          int factorizations = 0;
          for_each_hom(q.quotient, b, HomMode::hom, [&](const Hom& g) {
            if (compose(g, q.projection).map == f.map) ++factorizations;
            return true;
          });
          t.expect(is_hom(*a, q.quotient, q.projection) && is_surjective(q.projection, q.quotient),
                   a->name() + " -> " + b.name() + ": projection is not a surjective hom");
          t.expect(factorizations == 1, a->name() + " -> " + b.name() + ": " + std::to_string(factorizations) + " factorizations");
          return true;
        });
    }
  }
  t.notes << homs << " homs";
}

void rep_equivalence(Tally& t) {
  long types = 0, radical_count = 0;
  for (const auto& s : {poset_setting(), ring_setting()}) {
    Context ctx{s.k, 3, 0};
    for (const auto& a0 : small_family(s)) {
      auto a = shared(a0);
      for_each_closed_atype(universe_for(a, {}, 0, {}), [&](const AType& p) {
        ++types;
        try {
          auto v = is_radical(p, ctx);
          radical_count += v.radical;
          t.expect(v.exact && v.quotient_route && v.quotient_route->member == v.radical, a->name() + ": routes disagree");
        } catch (const TheoremViolation& e) {
          t.expect(false, a->name() + ": " + e.what());
        }
      });
    }
  }
  t.notes << types << " closed a-types, " << radical_count << " radical";
}

void subdirect_representation(Tally& t) {
  long members = 0, others = 0;
  for (const auto& s : {poset_setting(), ring_setting()}) {
    Context ctx{s.k, 3, 0};
    for (const auto& a0 : small_family(s)) {
      auto a = shared(a0);
      bool member = in_quasivariety(*a, ctx.k).member;
      auto rep = represent(a, ctx);
      if (member) {
        ++members;
        t.expect(rep.embedding && rep.subdirect, a->name() + ": member without subdirect representation");
      } else {
        ++others;
        t.expect(!rep.embedding, a->name() + ": non-member embeds into its prime quotients");
      }
    }
  }
  t.notes << members << " members, " << others << " non-members";
}

void radical_inclusion(Tally& t) {
  std::mt19937 rng(99);
  struct Ambient {
    Setting s;
    std::shared_ptr<const FinStructure> a;
  };
  auto poset = poset_setting(), semi = semilattice_setting(), ring = ring_setting();
  std::vector<Ambient> ambients{
      {poset, shared(fixtures::load("chain2.struct"))},
      {poset, shared(fixtures::load("chain3.struct"))},
      {poset, shared(product({fixtures::load("chain2.struct"), fixtures::load("chain2.struct")}))},
      {semi, shared(fixtures::load("sl2.struct"))},
      {semi, shared(fixtures::load("sl3.struct"))},
      {ring, shared(fixtures::load("z2.struct"))},
      {ring, shared(fixtures::load("z3.struct"))},
  };
  long atoms_checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& amb = ambients[trial % ambients.size()];
    std::vector<Variable> vars{{"x", 0}};
    // two variables at depth 2 over the ring signature outgrow the universe limit
    if (amb.s.label != "ring" && rng() % 2) vars.push_back({"y", 0});
    Context ctx{amb.s.k, 4, 2};
    auto leaves = make_universe(amb.a, vars, 1);
    std::vector<Atom> pi;
    for (int i = rng() % 3; i > 0; --i) pi.push_back(random_atom(*leaves, rng));
    std::string tag = amb.a->name() + " trial " + std::to_string(trial);
    if (!in_quasivariety(*amb.a, ctx.k).member) {
      t.expect(false, tag + ": ambient outside the quasivariety");
      continue;
    }
    try {
      auto rep = check_nullstellensatz(amb.a, vars, pi, ctx);
      // every basis atom of the radical holds at every rational point
      for (const auto& at : rep.right.radical.basis())
        for (const auto& pt : rep.variety.points) {
          ++atoms_checked;
          t.expect(eval_atom(at, *amb.a, point_valuation(vars, pt)), tag + ": " + print_atom(at) + " fails at a point");
        }
    } catch (const TheoremViolation& e) {
      t.expect(false, tag + ": " + e.what());
    }
  }
  t.notes << "100 a-types, " << atoms_checked << " atom evaluations";
}

void gcim(Tally& t) {
  long homs = 0, closed = 0;
  auto run = [&](const std::vector<FinStructure>& sources, const std::vector<FinStructure>& targets) {
    for (Scope scope : {Scope{1, 1, 1}, Scope{std::nullopt, 1, 1}})
      for (const auto& b : targets) {
        if (one_embeds(b)) {
          t.expect(false, b.name() + ": target is not strict");
          continue;
        }
        for (const auto& a : sources)
          for_each_hom(a, b, HomMode::hom, [&](const Hom& f) {
            ++homs;
            if (check_geometrically_closed(a, b, f, scope).passes) {
              ++closed;
              t.expect(check_immersion(a, b, f, scope).passes, a.name() + " -> " + b.name() + ": closed but not an immersion");
            }
            return true;
          });
      }
  };
  auto poset = poset_setting();
  auto sources = families::up_to(3, [&](int n) { return families::all_binary_relations(poset.sig, n); });
  std::vector<FinStructure> irreflexive;
  for (const auto& b : sources)
    if (!one_embeds(b)) irreflexive.push_back(b);
  run(sources, irreflexive);
  auto ring = ring_setting();
  auto rings = families::up_to(3, [&](int n) { return families::ring_like(ring.sig, n); });
  std::vector<FinStructure> unital;
  for (const auto& b : rings)
    if (!one_embeds(b)) unital.push_back(b);
  run(rings, unital);
  t.notes << homs << " (hom, scope) pairs into " << irreflexive.size() + unital.size() << " strict targets, " << closed << " geometrically closed";
}

struct WitnessCase {
  std::string base;
  std::vector<std::string> k;
  std::string xs, ys, phi, theta;
};

void witness_terms(Tally& t) {
  std::vector<WitnessCase> cases{
      {"sl3.struct", {"sl2.struct", "sl3.struct"}, "x:s", "y:s", "y = meet(x, 1)", ""},
      {"sl3.struct", {"sl3.struct"}, "x:s", "y:s", "meet(y, x) = y & meet(x, y) = x", ""},
      {"sl3.struct", {"sl2.struct", "sl3.struct"}, "x:s", "y:s", "y = meet(meet(x, 1), 2)", ""},
      {"sl3.struct", {"sl2.struct", "sl3.struct"}, "x1:s, x2:s", "y1:s, y2:s", "y1 = meet(x1, x2) & y2 = x1", ""},
      {"sl2.struct", {"sl2.struct"}, "x:s", "y:s", "meet(x, y) = x & meet(y, x) = y & meet(x, 0) = x", "meet(x, 0) = x"},
      {"c2.struct", {"c2.struct", "s3.struct"}, "x:g", "y:g", "mul(x, y) = e", ""},
      {"c2.struct", {"c2.struct", "s3.struct"}, "x:g", "y:g", "mul(y, x) = x", ""},
      {"s3.struct", {"s3.struct"}, "x:g", "y:g", "y = mul(x, x)", ""},
      {"s3.struct", {"c2.struct", "s3.struct"}, "x:g", "y:g", "mul(y, inv(x)) = e", ""},
      {"s3.struct", {"s3.struct"}, "x:g", "y1:g, y2:g", "y1 = inv(x) & y2 = mul(x, x)", ""},
  };
  int found = 0;
  long evaluations = 0;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& wc = cases[c];
    auto a = fixtures::loader().structure(fixtures::data(wc.base));
    Context ctx{{}, 6, 2};
    for (const auto& m : wc.k) ctx.k.push_back(fixtures::load(m));
    WitnessQuery q;
    q.base = a;
    q.xs = parse_variables(wc.xs, a->signature());
    q.ys = parse_variables(wc.ys, a->signature());
    auto both = q.xs;
    both.insert(both.end(), q.ys.begin(), q.ys.end());
    q.phi = parse_conjunction(wc.phi, scope_of(*a, both));
    if (!wc.theta.empty()) q.theta = parse_conjunction(wc.theta, scope_of(*a, q.xs));
    std::string tag = "case " + std::to_string(c + 1) + " (" + wc.phi + ")";
    auto r = extract_witness_terms(q, ctx);
    if (!r.terms) {
      t.expect(false, tag + ": no witness terms");
      continue;
    }
    ++found;
    // re-evaluate θ(x̄) ⟺ φ(x̄, t̄(x̄)) in A and in every member under every
    // assignment of the parameters
    auto params = parameters_in(q.phi);
    for (const auto& pr : parameters_in(q.theta)) params.insert(pr);
    std::vector<std::pair<SortId, int>> slots(params.begin(), params.end());
    std::vector<const FinStructure*> targets{a.get()};
    for (const auto& m : ctx.k) targets.push_back(&m);
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
      const auto& m = *targets[ti];
      std::vector<int> sizes;
      for (const auto& sl : slots) sizes.push_back(ti == 0 ? 1 : m.size(sl.first));
      for (TupleCounter pc(sizes); !pc.done(); pc.next()) {
        std::vector<std::vector<int>> pv(m.signature().sort_count());
        for (int srt = 0; srt < m.signature().sort_count(); ++srt) {
          pv[srt].assign(a->size(srt), 0);
          if (ti == 0)
            for (int e = 0; e < a->size(srt); ++e) pv[srt][e] = e;
        }
        if (ti != 0)
          for (std::size_t j = 0; j < slots.size(); ++j) pv[slots[j].first][slots[j].second] = pc.digits()[j];
        std::vector<int> xsizes;
        for (const auto& x : q.xs) xsizes.push_back(m.size(x.sort));
        for (TupleCounter xc(xsizes); !xc.done(); xc.next()) {
          Valuation v;
          v.params = &pv;
          for (std::size_t i = 0; i < q.xs.size(); ++i) v.vars.push_back({q.xs[i], xc.digits()[i]});
          bool theta = eval_conjunction(q.theta, m, v);
          Valuation w = v;
          for (std::size_t i = 0; i < q.ys.size(); ++i) w.vars.push_back({q.ys[i], eval_term(r.terms->at(i), m, v)});
          ++evaluations;
          t.expect(theta == eval_conjunction(q.phi, m, w), tag + ": wrong witness in " + m.name());
        }
      }
    }
  }
  t.notes << found << "/" << cases.size() << " conjunctions with terms, " << evaluations << " re-evaluations";
}

void morleyization(Tally& t) {
  auto poset = poset_setting();
  auto fam = families::up_to(3, [&](int n) { return families::all_binary_relations(poset.sig, n); });
  auto ss = morleyize_signature(poset.sig);
  auto stars = star_expand_all(fam, ss);
  long homs = 0;
  for (std::size_t i = 0; i < stars.size(); ++i) {
    t.expect(!one_embeds(stars[i]), fam[i].name() + ": one-point structure embeds in the expansion");
    for (std::size_t j = 0; j < stars.size(); ++j)
      for_each_hom(stars[i], stars[j], HomMode::hom, [&](const Hom& f) {
        ++homs;
        t.expect(is_hom(stars[i], stars[j], f, HomMode::embedding), fam[i].name() + " -> " + fam[j].name() + ": hom is not an embedding");
        return true;
      });
  }
  long transfers = 0, inside = 0;
  auto transfer = [&](const std::vector<FinStructure>& sources, const std::vector<FinStructure>& k) {
    for (const auto& a : sources) {
      ++transfers;
      try {
        auto r = check_star_transfer(a, k);
        inside += r.in_universal;
        t.expect(r.in_universal == r.star_in_quasivariety, a.name() + ": biconditional fails");
      } catch (const TheoremViolation& e) {
        t.expect(false, a.name() + ": " + e.what());
      }
    }
  };
  transfer(fam, poset.k);
  transfer(fam, {fixtures::load("discrete2.struct")});
  auto ring = ring_setting();
  transfer(families::up_to(3, [&](int n) { return families::ring_like(ring.sig, n); }), ring.k);

  long bijections = 0;
  for (const char* name : {"chain2.struct", "chain3.struct", "discrete2.struct"}) {
    auto a = fixtures::loader().structure(fixtures::data(name));
    std::vector<Variable> x{{"x", 0}};
    auto u = make_universe(a, x, 1);
    std::vector<std::vector<Atom>> hypotheses{{}};
    for (int i = 0; i < u->size(); ++i)
      for (int j = 0; j < u->size(); ++j) {
        hypotheses.push_back({Atom::equality(u->term(i), u->term(j))});
        hypotheses.push_back({Atom::apply(a->signature(), 0, {u->term(i), u->term(j)})});
      }
    for (const auto& pi : hypotheses) {
      ++bijections;
      auto r = star_prime_bijection(a, x, pi, poset.k, 1);
      t.expect(r.bijection && r.strong_primes.size() == r.star_primes.size(), a->name() + ": " + print_conjunction(pi) + " lists differ");
    }
  }
  t.notes << homs << " homs between expansions, " << transfers << " transfers (" << inside << " in U_K), " << bijections
          << " prime-list matches";
}

void gba_suite(Tally& t) {
  auto ring = ring_setting();
  auto z2 = fixtures::load("z2.struct");
  struct Case {
    std::shared_ptr<const FinStructure> a;
    std::size_t ideals;
  };
  std::vector<Case> cases{
      {fixtures::loader().structure(fixtures::data("z4.struct")), 3},
      {shared(product({z2, z2}, "z2xz2")), 4},
      {fixtures::loader().structure(fixtures::data("c2.struct")), 2},
      {fixtures::loader().structure(fixtures::data("s3.struct")), 3},
  };
  for (const auto& c : cases) {
    try {
      auto rep = ideal_atype_bijection(c.a);
      t.expect(rep.ideals.size() == c.ideals, c.a->name() + ": " + std::to_string(rep.ideals.size()) + " ideals");
      t.expect(rep.closed_types.size() == rep.ideals.size(), c.a->name() + ": closed a-type count differs");
      // brute force over all subsets
      const int n = c.a->size(0);
      std::size_t brute = 0;
      for (int m = 0; m < (1 << n); ++m) {
        Ideal s;
        for (int x = 0; x < n; ++x)
          if (m >> x & 1) s.push_back(x);
        if (!s.empty() && ideal_closure(*c.a, s) == s) ++brute;
      }
      t.expect(brute == rep.ideals.size(), c.a->name() + ": subset search finds " + std::to_string(brute) + " ideals");
    } catch (const TheoremViolation& e) {
      t.expect(false, c.a->name() + ": " + e.what());
    }
  }
  auto z4 = cases[0].a;
  Context ctx{ring.k, 4, 0};
  for (const auto& s : enumerate_ideals(*z4)) {
    try {
      auto r = ideal_radical(z4, s, ctx);
      auto u = universe_for(z4, {}, 0, {});
      t.expect(atype_of_ideal(u, r.radical) == radical_of_closed(atype_of_ideal(u, s), ctx).radical,
               "z4 ideal of size " + std::to_string(s.size()) + ": transport mismatch");
    } catch (const TheoremViolation& e) {
      t.expect(false, std::string("z4: ") + e.what());
    }
  }
  t.notes << "4 algebras, all ideals of z4 under K = {z2, z3}";
}

void determinism(Tally& t) {
  auto cases = cli_cases::invocations();
  for (const auto& args : cases) {
    auto first = cli_cases::run(args), second = cli_cases::run(args);
    t.expect(first.code == 0, args[0] + ": exit " + std::to_string(first.code));
    t.expect(first.out == second.out && first.code == second.code, args[0] + ": reports differ");
  }
  t.notes << cases.size() << " subcommands run twice";
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {"closure-operators", 60, closure_operators},
      {"congruence-closure-oracle", 30, congruence_oracle},
      {"quotient-universal-property", 120, universal_property},
      {"radical-iff-quotient-in-quasivariety", 300, rep_equivalence},
      {"subdirect-representation", 300, subdirect_representation},
      {"points-type-contains-radical", 300, radical_inclusion},
      {"closed-homs-are-immersions", 300, gcim},
      {"witness-term-extraction", 300, witness_terms},
      {"morleyization-suite", 300, morleyization},
      {"group-based-algebras", 300, gba_suite},
      {"cli-determinism", 300, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Tally t;
    auto start = std::chrono::steady_clock::now();
    try {
      c.body(t);
    } catch (const std::exception& e) {
      t.expect(false, std::string("uncaught: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = t.failures == 0 && secs <= c.limit_seconds;
    failed += !ok;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs of %.0fs", secs, c.limit_seconds);
    std::cout << (ok ? "PASS " : "FAIL ") << c.name << ": " << t.notes.str() << "; " << t.checked << " checks, " << t.failures
              << " failures [" << timing << "]";
    if (t.failures) std::cout << " first: " << t.first_failure;
    if (secs > c.limit_seconds) std::cout << " over time limit";
    std::cout << std::endl;
  }
  return failed;
}
