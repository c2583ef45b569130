#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "atype.hpp"
#include "generate.hpp"
#include "jobs.hpp"

namespace quasivar {

// Stand-in for a theory T: the generator class K with its search bounds.
struct Context {
  std::vector<FinStructure> k;
  int size_bound = 0;
  int depth = 1;

  std::vector<std::string> warnings() const {
    std::vector<std::string> out;
    for (const auto& m : k)
      if (m.total_size() > size_bound)
        out.push_back("size bound " + std::to_string(size_bound) + " is below the size of class member '" + m.name() + "'");
    return out;
  }
};

// One evaluation of A[x̄] in a member of K: a hom on the parameters and a
// point for the variables. Without a base structure the hom is empty.
struct Evaluation {
  int member = -1;
  Hom hom;
  std::vector<int> point;
};

struct Prime {
  AType type;
  Evaluation witness;
};

struct RadicalResult {
  AType input;  // the closure of π
  AType radical;
  std::vector<Prime> primes;
  bool degenerate = false;  // empty prime family
  bool exact = false;
};

// Universe used for a-types over (base, vars): variable-free a-types over a
// finite base are determined by the depth-0 universe plus diagram terms.
inline std::shared_ptr<const TermUniverse> universe_for(std::shared_ptr<const FinStructure> base,
                                                        const std::vector<Variable>& vars, int depth,
                                                        const std::vector<Atom>& atoms) {
  int d = vars.empty() && base ? 0 : depth;
  auto sig = base->signature_ptr();
  return std::make_shared<const TermUniverse>(sig, std::move(base), vars, d, terms_of(atoms));
}

namespace detail {

inline std::vector<int> variable_sizes(const TermUniverse& u, const FinStructure& m) {
  std::vector<int> sizes;
  for (const auto& v : u.variables()) sizes.push_back(m.size(v.sort));
  return sizes;
}

}  // namespace detail

// Calls visit(evaluation, values) for every evaluation of u into K, in
// canonical order: member, then hom, then point (last variable fastest).
inline void for_each_evaluation(const TermUniverse& u, const std::vector<FinStructure>& k, int member, HomMode mode,
                                const std::function<void(const Evaluation&, const std::vector<int>&)>& visit) {
  const auto& m = k[member];
  auto run_points = [&](const Hom& h) {
    for (TupleCounter tc(detail::variable_sizes(u, m)); !tc.done(); tc.next()) {
      Evaluation ev{member, h, tc.digits()};
      visit(ev, u.evaluate(m, u.base() ? &h.map : nullptr, tc.digits()));
    }
    return true;
  };
  if (u.base()) {
    for_each_hom(*u.base(), m, mode, run_points);
  } else {
    run_points(Hom{});
  }
}

// Distinct evaluation a-types containing p, first witness kept.
inline std::vector<Prime> primes_containing(const AType& p, const std::vector<FinStructure>& k, HomMode mode) {
  auto u = p.universe_ptr();
  auto per_member = parallel_map<std::vector<Prime>>(static_cast<int>(k.size()), [&](int i) {
    std::vector<Prime> found;
    std::set<AType> seen;
    for_each_evaluation(*u, k, i, mode, [&](const Evaluation& ev, const std::vector<int>& vals) {
      AType t = AType::of_values(u, k[i], vals);
      if (p.subset_of(t) && seen.insert(t).second) found.push_back({std::move(t), ev});
    });
    return found;
  });
  std::vector<Prime> out;
  std::set<AType> seen;
  for (auto& part : per_member)
    for (auto& pr : part)
      if (seen.insert(pr.type).second) out.push_back(std::move(pr));
  return out;
}

inline RadicalResult radical_of_closed(const AType& p, const Context& ctx, HomMode mode = HomMode::hom) {
  RadicalResult r;
  r.input = p;
  r.primes = primes_containing(p, ctx.k, mode);
  std::vector<AType> types;
  for (const auto& pr : r.primes) types.push_back(pr.type);
  r.radical = meet_all(types, p.universe_ptr());
  r.degenerate = r.primes.empty();
  r.exact = p.universe().variables().empty() && p.universe().base() != nullptr;
  return r;
}

// √π⁺ over the universe of π.
inline RadicalResult radical(std::shared_ptr<const TermUniverse> u, const std::vector<Atom>& pi, const Context& ctx) {
  return radical_of_closed(close(std::move(u), pi), ctx);
}

// Strong radical: only evaluations whose hom on A is an embedding.
inline RadicalResult strong_radical(std::shared_ptr<const TermUniverse> u, const std::vector<Atom>& pi,
                                    const Context& ctx) {
  if (u->variables().empty()) throw InputError("strong primes are defined only for a-types with variables");
  return radical_of_closed(close(std::move(u), pi), ctx, HomMode::embedding);
}

struct PrimeVerdict {
  bool prime = false;
  bool exact = false;
  std::optional<MemberWitness> embedding;  // A/π ↪ K[i] (variable-free)
  std::optional<Evaluation> evaluation;    // an evaluation with a-type π
};

inline PrimeVerdict is_prime(const AType& p, const Context& ctx) {
  PrimeVerdict v;
  const auto& u = p.universe();
  if (u.variables().empty() && u.base()) {
    v.exact = true;
    v.embedding = in_universal_class(quotient(p).quotient, ctx.k);
    v.prime = v.embedding.has_value();
    return v;
  }
  for (std::size_t i = 0; i < ctx.k.size() && !v.prime; ++i)
    for_each_evaluation(u, ctx.k, static_cast<int>(i), HomMode::hom, [&](const Evaluation& ev, const std::vector<int>& vals) {
      if (!v.prime && AType::of_values(p.universe_ptr(), ctx.k[i], vals) == p) {
        v.prime = true;
        v.evaluation = ev;
      }
    });
  return v;
}

struct RadicalVerdict {
  bool radical = false;
  bool exact = false;
  RadicalResult result;
  std::optional<QuasivarietyVerdict> quotient_route;  // A/π ∈ W_K, variable-free only
};

// π = √π⁺, cross-checked against A/π ∈ W_K when π is variable-free.
inline RadicalVerdict is_radical(const AType& p, const Context& ctx) {
  RadicalVerdict v;
  v.result = radical_of_closed(p, ctx);
  v.radical = v.result.radical == p;
  v.exact = v.result.exact;
  if (v.exact) {
    v.quotient_route = in_quasivariety(quotient(p).quotient, ctx.k);
    if (v.quotient_route->member != v.radical)
      throw TheoremViolation(std::string("radical test disagrees with quasivariety membership of the quotient (") +
                             (v.radical ? "radical" : "not radical") + " vs " +
                             (v.quotient_route->member ? "member" : "not a member") + ")");
  }
  return v;
}

struct Representation {
  std::vector<Prime> primes;
  std::vector<FinStructure> factors;  // A/p for each prime p
  std::vector<Hom> projections;       // A → A/p
  std::optional<FinStructure> product;  // ∏ A/p, built only when small
  std::optional<Hom> map;               // A → ∏ A/p alongside the product
  bool embedding = false;
  bool subdirect = false;
};

inline constexpr std::size_t product_build_limit = 4096;

// f_𝒫 : A → ∏_p A/p over all primes of A. Whether it embeds is read off the
// projections: jointly injective and jointly reflecting every relation.
inline Representation represent(std::shared_ptr<const FinStructure> a, const Context& ctx) {
  Representation r;
  auto u = universe_for(a, {}, 0, {});
  r.primes = primes_containing(close(u, {}), ctx.k, HomMode::hom);
  for (const auto& p : r.primes) {
    auto q = quotient(p.type, a->name() + "_" + std::to_string(r.factors.size()));
    r.factors.push_back(std::move(q.quotient));
    r.projections.push_back(std::move(q.projection));
  }
  const auto& L = a->signature();
  bool injective = true;
  for (int s = 0; s < L.sort_count() && injective; ++s)
    for (int x = 0; x < a->size(s) && injective; ++x)
      for (int y = x + 1; y < a->size(s) && injective; ++y) {
        bool separated = false;
        for (const auto& pr : r.projections) separated = separated || pr.map[s][x] != pr.map[s][y];
        injective = separated;
      }
  bool reflects = true;
  for (std::size_t rel = 0; rel < L.relations().size() && reflects; ++rel) {
    const auto& args = L.relations()[rel].args;
    for (TupleCounter tc(a->arg_sizes(args)); !tc.done() && reflects; tc.next()) {
      if (a->holds(static_cast<int>(rel), tc.digits())) continue;
      bool refuted = false;
      for (std::size_t i = 0; i < r.factors.size() && !refuted; ++i) {
        std::vector<int> image;
        for (std::size_t j = 0; j < args.size(); ++j) image.push_back(r.projections[i].map[args[j]][tc.digits()[j]]);
        refuted = !r.factors[i].holds(static_cast<int>(rel), image);
      }
      reflects = refuted;
    }
  }
  r.embedding = injective && reflects;
  r.subdirect = true;
  for (std::size_t i = 0; i < r.factors.size(); ++i) r.subdirect = r.subdirect && is_surjective(r.projections[i], r.factors[i]);

  double size = 1;
  for (const auto& f : r.factors) size *= f.total_size();
  if (size <= product_build_limit) {
    r.product = product_or_one(r.factors, a->signature_ptr());
    Hom m;
    for (int s = 0; s < L.sort_count(); ++s) {
      std::vector<int> col(a->size(s));
      for (int e = 0; e < a->size(s); ++e) {
        int idx = 0;
        for (std::size_t i = 0; i < r.factors.size(); ++i) idx = idx * r.factors[i].size(s) + r.projections[i].map[s][e];
        col[e] = idx;
      }
      m.map.push_back(std::move(col));
    }
    if (is_hom(*a, *r.product, m, HomMode::embedding) != r.embedding)
      throw TheoremViolation("embedding test on the product disagrees with the projection test");
    r.map = std::move(m);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Presentations in W_K

struct UniversalCheck {
  int member = -1;
  std::vector<int> point;
  int extensions = 0;  // homs from the presented structure extending x̄ ↦ point
};

struct Presentation {
  std::shared_ptr<const TermUniverse> universe;
  RadicalResult radical;                // over the depth-d universe
  std::vector<Evaluation> evaluations;  // satisfying (member, point) pairs
  FinStructure structure;               // generated by x̄ inside ∏ of the evaluation targets
  std::vector<int> generators;          // element of each variable
  std::vector<std::vector<Term>> element_terms;  // defining term of each element, per sort
  int reached_depth = 0;                // depth at which generation stabilized
  bool degenerate = false;
  std::vector<UniversalCheck> universal;
  bool universal_ok = false;
};

// The structure presented in W_K by (X, P): A/√P⁺ for the term algebra on X.
inline Presentation present(std::shared_ptr<const Signature> sig, const std::vector<Variable>& vars,
                            const std::vector<Atom>& pi, const Context& ctx) {
  Presentation out;
  out.universe = std::make_shared<const TermUniverse>(sig, nullptr, vars, ctx.depth, terms_of(pi));
  out.radical = radical(out.universe, pi, ctx);
  out.radical.exact = false;
  // every satisfying evaluation, not just one per distinct a-type
  for (std::size_t i = 0; i < ctx.k.size(); ++i)
    for_each_evaluation(*out.universe, ctx.k, static_cast<int>(i), HomMode::hom,
                        [&](const Evaluation& ev, const std::vector<int>& vals) {
                          if (AType::of_values(out.universe, ctx.k[i], vals).contains_all(pi)) out.evaluations.push_back(ev);
                        });
  out.degenerate = out.evaluations.empty();

  const auto& L = *sig;
  std::vector<const FinStructure*> factors;
  for (const auto& ev : out.evaluations) factors.push_back(&ctx.k[ev.member]);
  std::vector<GenSeed> seeds;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    GenSeed sd{vars[v].sort, {}, Term::variable(vars[v])};
    for (const auto& ev : out.evaluations) sd.profile.push_back(ev.point[v]);
    seeds.push_back(std::move(sd));
  }
  auto gen = generate_in_product(sig, factors, seeds, "presented");
  out.structure = std::move(gen.structure);
  out.generators = gen.seeds;
  out.reached_depth = gen.reached_depth;
  out.element_terms = std::move(gen.terms);

  // Initiality: each satisfying point extends to exactly one hom.
  out.universal_ok = true;
  for (const auto& ev : out.evaluations) {
    std::vector<std::vector<int>> fixed(L.sort_count());
    for (int s = 0; s < L.sort_count(); ++s) fixed[s].assign(out.structure.size(s), -1);
    bool clash = false;
    for (std::size_t v = 0; v < vars.size(); ++v) {
      int& slot = fixed[vars[v].sort][out.generators[v]];
      if (slot >= 0 && slot != ev.point[v]) clash = true;
      slot = ev.point[v];
    }
    UniversalCheck check{ev.member, ev.point, 0};
    if (!clash)
      for_each_hom(out.structure, ctx.k[ev.member], HomMode::hom, [&](const Hom&) {
        ++check.extensions;
        return check.extensions < 2;
      }, &fixed);
    out.universal_ok = out.universal_ok && check.extensions == 1;
    out.universal.push_back(std::move(check));
  }
  return out;
}

}  // namespace quasivar
