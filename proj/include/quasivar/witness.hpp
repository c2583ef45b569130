#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "affine.hpp"

namespace quasivar {

// Where "modulo the theory" side conditions are checked: optionally A itself
// (parameters read as themselves), then every member of K under every
// assignment of the parameters occurring in the formulas.
struct CheckTarget {
  int member = -1;  // -1: the base structure
  const FinStructure* structure = nullptr;
  std::vector<std::vector<int>> params;
};

namespace detail {

inline void collect_parameters(const Term& t, std::set<std::pair<SortId, int>>& out) {
  if (t.kind == Term::Kind::parameter) out.insert({t.sort, t.symbol});
  for (const auto& a : t.args) collect_parameters(a, out);
}

}  // namespace detail

inline std::set<std::pair<SortId, int>> parameters_in(const std::vector<Atom>& atoms) {
  std::set<std::pair<SortId, int>> out;
  for (const auto& a : atoms)
    for (const auto& t : a.args) detail::collect_parameters(t, out);
  return out;
}

inline void for_each_target(const FinStructure& a, const std::vector<FinStructure>& k, const std::vector<Atom>& atoms,
                            bool include_base, const std::function<void(const CheckTarget&)>& f) {
  const auto& L = a.signature();
  if (include_base) {
    CheckTarget t{-1, &a, identity_hom(a).map};
    f(t);
  }
  auto used = parameters_in(atoms);
  std::vector<std::pair<SortId, int>> slots(used.begin(), used.end());
  for (std::size_t i = 0; i < k.size(); ++i) {
    std::vector<int> sizes;
    for (const auto& [s, e] : slots) sizes.push_back(k[i].size(s));
    CheckTarget t{static_cast<int>(i), &k[i], {}};
    t.params.resize(L.sort_count());
    for (int s = 0; s < L.sort_count(); ++s) t.params[s].assign(a.size(s), 0);
    for (TupleCounter tc(sizes); !tc.done(); tc.next()) {
      for (std::size_t j = 0; j < slots.size(); ++j) t.params[slots[j].first][slots[j].second] = tc.digits()[j];
      f(t);
    }
  }
}

inline Valuation target_valuation(const CheckTarget& t, const std::vector<Variable>& vars, const std::vector<int>& point) {
  Valuation v = point_valuation(vars, point);
  v.params = &t.params;
  return v;
}

inline std::string describe_target(const CheckTarget& t, const std::vector<FinStructure>& k) {
  return t.member < 0 ? "the base structure" : "class member '" + k[t.member].name() + "'";
}

// Replaces variables by terms.
inline Term substitute(const Term& t, const std::map<std::string, Term>& by_name) {
  if (t.kind == Term::Kind::variable) {
    auto it = by_name.find(t.name);
    return it == by_name.end() ? t : it->second;
  }
  Term out = t;
  for (auto& a : out.args) a = substitute(a, by_name);
  return out;
}

inline std::vector<Atom> substitute(const std::vector<Atom>& atoms, const std::map<std::string, Term>& by_name) {
  std::vector<Atom> out = atoms;
  for (auto& a : out)
    for (auto& t : a.args) t = substitute(t, by_name);
  return out;
}

inline void require_disjoint(const std::vector<Variable>& xs, const std::vector<Variable>& ys) {
  for (const auto& x : xs)
    for (const auto& y : ys)
      if (x.name == y.name) throw InputError("variable '" + x.name + "' is used on both sides");
}

// ---------------------------------------------------------------------------
// Witness terms

struct WitnessQuery {
  std::shared_ptr<const FinStructure> base;
  std::vector<Variable> xs, ys;
  std::vector<Atom> phi;    // over x̄, ȳ; functional in ȳ
  std::vector<Atom> theta;  // over x̄
};

struct WitnessResult {
  int depth = 0;
  std::optional<std::vector<Term>> terms;
  int missing_output = -1;  // first output with no candidate within the bound
  bool verified = false;    // re-evaluated θ ⟺ φ(x̄, t̄(x̄)) everywhere
  std::size_t contexts = 0;
};

// The side conditions φ is functional in ȳ and θ ⟺ ∃ȳ φ, in every member
// of K. Returns a description of the first failure.
inline std::optional<std::string> witness_premise_failure(const WitnessQuery& q, const Context& ctx) {
  std::optional<std::string> failure;
  auto all = q.phi;
  all.insert(all.end(), q.theta.begin(), q.theta.end());
  for_each_target(*q.base, ctx.k, all, false, [&](const CheckTarget& t) {
    if (failure) return;
    const auto& m = *t.structure;
    for (TupleCounter tx(point_sizes(m, q.xs)); !tx.done() && !failure; tx.next()) {
      int solutions = 0;
      for (TupleCounter ty(point_sizes(m, q.ys)); !ty.done(); ty.next()) {
        auto pt = tx.digits();
        pt.insert(pt.end(), ty.digits().begin(), ty.digits().end());
        auto vars = q.xs;
        vars.insert(vars.end(), q.ys.begin(), q.ys.end());
        if (eval_conjunction(q.phi, m, target_valuation(t, vars, pt))) ++solutions;
      }
      bool theta = eval_conjunction(q.theta, m, target_valuation(t, q.xs, tx.digits()));
      if (solutions > 1) failure = "the formula is not functional in " + describe_target(t, ctx.k);
      else if ((solutions == 1) != theta) failure = "the domain condition differs from the solvability of the formula in " + describe_target(t, ctx.k);
    }
  });
  return failure;
}

// Lemma-style witness search: terms t̄(x̄) of depth ≤ d with θ ⟺ φ(x̄, t̄(x̄))
// in every member of K. By functionality each output can be searched alone:
// wherever θ holds the value of t_j is forced. First candidate in canonical
// term order wins.
inline WitnessResult extract_witness_terms(const WitnessQuery& q, const Context& ctx) {
  require_disjoint(q.xs, q.ys);
  if (auto why = witness_premise_failure(q, ctx)) throw InputError(*why);
  WitnessResult out;
  out.depth = ctx.depth;
  auto u = std::make_shared<const TermUniverse>(q.base->signature_ptr(), q.base, q.xs, ctx.depth);
  auto all = q.phi;
  all.insert(all.end(), q.theta.begin(), q.theta.end());
  // per θ-context: node values and the forced output values
  std::vector<std::vector<int>> node_values, forced;
  std::vector<CheckTarget> targets;
  for_each_target(*q.base, ctx.k, all, false, [&](const CheckTarget& t) { targets.push_back(t); });
  std::vector<std::pair<int, std::vector<int>>> contexts;  // (target, x̄)
  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    const auto& t = targets[ti];
    const auto& m = *t.structure;
    for (TupleCounter tx(point_sizes(m, q.xs)); !tx.done(); tx.next()) {
      contexts.emplace_back(static_cast<int>(ti), tx.digits());
      if (!eval_conjunction(q.theta, m, target_valuation(t, q.xs, tx.digits()))) continue;
      for (TupleCounter ty(point_sizes(m, q.ys)); !ty.done(); ty.next()) {
        auto pt = tx.digits();
        pt.insert(pt.end(), ty.digits().begin(), ty.digits().end());
        auto vars = q.xs;
        vars.insert(vars.end(), q.ys.begin(), q.ys.end());
        if (eval_conjunction(q.phi, m, target_valuation(t, vars, pt))) {
          forced.push_back(ty.digits());
          break;
        }
      }
      node_values.push_back(u->evaluate(m, &t.params, tx.digits()));
    }
  }
  out.contexts = contexts.size();
  // candidates may only mention parameters of the query, which are the ones assigned
  auto used = parameters_in(all);
  std::vector<char> allowed(u->size(), 1);
  for (int n = 0; n < u->size(); ++n) {
    const auto& nd = u->node(n);
    if (nd.kind == Term::Kind::parameter) allowed[n] = used.count({nd.sort, nd.symbol}) > 0;
    for (int c : nd.children) allowed[n] = allowed[n] && allowed[c];
  }
  std::vector<Term> terms;
  for (std::size_t j = 0; j < q.ys.size(); ++j) {
    std::optional<int> found;
    for (int n : u->of_sort(q.ys[j].sort)) {
      bool ok = allowed[n] != 0;
      for (std::size_t c = 0; c < node_values.size() && ok; ++c) ok = node_values[c][n] == forced[c][j];
      if (ok) {
        found = n;
        break;
      }
    }
    if (!found) {
      out.missing_output = static_cast<int>(j);
      return out;
    }
    terms.push_back(u->term(*found));
  }
  // Independent re-check by substitution and direct evaluation.
  std::map<std::string, Term> by_name;
  for (std::size_t j = 0; j < q.ys.size(); ++j) by_name[q.ys[j].name] = terms[j];
  auto instantiated = substitute(q.phi, by_name);
  out.verified = true;
  for (const auto& [ti, x] : contexts) {
    const auto& t = targets[ti];
    auto val = target_valuation(t, q.xs, x);
    if (eval_conjunction(q.theta, *t.structure, val) != eval_conjunction(instantiated, *t.structure, val)) out.verified = false;
  }
  if (!out.verified) throw TheoremViolation("extracted witness terms fail the biconditional on re-evaluation");
  out.terms = std::move(terms);
  return out;
}

// ---------------------------------------------------------------------------
// Morphisms of varieties

struct VarietyMorphism {
  Variety source, target;
  std::vector<Atom> phi;                 // over source variables then target variables
  std::vector<std::vector<int>> graph;   // image of each source point
  std::optional<std::vector<Term>> witness;
};

struct MorphismCheck {
  bool ok = false;
  std::string failure;
  VarietyMorphism morphism;
};

// The defining conditions of a variety morphism: functional, domain equal to
// the source, values in the target; checked in A and, under all parameter
// assignments, in every member of K.
inline MorphismCheck check_morphism(const Variety& v, const Variety& w, const std::vector<Atom>& phi, const Context& ctx) {
  require_disjoint(v.vars, w.vars);
  MorphismCheck out;
  out.morphism = {v, w, phi, {}, std::nullopt};
  auto vars = v.vars;
  vars.insert(vars.end(), w.vars.begin(), w.vars.end());
  auto all = phi;
  all.insert(all.end(), v.pi.begin(), v.pi.end());
  std::set<std::vector<int>> target_points(w.points.begin(), w.points.end());
  const auto& a = *v.ambient;
  for_each_target(a, ctx.k, all, true, [&](const CheckTarget& t) {
    if (!out.failure.empty()) return;
    const auto& m = *t.structure;
    for (TupleCounter tx(point_sizes(m, v.vars)); !tx.done() && out.failure.empty(); tx.next()) {
      std::optional<std::vector<int>> image;
      int solutions = 0;
      for (TupleCounter ty(point_sizes(m, w.vars)); !ty.done(); ty.next()) {
        auto pt = tx.digits();
        pt.insert(pt.end(), ty.digits().begin(), ty.digits().end());
        if (eval_conjunction(phi, m, target_valuation(t, vars, pt))) {
          ++solutions;
          image = ty.digits();
        }
      }
      bool in_domain = eval_conjunction(v.pi, m, target_valuation(t, v.vars, tx.digits()));
      if (solutions > 1) out.failure = "not functional in " + describe_target(t, ctx.k);
      else if ((solutions == 1) != in_domain) out.failure = "domain differs from the source variety in " + describe_target(t, ctx.k);
      else if (t.member < 0 && image) {
        if (!target_points.count(*image)) out.failure = "a value lies outside the target variety";
        out.morphism.graph.push_back(*image);
      }
    }
  });
  out.ok = out.failure.empty();
  return out;
}

inline WitnessQuery witness_query(const VarietyMorphism& f) {
  return {f.source.ambient, f.source.vars, f.target.vars, f.phi, f.source.pi};
}

struct Composition {
  VarietyMorphism morphism;
  bool graph_agrees = false;  // pointwise g(f(b)) against the composed formula
  MorphismCheck check;
};

// g ∘ f via witness terms: φ(x̄, t̄(x̄)) ∧ ψ(t̄(x̄), z̄).
inline Composition compose_morphisms(const VarietyMorphism& f, const VarietyMorphism& g, const Context& ctx) {
  auto tf = f.witness;
  if (!tf) {
    auto r = extract_witness_terms(witness_query(f), ctx);
    if (!r.terms) throw InputError("no witness terms for the first morphism within depth " + std::to_string(ctx.depth));
    tf = r.terms;
  }
  std::map<std::string, Term> by_name;
  for (std::size_t j = 0; j < f.target.vars.size(); ++j) by_name[f.target.vars[j].name] = (*tf)[j];
  auto phi = substitute(f.phi, by_name);
  auto psi = substitute(g.phi, by_name);
  phi.insert(phi.end(), psi.begin(), psi.end());
  Composition out;
  out.check = check_morphism(f.source, g.target, phi, ctx);
  out.morphism = out.check.morphism;
  if (g.witness) {
    std::vector<Term> composed;
    for (const auto& t : *g.witness) composed.push_back(substitute(t, by_name));
    out.morphism.witness = composed;
  }
  std::map<std::vector<int>, std::vector<int>> gmap;
  for (std::size_t i = 0; i < g.source.points.size() && i < g.graph.size(); ++i) gmap[g.source.points[i]] = g.graph[i];
  out.graph_agrees = out.check.ok && out.morphism.graph.size() == f.graph.size();
  for (std::size_t i = 0; i < f.graph.size() && out.graph_agrees; ++i)
    out.graph_agrees = gmap.count(f.graph[i]) && gmap[f.graph[i]] == out.morphism.graph[i];
  return out;
}

}  // namespace quasivar
