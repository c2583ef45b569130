#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "homs.hpp"
#include "products.hpp"
#include "syntax.hpp"
#include "tuples.hpp"

namespace quasivar {

// Bounds for sentence-by-sentence checks: at most `premise_bound` premise
// atoms (none: unbounded), terms of depth ≤ `depth`, at most `max_vars`
// quantified variables.
struct Scope {
  std::optional<int> premise_bound;
  int depth = 1;
  int max_vars = 1;
};

struct ScopedCounterexample {
  Sentence sentence;        // true in A, false in B along f
  std::vector<int> point;   // values of the quantified variables in B
};

struct ScopedVerdict {
  bool passes = true;
  std::optional<ScopedCounterexample> counterexample;
  std::size_t assignments = 0;  // (variable tuple, point in B) pairs examined
};

namespace detail {

// An atom over L(A) ⊔ ȳ seen from both sides: the set of ȳ ∈ A^n where it
// holds in A, and whether it holds in B at the fixed point b̄ along f.
struct ScopedAtom {
  PointSet in_a;
  bool in_b = false;
  Atom atom;
};

inline std::vector<std::vector<SortId>> sort_tuples(int sorts, int max_vars) {
  std::vector<std::vector<SortId>> out{{}};
  std::vector<std::vector<SortId>> frontier{{}};
  for (int len = 1; len <= max_vars; ++len) {
    std::vector<std::vector<SortId>> next;
    for (const auto& t : frontier)
      for (SortId s = t.empty() ? 0 : t.back(); s < sorts; ++s) {
        auto u = t;
        u.push_back(s);
        next.push_back(u);
      }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

// All atoms over terms of depth ≤ d for one variable tuple and one point b̄,
// deduplicated by their two-sided meaning.
class ScopedAtoms {
 public:
  ScopedAtoms(const FinStructure& a, const FinStructure& b, const Hom& f, const std::vector<Variable>& vars,
              const std::vector<int>& point, int depth)
      : a_(a), b_(b), vars_(vars) {
    const auto& L = a.signature();
    for (TupleCounter tc(point_sizes(vars)); !tc.done(); tc.next()) a_points_.push_back(tc.digits());
    by_sort_.assign(L.sort_count(), {});
    for (int s = 0; s < L.sort_count(); ++s)
      for (int e = 0; e < a.size(s); ++e)
        add(s, std::vector<int>(a_points_.size(), e), f.map[s][e], Term::parameter(a.element_name(s, e), s, e));
    for (std::size_t c = 0; c < L.constants().size(); ++c)
      add(L.constants()[c].sort, std::vector<int>(a_points_.size(), a.constant(static_cast<int>(c))),
          b.constant(static_cast<int>(c)), Term::constant(L, static_cast<int>(c)));
    for (std::size_t i = 0; i < vars.size(); ++i) {
      std::vector<int> prof;
      for (const auto& p : a_points_) prof.push_back(p[i]);
      add(vars[i].sort, std::move(prof), point[i], Term::variable(vars[i]));
    }
    for (std::size_t fi = 0; fi < L.functions().size(); ++fi)
      if (L.functions()[fi].args.empty())
        add(L.functions()[fi].result, std::vector<int>(a_points_.size(), a.apply(static_cast<int>(fi), {})),
            b.apply(static_cast<int>(fi), {}), Term::apply(L, static_cast<int>(fi), {}));
    std::size_t start = 0;
    for (int k = 1; k <= depth; ++k) {
      std::size_t end = terms_.size();
      std::vector<std::vector<int>> below(L.sort_count());
      for (std::size_t t = 0; t < end; ++t) below[terms_[t].sort].push_back(static_cast<int>(t));
      std::vector<int> args;
      for (std::size_t fi = 0; fi < L.functions().size(); ++fi) {
        const auto& fs = L.functions()[fi];
        if (fs.args.empty()) continue;
        std::vector<int> sizes;
        for (SortId s : fs.args) sizes.push_back(static_cast<int>(below[s].size()));
        for (TupleCounter tc(sizes); !tc.done(); tc.next()) {
          std::vector<int> ids;
          bool fresh = false;
          for (std::size_t j = 0; j < fs.args.size(); ++j) {
            ids.push_back(below[fs.args[j]][tc.digits()[j]]);
            fresh = fresh || static_cast<std::size_t>(ids.back()) >= start;
          }
          if (!fresh) continue;
          std::vector<int> prof(a_points_.size());
          for (std::size_t p = 0; p < a_points_.size(); ++p) {
            args.clear();
            for (int id : ids) args.push_back(terms_[id].a_values[p]);
            prof[p] = a.apply(static_cast<int>(fi), args);
          }
          args.clear();
          for (int id : ids) args.push_back(terms_[id].b_value);
          int bv = b.apply(static_cast<int>(fi), args);
          std::vector<Term> targs;
          for (int id : ids) targs.push_back(terms_[id].term);
          add(fs.result, std::move(prof), bv, Term::apply(L, static_cast<int>(fi), std::move(targs)));
        }
      }
      start = end;
      if (terms_.size() == end) break;
    }
    build_atoms();
  }

  const std::vector<ScopedAtom>& true_in_b() const { return true_; }
  const std::vector<ScopedAtom>& false_in_b() const { return false_; }
  std::size_t point_count() const { return a_points_.size(); }

 private:
  struct TermProfile {
    SortId sort;
    std::vector<int> a_values;
    int b_value;
    Term term;
  };

  std::vector<int> point_sizes(const std::vector<Variable>& vars) const {
    std::vector<int> sizes;
    for (const auto& v : vars) sizes.push_back(a_.size(v.sort));
    return sizes;
  }

  void add(SortId s, std::vector<int> prof, int bv, Term t) {
    auto key = std::make_tuple(s, prof, bv);
    if (!seen_.insert(key).second) return;
    by_sort_[s].push_back(static_cast<int>(terms_.size()));
    terms_.push_back({s, std::move(prof), bv, std::move(t)});
  }

  void push(PointSet in_a, bool in_b, Atom atom) {
    auto& list = in_b ? true_ : false_;
    auto& keys = in_b ? true_keys_ : false_keys_;
    if (keys.insert(in_a).second) list.push_back({std::move(in_a), in_b, std::move(atom)});
  }

  void build_atoms() {
    const auto& L = a_.signature();
    const std::size_t np = a_points_.size();
    for (const auto& ids : by_sort_)
      for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
          const auto& x = terms_[ids[i]];
          const auto& y = terms_[ids[j]];
          PointSet s(np);
          for (std::size_t p = 0; p < np; ++p)
            if (x.a_values[p] == y.a_values[p]) s.set(p);
          push(std::move(s), x.b_value == y.b_value, Atom::equality(x.term, y.term));
        }
    std::vector<int> args;
    for (std::size_t r = 0; r < L.relations().size(); ++r) {
      const auto& rs = L.relations()[r];
      std::vector<int> sizes;
      for (SortId s : rs.args) sizes.push_back(static_cast<int>(by_sort_[s].size()));
      for (TupleCounter tc(sizes); !tc.done(); tc.next()) {
        std::vector<const TermProfile*> ts;
        for (std::size_t j = 0; j < rs.args.size(); ++j) ts.push_back(&terms_[by_sort_[rs.args[j]][tc.digits()[j]]]);
        PointSet s(np);
        for (std::size_t p = 0; p < np; ++p) {
          args.clear();
          for (const auto* t : ts) args.push_back(t->a_values[p]);
          if (a_.holds(static_cast<int>(r), args)) s.set(p);
        }
        args.clear();
        for (const auto* t : ts) args.push_back(t->b_value);
        bool in_b = b_.holds(static_cast<int>(r), args);
        std::vector<Term> targs;
        for (const auto* t : ts) targs.push_back(t->term);
        push(std::move(s), in_b, Atom::apply(L, static_cast<int>(r), std::move(targs)));
      }
    }
  }

  const FinStructure& a_;
  const FinStructure& b_;
  std::vector<Variable> vars_;
  std::vector<std::vector<int>> a_points_;
  std::vector<TermProfile> terms_;
  std::vector<std::vector<int>> by_sort_;
  std::set<std::tuple<SortId, std::vector<int>, int>> seen_;
  std::vector<ScopedAtom> true_, false_;
  std::set<PointSet> true_keys_, false_keys_;
};

// Intersections of A-sides of at most `bound` B-true atoms, each with a
// shortest list of atoms realizing it.
inline std::map<PointSet, std::vector<int>> reachable_intersections(const std::vector<ScopedAtom>& atoms, std::size_t points,
                                                                   std::optional<int> bound) {
  std::map<PointSet, std::vector<int>> reached;
  reached.emplace(PointSet(points, true), std::vector<int>{});
  if (!bound) {
    // unbounded: the full intersection is the strongest premise
    PointSet all(points, true);
    std::vector<int> used;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      PointSet next = all & atoms[i].in_a;
      if (!(next == all)) {
        all = next;
        used.push_back(static_cast<int>(i));
      }
    }
    reached.emplace(all, used);
    return reached;
  }
  std::vector<PointSet> frontier{PointSet(points, true)};
  for (int step = 0; step < *bound && !frontier.empty(); ++step) {
    std::vector<PointSet> next;
    for (const auto& s : frontier)
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        PointSet t = s & atoms[i].in_a;
        if (reached.count(t)) continue;
        auto used = reached.at(s);
        used.push_back(static_cast<int>(i));
        reached.emplace(t, std::move(used));
        next.push_back(std::move(t));
      }
    frontier = std::move(next);
  }
  return reached;
}

template <class Visit>
void for_each_scoped_point(const FinStructure& a, const FinStructure& b, const Hom& f, const Scope& scope, Visit&& visit) {
  const auto& L = a.signature();
  for (const auto& sorts : sort_tuples(L.sort_count(), scope.max_vars)) {
    std::vector<Variable> vars;
    std::vector<int> sizes;
    for (std::size_t i = 0; i < sorts.size(); ++i) {
      vars.push_back({"y" + std::to_string(i), sorts[i]});
      sizes.push_back(b.size(sorts[i]));
    }
    for (TupleCounter tc(sizes); !tc.done(); tc.next()) {
      ScopedAtoms atoms(a, b, f, vars, tc.digits(), scope.depth);
      if (!visit(vars, tc.digits(), atoms)) return;
    }
  }
}

inline std::vector<Atom> pick(const std::vector<ScopedAtom>& atoms, const std::vector<int>& ids) {
  std::vector<Atom> out;
  for (int i : ids) out.push_back(atoms[i].atom);
  return out;
}

}  // namespace detail

// f: A → B is geometrically closed within scope: every quasi-algebraic
// L(A)-sentence in scope true in A holds in B along f.
inline ScopedVerdict check_geometrically_closed(const FinStructure& a, const FinStructure& b, const Hom& f, const Scope& scope) {
  ScopedVerdict v;
  detail::for_each_scoped_point(a, b, f, scope, [&](const std::vector<Variable>& vars, const std::vector<int>& point,
                                                    const detail::ScopedAtoms& atoms) {
    ++v.assignments;
    auto reached = detail::reachable_intersections(atoms.true_in_b(), atoms.point_count(), scope.premise_bound);
    for (const auto& [set, ids] : reached)
      for (const auto& psi : atoms.false_in_b())
        if (set.subset_of(psi.in_a)) {
          v.passes = false;
          v.counterexample = ScopedCounterexample{
              Sentence::quasi_algebraic(vars, detail::pick(atoms.true_in_b(), ids), psi.atom), point};
          return false;
        }
    return true;
  });
  return v;
}

// f is an immersion within scope: every h-universal L(A)-sentence in scope
// true in A holds in B along f.
inline ScopedVerdict check_immersion(const FinStructure& a, const FinStructure& b, const Hom& f, const Scope& scope) {
  ScopedVerdict v;
  detail::for_each_scoped_point(a, b, f, scope, [&](const std::vector<Variable>& vars, const std::vector<int>& point,
                                                    const detail::ScopedAtoms& atoms) {
    ++v.assignments;
    auto reached = detail::reachable_intersections(atoms.true_in_b(), atoms.point_count(), scope.premise_bound);
    for (const auto& [set, ids] : reached)
      if (set.empty()) {
        v.passes = false;
        v.counterexample = ScopedCounterexample{Sentence::h_universal(vars, detail::pick(atoms.true_in_b(), ids)), point};
        return false;
      }
    return true;
  });
  return v;
}

struct GcimReport {
  ScopedVerdict geometrically_closed;
  ScopedVerdict immersion;
  bool one_embeds = false;
  bool vacuous = false;  // antecedent fails
};

// If f is geometrically closed and 𝟏 does not embed in B then f is an
// immersion; checked at one scope and asserted.
inline GcimReport check_gcim(const FinStructure& a, const FinStructure& b, const Hom& f, const Scope& scope) {
  if (scope.depth < 1) throw InputError("the GCIM check needs term depth at least 1");
  GcimReport r;
  r.geometrically_closed = check_geometrically_closed(a, b, f, scope);
  r.one_embeds = one_embeds(b);
  r.immersion = check_immersion(a, b, f, scope);
  r.vacuous = !r.geometrically_closed.passes || r.one_embeds;
  if (!r.vacuous && !r.immersion.passes)
    throw TheoremViolation("geometrically closed homomorphism into a structure without a trivial substructure "
                           "is not an immersion: " + print_sentence(a.signature(), r.immersion.counterexample->sentence));
  return r;
}

}  // namespace quasivar
