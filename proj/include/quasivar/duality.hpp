#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "affine.hpp"

namespace quasivar {

// Instance checks for the duality between affine varieties over A and their
// coordinate algebras. A morphism V → W is a tuple of elements of A[V]
// (term functions on V) whose values land in W.
struct AffObject {
  Variety variety;
  CoordinateAlgebra coords;
};

struct AffMorphism {
  std::vector<int> components;          // element of A[V] per target variable
  std::vector<std::vector<int>> graph;  // image of each point of V
};

inline AffObject aff_object(const Variety& v, int depth) { return {v, coordinate_algebra(v, depth)}; }

inline std::vector<AffMorphism> aff_morphisms(const AffObject& v, const AffObject& w) {
  std::vector<AffMorphism> out;
  const auto& alg = v.coords.algebra;
  std::set<std::vector<int>> target(w.variety.points.begin(), w.variety.points.end());
  std::vector<int> sizes;
  for (const auto& y : w.variety.vars) sizes.push_back(alg.structure.size(y.sort));
  for (TupleCounter tc(sizes); !tc.done(); tc.next()) {
    AffMorphism f{tc.digits(), {}};
    bool ok = true;
    for (std::size_t i = 0; i < v.variety.points.size() && ok; ++i) {
      std::vector<int> img;
      for (std::size_t j = 0; j < sizes.size(); ++j) img.push_back(alg.profiles[w.variety.vars[j].sort][tc.digits()[j]][i]);
      ok = target.count(img) > 0;
      f.graph.push_back(std::move(img));
    }
    if (ok) out.push_back(std::move(f));
  }
  return out;
}

// A[f] : A[W] → A[V], p ↦ p ∘ f.
inline Hom algebra_map(const AffObject& v, const AffObject& w, const AffMorphism& f) {
  const auto& av = v.coords.algebra;
  const auto& aw = w.coords.algebra;
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < w.variety.points.size(); ++i) index[w.variety.points[i]] = static_cast<int>(i);
  Hom h;
  for (std::size_t s = 0; s < aw.profiles.size(); ++s) {
    std::vector<int> m;
    for (const auto& p : aw.profiles[s]) {
      std::vector<int> q;
      for (const auto& img : f.graph) q.push_back(p[index.at(img)]);
      int e = av.find(static_cast<SortId>(s), q);
      if (e < 0) throw TheoremViolation("pulling back along a morphism leaves the coordinate algebra");
      m.push_back(e);
    }
    h.map.push_back(std::move(m));
  }
  return h;
}

// Homs A[W] → A[V] fixing the parameters.
inline std::vector<Hom> algebra_homs(const AffObject& v, const AffObject& w) {
  const auto& L = v.variety.ambient->signature();
  std::vector<std::vector<int>> fixed(L.sort_count());
  for (int s = 0; s < L.sort_count(); ++s) fixed[s].assign(w.coords.algebra.structure.size(s), -1);
  for (int s = 0; s < L.sort_count(); ++s)
    for (std::size_t a = 0; a < v.coords.parameters[s].size(); ++a) {
      int& slot = fixed[s][w.coords.parameters[s][a]];
      int target = v.coords.parameters[s][a];
      if (slot >= 0 && slot != target) return {};
      slot = target;
    }
  return enumerate_homs(w.coords.algebra.structure, v.coords.algebra.structure, HomMode::hom, &fixed);
}

struct DualityPair {
  int source = 0, target = 0;
  int morphisms = 0;
  int algebra_maps = 0;
  bool faithful = false;
  bool full = false;
};

struct EssentialCheck {
  int sample = 0;
  bool nullstellensatz = false;  // at the context depth
  bool isomorphic = false;       // presented algebra ≅ A[V]
};

struct DualityReport {
  std::vector<AffObject> samples;
  std::vector<DualityPair> pairs;
  bool identity_law = true;
  bool composition_law = true;
  int compositions_checked = 0;
  std::vector<EssentialCheck> essential;
  bool holds = false;
};

// Sample varieties: the point (no variables), then one-variable varieties cut
// out by ∅ and by single atoms over the depth-1 universe, first occurrence of
// each point set, up to `count` in total.
inline std::vector<std::pair<std::vector<Variable>, std::vector<Atom>>> duality_samples(std::shared_ptr<const FinStructure> a,
                                                                                        int count) {
  std::vector<std::pair<std::vector<Variable>, std::vector<Atom>>> out;
  if (count <= 0) return out;
  out.push_back({{}, {}});
  std::vector<Variable> x{{"x", 0}};
  auto u = make_universe(a, x, 1);
  std::vector<std::vector<Atom>> candidates{{}};
  const auto& L = a->signature();
  for (int i = 0; i < u->size(); ++i)
    for (int j = i + 1; j < u->size(); ++j)
      if (u->node(i).sort == u->node(j).sort) candidates.push_back({Atom::equality(u->term(i), u->term(j))});
  for (std::size_t r = 0; r < L.relations().size(); ++r) {
    std::vector<int> sizes;
    for (SortId s : L.relations()[r].args) sizes.push_back(static_cast<int>(u->of_sort(s).size()));
    for (TupleCounter tc(sizes); !tc.done(); tc.next()) {
      std::vector<Term> args;
      for (std::size_t j = 0; j < sizes.size(); ++j) args.push_back(u->term(u->of_sort(L.relations()[r].args[j])[tc.digits()[j]]));
      candidates.push_back({Atom::apply(L, static_cast<int>(r), std::move(args))});
    }
  }
  std::set<std::vector<std::vector<int>>> seen;
  for (const auto& c : candidates) {
    if (static_cast<int>(out.size()) >= count) break;
    if (seen.insert(rational_points(a, x, c).points).second) out.push_back({x, c});
  }
  return out;
}

namespace detail {

// Presented algebra (x̄, P) in W_K over A against A[V] for V = P(A): both are
// generated by the same seeds, so they are isomorphic as A-algebras iff the
// joint generation is no larger than either side and relations agree.
inline bool presented_matches_coordinates(const AffObject& v, const Context& ctx) {
  const auto& a = *v.variety.ambient;
  const auto& L = a.signature();
  auto u = make_universe(v.variety.ambient, v.variety.vars, 0, v.variety.pi);
  std::vector<const FinStructure*> factors;
  std::vector<Evaluation> evs;
  for (std::size_t i = 0; i < ctx.k.size(); ++i)
    for_each_evaluation(*u, ctx.k, static_cast<int>(i), HomMode::hom, [&](const Evaluation& ev, const std::vector<int>& vals) {
      if (AType::of_values(u, ctx.k[i], vals).contains_all(v.variety.pi)) evs.push_back(ev);
    });
  for (const auto& ev : evs) factors.push_back(&ctx.k[ev.member]);
  const std::size_t nb = factors.size();
  for (std::size_t i = 0; i < v.variety.points.size(); ++i) factors.push_back(&a);
  std::vector<GenSeed> seeds;
  for (int s = 0; s < L.sort_count(); ++s)
    for (int e = 0; e < a.size(s); ++e) {
      GenSeed sd{s, {}, Term::parameter(a.element_name(s, e), s, e)};
      for (const auto& ev : evs) sd.profile.push_back(ev.hom.map[s][e]);
      for (std::size_t i = 0; i < v.variety.points.size(); ++i) sd.profile.push_back(e);
      seeds.push_back(std::move(sd));
    }
  for (std::size_t j = 0; j < v.variety.vars.size(); ++j) {
    GenSeed sd{v.variety.vars[j].sort, {}, Term::variable(v.variety.vars[j])};
    for (const auto& ev : evs) sd.profile.push_back(ev.point[j]);
    for (const auto& p : v.variety.points) sd.profile.push_back(p[j]);
    seeds.push_back(std::move(sd));
  }
  auto joint = generate_in_product(a.signature_ptr(), factors, seeds, "joint");
  std::vector<const FinStructure*> left(factors.begin(), factors.begin() + nb);
  std::vector<GenSeed> left_seeds = seeds;
  for (auto& sd : left_seeds) sd.profile.resize(nb);
  auto b = generate_in_product(a.signature_ptr(), left, left_seeds, "presented");
  const auto& av = v.coords.algebra;
  for (int s = 0; s < L.sort_count(); ++s)
    if (joint.structure.size(s) != b.structure.size(s) || joint.structure.size(s) != av.structure.size(s)) return false;
  // relations: joint holds iff both halves hold; iso needs each half to agree
  for (std::size_t r = 0; r < L.relations().size(); ++r) {
    const auto& rs = L.relations()[r];
    for (TupleCounter tc(joint.structure.arg_sizes(rs.args)); !tc.done(); tc.next()) {
      std::vector<int> args;
      bool lhs = true, rhs = true;
      for (std::size_t j = 0; j < factors.size(); ++j) {
        args.clear();
        for (std::size_t q = 0; q < rs.args.size(); ++q) args.push_back(joint.profiles[rs.args[q]][tc.digits()[q]][j]);
        bool h = factors[j]->holds(static_cast<int>(r), args);
        if (j < nb) lhs = lhs && h;
        else rhs = rhs && h;
      }
      if (lhs != rhs) return false;
    }
  }
  return true;
}

}  // namespace detail

inline DualityReport check_duality_instance(std::shared_ptr<const FinStructure> a, const Context& ctx, int samples) {
  DualityReport rep;
  for (auto& [vars, pi] : duality_samples(a, samples)) rep.samples.push_back(aff_object(rational_points(a, vars, pi), ctx.depth));
  const int n = static_cast<int>(rep.samples.size());
  std::vector<std::vector<std::vector<AffMorphism>>> mor(n, std::vector<std::vector<AffMorphism>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto &v = rep.samples[i], &w = rep.samples[j];
      mor[i][j] = aff_morphisms(v, w);
      DualityPair p{i, j, static_cast<int>(mor[i][j].size()), 0, true, true};
      std::set<Hom> images;
      for (const auto& f : mor[i][j]) {
        Hom h = algebra_map(v, w, f);
        if (!is_hom(w.coords.algebra.structure, v.coords.algebra.structure, h))
          throw TheoremViolation("the coordinate map of a morphism is not a homomorphism");
        if (!images.insert(h).second) p.faithful = false;
      }
      auto homs = algebra_homs(v, w);
      p.algebra_maps = static_cast<int>(homs.size());
      p.full = std::set<Hom>(homs.begin(), homs.end()) == images;
      if (!p.faithful || !p.full)
        throw TheoremViolation("coordinate functor is not " + std::string(p.faithful ? "full" : "faithful") +
                               " between samples " + std::to_string(i) + " and " + std::to_string(j));
      rep.pairs.push_back(p);
    }
  // identity and composition laws
  for (int i = 0; i < n; ++i) {
    const auto& v = rep.samples[i];
    if (v.variety.vars.empty()) continue;
    // the identity morphism of a one-variable sample is the coordinate x
    AffMorphism id{{v.coords.algebra.seeds.back()}, v.variety.points};
    if (!(algebra_map(v, v, id) == identity_hom(v.coords.algebra.structure))) rep.identity_law = false;
  }
  constexpr std::size_t per_hop = 3;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (std::size_t fi = 0; fi < std::min(per_hop, mor[i][j].size()); ++fi)
          for (std::size_t gi = 0; gi < std::min(per_hop, mor[j][k].size()); ++gi) {
            const auto& f = mor[i][j][fi];
            const auto& g = mor[j][k][gi];
            std::map<std::vector<int>, std::vector<int>> gmap;
            for (std::size_t p = 0; p < rep.samples[j].variety.points.size(); ++p)
              gmap[rep.samples[j].variety.points[p]] = g.graph[p];
            AffMorphism gf;
            for (const auto& img : f.graph) gf.graph.push_back(gmap.at(img));
            Hom lhs = algebra_map(rep.samples[i], rep.samples[k], gf);
            Hom rhs = compose(algebra_map(rep.samples[i], rep.samples[j], f), algebra_map(rep.samples[j], rep.samples[k], g));
            if (!(lhs == rhs)) rep.composition_law = false;
            ++rep.compositions_checked;
          }
  if (!rep.identity_law) throw TheoremViolation("coordinate functor does not preserve identities");
  if (!rep.composition_law) throw TheoremViolation("coordinate functor does not reverse composition");
  for (int i = 0; i < n; ++i) {
    const auto& v = rep.samples[i];
    EssentialCheck e{i, false, false};
    e.nullstellensatz = check_nullstellensatz(a, v.variety.vars, v.variety.pi, ctx).equal;
    e.isomorphic = detail::presented_matches_coordinates(v, ctx);
    rep.essential.push_back(e);
  }
  rep.holds = true;
  for (const auto& e : rep.essential) rep.holds = rep.holds && (!e.nullstellensatz || e.isomorphic);
  return rep;
}

}  // namespace quasivar
