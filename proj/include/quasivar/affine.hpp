#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evaluate.hpp"
#include "generate.hpp"
#include "radical.hpp"

namespace quasivar {

// V = π(A): the points of A^|x̄| satisfying every atom of π.
struct Variety {
  std::shared_ptr<const FinStructure> ambient;
  std::vector<Variable> vars;
  std::vector<Atom> pi;
  std::vector<std::vector<int>> points;  // canonical order, last variable fastest

  bool empty() const { return points.empty(); }
};

inline std::vector<int> point_sizes(const FinStructure& a, const std::vector<Variable>& vars) {
  std::vector<int> sizes;
  for (const auto& v : vars) sizes.push_back(a.size(v.sort));
  return sizes;
}

inline Valuation point_valuation(const std::vector<Variable>& vars, const std::vector<int>& point) {
  Valuation v;
  for (std::size_t i = 0; i < vars.size(); ++i) v.vars.emplace_back(vars[i], point[i]);
  return v;
}

inline Variety rational_points(std::shared_ptr<const FinStructure> a, std::vector<Variable> vars, std::vector<Atom> pi) {
  Variety v{std::move(a), std::move(vars), std::move(pi), {}};
  for (TupleCounter tc(point_sizes(*v.ambient, v.vars)); !tc.done(); tc.next())
    if (eval_conjunction(v.pi, *v.ambient, point_valuation(v.vars, tc.digits()))) v.points.push_back(tc.digits());
  return v;
}

struct PointsType {
  AType type;
  bool degenerate = false;  // no points: every atom
};

// tp_a(S) = ⋂_{ā ∈ S} tp_a(ā) over the universe u (base A, variables x̄).
inline PointsType atype_of_points(std::shared_ptr<const TermUniverse> u, const std::vector<std::vector<int>>& points) {
  const auto& a = *u->base();
  std::vector<AType> types;
  for (const auto& p : points) types.push_back(AType::of_values(u, a, u->evaluate(a, nullptr, p)));
  return {meet_all(types, u), points.empty()};
}

struct NullstellensatzReport {
  Variety variety;
  PointsType left;       // tp_a(π(A))
  RadicalResult right;   // √π⁺
  bool equal = false;
  std::vector<Atom> left_only, right_only;
  bool ambient_in_wk = false;
};

inline std::vector<Atom> atoms_missing(const AType& from, const AType& in, std::size_t cap = 20) {
  std::vector<Atom> out;
  for (const auto& at : from.basis())
    if (!in.contains(at)) {
      out.push_back(at);
      if (out.size() >= cap) break;
    }
  return out;
}

// Compares tp_a(π(A)) with √π⁺ over the depth-d universe. When A ∈ W_K the
// inclusion ⊇ is a theorem and is asserted.
inline NullstellensatzReport check_nullstellensatz(std::shared_ptr<const FinStructure> a, const std::vector<Variable>& vars,
                                                   const std::vector<Atom>& pi, const Context& ctx) {
  NullstellensatzReport rep;
  rep.variety = rational_points(a, vars, pi);
  auto u = make_universe(a, vars, ctx.depth, pi);
  rep.left = atype_of_points(u, rep.variety.points);
  rep.right = radical(u, pi, ctx);
  rep.equal = rep.left.type == rep.right.radical;
  rep.left_only = atoms_missing(rep.left.type, rep.right.radical);
  rep.right_only = atoms_missing(rep.right.radical, rep.left.type);
  rep.ambient_in_wk = in_quasivariety(*a, ctx.k).member;
  if (rep.ambient_in_wk && !rep.right.radical.subset_of(rep.left.type))
    throw TheoremViolation("radical atom " + print_atom(rep.right_only.at(0)) +
                           " fails on the rational points although the structure lies in the quasivariety");
  return rep;
}

// ---------------------------------------------------------------------------
// Coordinate algebras

struct CoordinateAlgebra {
  Variety variety;
  Generated algebra;           // A[V] as the subalgebra of A^V generated by parameters and coordinates
  std::vector<std::vector<int>> parameters;  // [sort][a] element of A[V] naming a
  int depth = 0;
  int classes_at_depth = 0;    // classes of the depth-d term universe under tp_a(V)
  bool degenerate = false;
  bool onto_depth_part = false;   // every depth-d term lands in A[V], class-for-profile
  std::optional<bool> embeds_in_power;  // A[V] ↪ A^V, when A^V is small enough to build
};

inline constexpr std::size_t power_build_limit = 4096;

inline Generated coordinate_generation(const Variety& v, const std::string& name) {
  const auto& a = *v.ambient;
  const auto& L = a.signature();
  std::vector<const FinStructure*> factors(v.points.size(), &a);
  std::vector<GenSeed> seeds;
  for (int s = 0; s < L.sort_count(); ++s)
    for (int e = 0; e < a.size(s); ++e)
      seeds.push_back({s, std::vector<int>(v.points.size(), e), Term::parameter(a.element_name(s, e), s, e)});
  for (std::size_t i = 0; i < v.vars.size(); ++i) {
    GenSeed sd{v.vars[i].sort, {}, Term::variable(v.vars[i])};
    for (const auto& p : v.points) sd.profile.push_back(p[i]);
    seeds.push_back(std::move(sd));
  }
  return generate_in_product(a.signature_ptr(), factors, seeds, name);
}

inline CoordinateAlgebra coordinate_algebra(const Variety& v, int depth) {
  CoordinateAlgebra out;
  out.variety = v;
  out.depth = depth;
  out.degenerate = v.empty();
  const auto& a = *v.ambient;
  const auto& L = a.signature();
  out.algebra = coordinate_generation(v, a.name() + "_coordinates");
  std::size_t seed = 0;
  out.parameters.assign(L.sort_count(), {});
  for (int s = 0; s < L.sort_count(); ++s)
    for (int e = 0; e < a.size(s); ++e) out.parameters[s].push_back(out.algebra.seeds[seed++]);

  auto u = make_universe(v.ambient, v.vars, depth, v.pi);
  auto tp = atype_of_points(u, v.points).type;
  out.classes_at_depth = tp.class_count();
  // A[x̄]_d ↠ A[V]: node ↦ its profile over V; classes of tp_a(V) are exactly the fibres
  std::vector<std::vector<int>> node_values;
  for (const auto& p : v.points) node_values.push_back(u->evaluate(a, nullptr, p));
  out.onto_depth_part = true;
  std::vector<int> class_image(tp.class_count(), -1);
  for (int n = 0; n < u->size(); ++n) {
    std::vector<int> prof;
    for (const auto& vals : node_values) prof.push_back(vals[n]);
    int e = out.algebra.find(u->node(n).sort, prof);
    int& slot = class_image[tp.class_of(n)];
    if (e < 0 || (slot >= 0 && slot != e)) out.onto_depth_part = false;
    slot = e;
  }
  std::set<std::pair<SortId, int>> distinct;
  for (int c = 0; c < tp.class_count(); ++c) distinct.insert({tp.class_sort(c), class_image[c]});
  out.onto_depth_part = out.onto_depth_part && static_cast<int>(distinct.size()) == tp.class_count();

  bool small = true;
  for (int s = 0; s < L.sort_count() && small; ++s) {
    std::size_t p = 1;
    for (std::size_t i = 0; i < v.points.size() && small; ++i) {
      p *= static_cast<std::size_t>(a.size(s));
      small = p <= power_build_limit;
    }
  }
  if (small) {
    std::vector<FinStructure> factors(v.points.size(), a);
    FinStructure pw = product_or_one(factors, a.signature_ptr());
    Hom incl;
    for (int s = 0; s < L.sort_count(); ++s) {
      std::vector<int> m;
      for (const auto& prof : out.algebra.profiles[s]) {
        int idx = 0;
        for (std::size_t i = 0; i < prof.size(); ++i) idx = idx * a.size(s) + prof[i];
        m.push_back(idx);
      }
      incl.map.push_back(std::move(m));
    }
    out.embeds_in_power = is_hom(out.algebra.structure, pw, incl, HomMode::embedding);
  }
  return out;
}

}  // namespace quasivar
