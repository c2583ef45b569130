#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "homs.hpp"

namespace quasivar {

// Direct product with componentwise operations. Elements are tuples in
// mixed-radix order (last factor fastest) named "(a,b,...)"; the empty
// product is 𝟏.
inline FinStructure product(const std::vector<FinStructure>& factors, std::string name = "") {
  if (factors.empty()) throw InputError("the empty product needs a signature; use trivial_structure");
  auto sig = factors[0].signature_ptr();
  for (const auto& f : factors) require_same_signature(factors[0], f);
  const auto& L = *sig;
  if (name.empty()) {
    for (std::size_t i = 0; i < factors.size(); ++i) name += (i ? "x" : "") + factors[i].name();
  }
  std::vector<std::vector<std::vector<int>>> coords(L.sort_count());
  std::vector<std::vector<std::string>> carriers(L.sort_count());
  for (int s = 0; s < L.sort_count(); ++s) {
    std::vector<int> sizes;
    for (const auto& f : factors) sizes.push_back(f.size(s));
    for (TupleCounter tc(sizes); !tc.done(); tc.next()) {
      std::string n = "(";
      for (std::size_t i = 0; i < factors.size(); ++i) n += (i ? "," : "") + factors[i].element_name(s, tc.digits()[i]);
      carriers[s].push_back(n + ")");
      coords[s].push_back(tc.digits());
    }
  }
  std::vector<std::map<std::vector<int>, int>> index(L.sort_count());
  for (int s = 0; s < L.sort_count(); ++s)
    for (std::size_t e = 0; e < coords[s].size(); ++e) index[s][coords[s][e]] = static_cast<int>(e);
  FinStructure p(sig, name, carriers);
  std::vector<int> comp;
  for (std::size_t fi = 0; fi < L.functions().size(); ++fi) {
    const auto& fs = L.functions()[fi];
    for (TupleCounter tc(p.arg_sizes(fs.args)); !tc.done(); tc.next()) {
      std::vector<int> value(factors.size());
      for (std::size_t i = 0; i < factors.size(); ++i) {
        comp.clear();
        for (std::size_t j = 0; j < fs.args.size(); ++j) comp.push_back(coords[fs.args[j]][tc.digits()[j]][i]);
        value[i] = factors[i].apply(static_cast<int>(fi), comp);
      }
      p.set_function(static_cast<int>(fi), tc.digits(), index[fs.result].at(value));
    }
  }
  for (std::size_t r = 0; r < L.relations().size(); ++r) {
    const auto& rs = L.relations()[r];
    for (TupleCounter tc(p.arg_sizes(rs.args)); !tc.done(); tc.next()) {
      bool all = true;
      for (std::size_t i = 0; i < factors.size() && all; ++i) {
        comp.clear();
        for (std::size_t j = 0; j < rs.args.size(); ++j) comp.push_back(coords[rs.args[j]][tc.digits()[j]][i]);
        all = factors[i].holds(static_cast<int>(r), comp);
      }
      p.set_relation(static_cast<int>(r), tc.digits(), all);
    }
  }
  for (std::size_t c = 0; c < L.constants().size(); ++c) {
    SortId s = L.constants()[c].sort;
    std::vector<int> value;
    for (const auto& f : factors) value.push_back(f.constant(static_cast<int>(c)));
    p.set_constant(static_cast<int>(c), index[s].at(value));
  }
  return p;
}

inline FinStructure product_or_one(const std::vector<FinStructure>& factors,
                                   std::shared_ptr<const Signature> sig) {
  return factors.empty() ? trivial_structure(std::move(sig)) : product(factors);
}

// Projection of a product onto factor i (as built by `product`).
inline Hom projection(const std::vector<FinStructure>& factors, std::size_t i) {
  const auto& L = factors[0].signature();
  Hom h;
  for (int s = 0; s < L.sort_count(); ++s) {
    std::vector<int> sizes;
    for (const auto& f : factors) sizes.push_back(f.size(s));
    std::vector<int> m;
    for (TupleCounter tc(sizes); !tc.done(); tc.next()) m.push_back(tc.digits()[i]);
    h.map.push_back(std::move(m));
  }
  return h;
}

struct Substructure {
  FinStructure structure;
  Hom inclusion;
};

// The substructure generated by `generators` (per sort, element indices):
// closure under constants and function tables. Elements keep their names and
// their relative carrier order.
inline Substructure generated_substructure(const FinStructure& a, const std::vector<std::vector<int>>& generators,
                                           std::string name = "") {
  const auto& L = a.signature();
  std::vector<std::vector<char>> in(L.sort_count());
  for (int s = 0; s < L.sort_count(); ++s) {
    in[s].assign(a.size(s), 0);
    if (s < static_cast<int>(generators.size()))
      for (int e : generators[s]) in[s].at(e) = 1;
  }
  for (std::size_t c = 0; c < L.constants().size(); ++c)
    in[L.constants()[c].sort][a.constant(static_cast<int>(c))] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t fi = 0; fi < L.functions().size(); ++fi) {
      const auto& fs = L.functions()[fi];
      for (TupleCounter tc(a.arg_sizes(fs.args)); !tc.done(); tc.next()) {
        bool inside = true;
        for (std::size_t j = 0; j < fs.args.size() && inside; ++j) inside = in[fs.args[j]][tc.digits()[j]];
        if (!inside) continue;
        int v = a.apply(static_cast<int>(fi), tc.digits());
        if (!in[fs.result][v]) {
          in[fs.result][v] = 1;
          changed = true;
        }
      }
    }
  }
  std::vector<std::vector<std::string>> carriers(L.sort_count());
  std::vector<std::vector<int>> keep(L.sort_count()), back(L.sort_count());
  Hom inclusion;
  for (int s = 0; s < L.sort_count(); ++s) {
    back[s].assign(a.size(s), -1);
    for (int e = 0; e < a.size(s); ++e)
      if (in[s][e]) {
        back[s][e] = static_cast<int>(keep[s].size());
        keep[s].push_back(e);
        carriers[s].push_back(a.element_name(s, e));
      }
    inclusion.map.push_back(keep[s]);
  }
  FinStructure sub(a.signature_ptr(), name.empty() ? a.name() : name, carriers);
  std::vector<int> outer;
  for (std::size_t fi = 0; fi < L.functions().size(); ++fi) {
    const auto& fs = L.functions()[fi];
    for (TupleCounter tc(sub.arg_sizes(fs.args)); !tc.done(); tc.next()) {
      outer.clear();
      for (std::size_t j = 0; j < fs.args.size(); ++j) outer.push_back(keep[fs.args[j]][tc.digits()[j]]);
      sub.set_function(static_cast<int>(fi), tc.digits(), back[fs.result][a.apply(static_cast<int>(fi), outer)]);
    }
  }
  for (std::size_t r = 0; r < L.relations().size(); ++r) {
    const auto& rs = L.relations()[r];
    for (TupleCounter tc(sub.arg_sizes(rs.args)); !tc.done(); tc.next()) {
      outer.clear();
      for (std::size_t j = 0; j < rs.args.size(); ++j) outer.push_back(keep[rs.args[j]][tc.digits()[j]]);
      sub.set_relation(static_cast<int>(r), tc.digits(), a.holds(static_cast<int>(r), outer));
    }
  }
  for (std::size_t c = 0; c < L.constants().size(); ++c) {
    SortId s = L.constants()[c].sort;
    sub.set_constant(static_cast<int>(c), back[s][a.constant(static_cast<int>(c))]);
  }
  return {std::move(sub), std::move(inclusion)};
}

// f(A) as a substructure of B.
inline Substructure image(const Hom& f, const FinStructure& b) {
  std::vector<std::vector<int>> gens(f.map.size());
  for (std::size_t s = 0; s < f.map.size(); ++s) gens[s] = f.map[s];
  return generated_substructure(b, gens, b.name() + "_image");
}

// Whether 𝟏 embeds in B: some choice of one element per sort that is closed
// under functions and constants and satisfies every relation.
inline bool one_embeds(const FinStructure& b) {
  return first_hom(trivial_structure(b.signature_ptr()), b, HomMode::embedding).has_value();
}

}  // namespace quasivar
