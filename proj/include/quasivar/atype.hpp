#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "homs.hpp"
#include "products.hpp"
#include "term_universe.hpp"

namespace quasivar {

// A closed a-type restricted to a term universe U, kept in class form: a
// sort-respecting partition of U (t = s holds iff same class) plus, per
// relation, the set of class tuples on which it holds. Classes are numbered
// in order of first occurrence, so equal a-types have equal representations.
class AType {
 public:
  AType() = default;

  // `labels` may be arbitrary ints (same label = same class, sorts must agree);
  // `facts[r]` lists node tuples on which relation r holds.
  static AType from_labels(std::shared_ptr<const TermUniverse> u, const std::vector<long>& labels,
                           const std::vector<std::vector<std::vector<int>>>& facts) {
    AType a;
    a.u_ = std::move(u);
    a.cls_.resize(labels.size());
    std::map<long, int> seen;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto [it, fresh] = seen.emplace(labels[i], static_cast<int>(a.rep_.size()));
      if (fresh) {
        a.rep_.push_back(static_cast<int>(i));
      } else if (a.u_->node(a.rep_[it->second]).sort != a.u_->node(static_cast<int>(i)).sort) {
        throw std::logic_error("a-type class mixes sorts");
      }
      a.cls_[i] = it->second;
    }
    a.rel_.assign(a.u_->signature().relations().size(), {});
    for (std::size_t r = 0; r < facts.size(); ++r)
      for (const auto& t : facts[r]) {
        std::vector<int> c;
        for (int n : t) c.push_back(a.cls_[n]);
        a.rel_[r].insert(std::move(c));
      }
    return a;
  }

  // The a-type of an evaluation: node values in M (see TermUniverse::evaluate).
  static AType of_values(std::shared_ptr<const TermUniverse> u, const FinStructure& m, const std::vector<int>& vals) {
    const auto& L = u->signature();
    std::vector<long> labels(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
      labels[i] = static_cast<long>(vals[i]) * L.sort_count() + u->node(static_cast<int>(i)).sort;
    AType a = from_labels(u, labels, {});
    std::vector<int> img;
    for (std::size_t r = 0; r < L.relations().size(); ++r) {
      const auto& rs = L.relations()[r];
      a.for_each_class_tuple(rs.args, [&](const std::vector<int>& t) {
        img.clear();
        for (int c : t) img.push_back(vals[a.rep_[c]]);
        if (m.holds(static_cast<int>(r), img)) a.rel_[r].insert(t);
      });
    }
    return a;
  }

  // Every atom over U: one class per sort, every relation full.
  static AType full(std::shared_ptr<const TermUniverse> u) {
    std::vector<long> labels(u->size());
    for (int i = 0; i < u->size(); ++i) labels[i] = u->node(i).sort;
    AType a = from_labels(u, labels, {});
    const auto& L = a.u_->signature();
    for (std::size_t r = 0; r < L.relations().size(); ++r)
      a.for_each_class_tuple(L.relations()[r].args, [&](const std::vector<int>& t) { a.rel_[r].insert(t); });
    return a;
  }

  const TermUniverse& universe() const { return *u_; }
  const std::shared_ptr<const TermUniverse>& universe_ptr() const { return u_; }
  int class_count() const { return static_cast<int>(rep_.size()); }
  int class_of(int node) const { return cls_[node]; }
  int representative(int c) const { return rep_[c]; }
  SortId class_sort(int c) const { return u_->node(rep_[c]).sort; }
  const std::set<std::vector<int>>& relation(int r) const { return rel_[r]; }

  bool equal(int a, int b) const { return cls_[a] == cls_[b]; }
  bool holds(int r, const std::vector<int>& nodes) const {
    std::vector<int> c;
    for (int n : nodes) c.push_back(cls_[n]);
    return rel_[r].count(c) > 0;
  }
  bool contains(const Atom& a) const {
    if (a.is_equality()) return equal(u_->require(a.args[0]), u_->require(a.args[1]));
    std::vector<int> nodes;
    for (const auto& t : a.args) nodes.push_back(u_->require(t));
    return holds(a.relation, nodes);
  }
  bool contains_all(const std::vector<Atom>& atoms) const {
    return std::all_of(atoms.begin(), atoms.end(), [&](const Atom& a) { return contains(a); });
  }

  // Every atom over U holds (the degenerate a-type).
  bool is_full() const { return *this == full(u_); }

  bool subset_of(const AType& o) const {
    std::vector<int> image(rep_.size(), -1);
    for (std::size_t i = 0; i < cls_.size(); ++i) {
      int& m = image[cls_[i]];
      if (m < 0) m = o.cls_[i];
      else if (m != o.cls_[i]) return false;
    }
    for (std::size_t r = 0; r < rel_.size(); ++r)
      for (const auto& t : rel_[r]) {
        std::vector<int> u;
        for (int c : t) u.push_back(image[c]);
        if (!o.rel_[r].count(u)) return false;
      }
    return true;
  }

  // Intersection of the two atom sets.
  AType meet(const AType& o) const {
    std::vector<long> labels(cls_.size());
    long width = static_cast<long>(o.rep_.size()) + 1;
    for (std::size_t i = 0; i < cls_.size(); ++i) labels[i] = cls_[i] * width + o.cls_[i];
    AType m = from_labels(u_, labels, {});
    // class of the meet → (class here, class there)
    std::vector<std::pair<int, int>> origin(m.rep_.size());
    std::map<std::pair<int, int>, int> back;
    for (std::size_t c = 0; c < m.rep_.size(); ++c) {
      origin[c] = {cls_[m.rep_[c]], o.cls_[m.rep_[c]]};
      back[origin[c]] = static_cast<int>(c);
    }
    std::vector<std::vector<int>> over(rep_.size());
    for (std::size_t c = 0; c < m.rep_.size(); ++c) over[origin[c].first].push_back(static_cast<int>(c));
    for (std::size_t r = 0; r < rel_.size(); ++r)
      for (const auto& t : rel_[r]) {
        std::vector<int> sizes;
        for (int c : t) sizes.push_back(static_cast<int>(over[c].size()));
        for (TupleCounter tc(sizes); !tc.done(); tc.next()) {
          std::vector<int> mt, ot;
          for (std::size_t j = 0; j < t.size(); ++j) {
            int c = over[t[j]][tc.digits()[j]];
            mt.push_back(c);
            ot.push_back(origin[c].second);
          }
          if (o.rel_[r].count(ot)) m.rel_[r].insert(std::move(mt));
        }
      }
    return m;
  }

  bool operator==(const AType& o) const { return cls_ == o.cls_ && rel_ == o.rel_; }
  bool operator<(const AType& o) const { return std::tie(cls_, rel_) < std::tie(o.cls_, o.rel_); }

  // A generating set: t = rep for every non-representative t, and the
  // relation facts on representatives.
  std::vector<Atom> basis() const {
    std::vector<Atom> out;
    for (std::size_t i = 0; i < cls_.size(); ++i)
      if (rep_[cls_[i]] != static_cast<int>(i))
        out.push_back(Atom::equality(u_->term(rep_[cls_[i]]), u_->term(static_cast<int>(i))));
    for (std::size_t r = 0; r < rel_.size(); ++r)
      for (const auto& t : rel_[r]) {
        std::vector<Term> args;
        for (int c : t) args.push_back(u_->term(rep_[c]));
        out.push_back(Atom::apply(u_->signature(), static_cast<int>(r), std::move(args)));
      }
    return out;
  }

  template <class F>
  void for_each_class_tuple(const std::vector<SortId>& sorts, F&& f) const {
    std::vector<std::vector<int>> by_sort(u_->signature().sort_count());
    for (std::size_t c = 0; c < rep_.size(); ++c) by_sort[class_sort(static_cast<int>(c))].push_back(static_cast<int>(c));
    std::vector<int> sizes;
    for (SortId s : sorts) sizes.push_back(static_cast<int>(by_sort[s].size()));
    std::vector<int> t(sorts.size());
    for (TupleCounter tc(sizes); !tc.done(); tc.next()) {
      for (std::size_t j = 0; j < sorts.size(); ++j) t[j] = by_sort[sorts[j]][tc.digits()[j]];
      f(t);
    }
  }

 private:
  std::shared_ptr<const TermUniverse> u_;
  std::vector<int> cls_;
  std::vector<int> rep_;
  std::vector<std::set<std::vector<int>>> rel_;
};

inline AType meet_all(const std::vector<AType>& types, std::shared_ptr<const TermUniverse> u) {
  if (types.empty()) return AType::full(std::move(u));
  AType m = types[0];
  for (std::size_t i = 1; i < types.size(); ++i) m = m.meet(types[i]);
  return m;
}

inline std::vector<Term> terms_of(const std::vector<Atom>& atoms) {
  std::vector<Term> out;
  for (const auto& a : atoms) out.insert(out.end(), a.args.begin(), a.args.end());
  return out;
}

// Universe for the a-types of A[x̄] at depth d, containing the terms of `atoms`.
inline std::shared_ptr<const TermUniverse> make_universe(std::shared_ptr<const FinStructure> base,
                                                         std::vector<Variable> vars, int depth,
                                                         const std::vector<Atom>& atoms = {}) {
  auto sig = base->signature_ptr();
  return std::make_shared<const TermUniverse>(sig, std::move(base), std::move(vars), depth, terms_of(atoms));
}

// π̃ on U: union-find congruence closure of D⁺A ∪ π over the nodes of U.
// Relations end up saturated because facts are stored on classes.
inline AType close(std::shared_ptr<const TermUniverse> u, const std::vector<Atom>& pi) {
  const int n = u->size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  };
  const auto& L = u->signature();
  std::vector<std::vector<std::vector<int>>> facts(L.relations().size());
  if (const auto& a = u->base()) {
    std::vector<int> args;
    for (int i = 0; i < n; ++i) {
      const auto& nd = u->node(i);
      if (nd.kind == Term::Kind::constant) {
        unite(i, u->element(nd.sort, a->constant(nd.symbol)));
      } else if (nd.kind == Term::Kind::apply) {
        bool ground = true;
        args.clear();
        for (int c : nd.children) {
          if (u->node(c).kind != Term::Kind::parameter) {
            ground = false;
            break;
          }
          args.push_back(u->node(c).symbol);
        }
        if (ground) unite(i, u->element(nd.sort, a->apply(nd.symbol, args)));
      }
    }
    for (std::size_t r = 0; r < L.relations().size(); ++r) {
      const auto& rs = L.relations()[r];
      for (TupleCounter tc(a->arg_sizes(rs.args)); !tc.done(); tc.next())
        if (a->holds(static_cast<int>(r), tc.digits())) {
          std::vector<int> t;
          for (std::size_t j = 0; j < rs.args.size(); ++j) t.push_back(u->element(rs.args[j], tc.digits()[j]));
          facts[r].push_back(std::move(t));
        }
    }
  }
  for (const auto& atom : pi) {
    if (atom.is_equality()) {
      unite(u->require(atom.args[0]), u->require(atom.args[1]));
    } else {
      std::vector<int> t;
      for (const auto& term : atom.args) t.push_back(u->require(term));
      facts[atom.relation].push_back(std::move(t));
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<int, std::vector<int>>, int> table;
    for (int i = 0; i < n; ++i) {
      const auto& nd = u->node(i);
      if (nd.kind != Term::Kind::apply) continue;
      std::vector<int> kids;
      for (int c : nd.children) kids.push_back(find(c));
      auto [it, fresh] = table.emplace(std::make_pair(nd.symbol, std::move(kids)), i);
      if (!fresh && unite(it->second, i)) changed = true;
    }
  }
  std::vector<long> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = find(i);
  return AType::from_labels(u, labels, facts);
}

// ---------------------------------------------------------------------------
// Quotients of variable-free a-types

struct QuotientResult {
  FinStructure quotient;
  Hom projection;  // A → A/π
};

inline void require_variable_free(const TermUniverse& u, const char* what) {
  if (!u.base() || !u.variables().empty())
    throw InputError(std::string(what) + " needs a variable-free a-type over a finite structure");
}

// A/π: one element per class, named after its smallest element.
inline QuotientResult quotient(const AType& p, std::string name = "") {
  const auto& u = p.universe();
  require_variable_free(u, "quotient");
  const auto& a = *u.base();
  const auto& L = a.signature();
  std::vector<std::vector<std::string>> carriers(L.sort_count());
  std::vector<int> class_to_element(p.class_count(), -1);
  Hom proj;
  for (int s = 0; s < L.sort_count(); ++s) {
    std::vector<int> m(a.size(s));
    for (int e = 0; e < a.size(s); ++e) {
      int c = p.class_of(u.element(s, e));
      if (class_to_element[c] < 0) {
        class_to_element[c] = static_cast<int>(carriers[s].size());
        carriers[s].push_back(a.element_name(s, e));
      }
      m[e] = class_to_element[c];
    }
    proj.map.push_back(std::move(m));
  }
  // first element of each quotient class, back in A
  std::vector<std::vector<int>> rep(L.sort_count());
  for (int s = 0; s < L.sort_count(); ++s) {
    rep[s].assign(carriers[s].size(), -1);
    for (int e = 0; e < a.size(s); ++e)
      if (rep[s][proj.map[s][e]] < 0) rep[s][proj.map[s][e]] = e;
  }
  FinStructure q(a.signature_ptr(), name.empty() ? a.name() + "_quotient" : name, carriers);
  std::vector<int> args;
  for (std::size_t f = 0; f < L.functions().size(); ++f) {
    const auto& fs = L.functions()[f];
    for (TupleCounter tc(q.arg_sizes(fs.args)); !tc.done(); tc.next()) {
      args.clear();
      for (std::size_t j = 0; j < fs.args.size(); ++j) args.push_back(rep[fs.args[j]][tc.digits()[j]]);
      q.set_function(static_cast<int>(f), tc.digits(), proj.map[fs.result][a.apply(static_cast<int>(f), args)]);
    }
  }
  for (std::size_t r = 0; r < L.relations().size(); ++r) {
    const auto& rs = L.relations()[r];
    for (TupleCounter tc(q.arg_sizes(rs.args)); !tc.done(); tc.next()) {
      std::vector<int> nodes;
      for (std::size_t j = 0; j < rs.args.size(); ++j) nodes.push_back(u.element(rs.args[j], rep[rs.args[j]][tc.digits()[j]]));
      q.set_relation(static_cast<int>(r), tc.digits(), p.holds(static_cast<int>(r), nodes));
    }
  }
  for (std::size_t c = 0; c < L.constants().size(); ++c) {
    SortId s = L.constants()[c].sort;
    q.set_constant(static_cast<int>(c), proj.map[s][a.constant(static_cast<int>(c))]);
  }
  return {std::move(q), std::move(proj)};
}

// tp_a(f) for a hom f: A → B, over a variable-free universe of A.
inline AType atype_of(const Hom& f, const FinStructure& b, std::shared_ptr<const TermUniverse> u) {
  require_variable_free(*u, "atype_of");
  return AType::of_values(u, b, u->evaluate(b, &f.map, {}));
}

struct IsoReport {
  bool holds = false;
  std::string failure;
  FinStructure quotient;
  FinStructure image;
  Hom iso;  // A/tp_a(f) → f(A)
};

// A/tp_a(f) ≅ f(A): builds both sides and checks the induced map.
inline IsoReport check_iso_theorem(const Hom& f, const FinStructure& b, std::shared_ptr<const TermUniverse> u) {
  IsoReport rep;
  AType p = atype_of(f, b, u);
  auto q = quotient(p);
  auto im = image(f, b);
  rep.quotient = q.quotient;
  rep.image = im.structure;
  const auto& L = b.signature();
  std::vector<std::vector<int>> inverse_incl(L.sort_count());
  for (int s = 0; s < L.sort_count(); ++s) {
    inverse_incl[s].assign(b.size(s), -1);
    for (std::size_t i = 0; i < im.inclusion.map[s].size(); ++i) inverse_incl[s][im.inclusion.map[s][i]] = static_cast<int>(i);
  }
  for (int s = 0; s < L.sort_count(); ++s) {
    std::vector<int> m(q.quotient.size(s), -1);
    for (int e = 0; e < u->base()->size(s); ++e) {
      int target = inverse_incl[s][f.map[s][e]];
      int& slot = m[q.projection.map[s][e]];
      if (slot >= 0 && slot != target) {
        rep.failure = "induced map is not well defined at '" + u->base()->element_name(s, e) + "'";
        return rep;
      }
      slot = target;
    }
    rep.iso.map.push_back(std::move(m));
  }
  if (!is_hom(q.quotient, im.structure, rep.iso, HomMode::embedding)) {
    rep.failure = "induced map is not an embedding";
    return rep;
  }
  if (!is_surjective(rep.iso, im.structure)) {
    rep.failure = "induced map is not onto the image";
    return rep;
  }
  rep.holds = true;
  return rep;
}

// ---------------------------------------------------------------------------
// Enumeration of closed a-types of a finite structure

// Calls f(labels) for every congruence of A, labels[s][e] = class index.
inline void for_each_congruence(const FinStructure& a, const std::function<void(const std::vector<std::vector<int>>&)>& f) {
  const auto& L = a.signature();
  std::vector<std::vector<int>> labels(L.sort_count());
  for (int s = 0; s < L.sort_count(); ++s) labels[s].assign(a.size(s), 0);
  auto compatible = [&] {
    std::vector<int> x, y;
    for (std::size_t fi = 0; fi < L.functions().size(); ++fi) {
      const auto& fs = L.functions()[fi];
      std::map<std::vector<int>, int> seen;
      for (TupleCounter tc(a.arg_sizes(fs.args)); !tc.done(); tc.next()) {
        x.clear();
        for (std::size_t j = 0; j < fs.args.size(); ++j) x.push_back(labels[fs.args[j]][tc.digits()[j]]);
        int v = labels[fs.result][a.apply(static_cast<int>(fi), tc.digits())];
        auto [it, fresh] = seen.emplace(x, v);
        if (!fresh && it->second != v) return false;
      }
    }
    return true;
  };
  // restricted growth strings, sort by sort
  std::function<void(int, int, int)> rec = [&](int s, int e, int blocks) {
    if (s == L.sort_count()) {
      if (compatible()) f(labels);
      return;
    }
    if (e == a.size(s)) {
      rec(s + 1, 0, 0);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      labels[s][e] = b;
      rec(s, e + 1, std::max(blocks, b + 1));
    }
  };
  rec(0, 0, 0);
}

// Every closed a-type of A over the variable-free universe u: a congruence
// together with relation sets containing the images of A's relations.
inline void for_each_closed_atype(std::shared_ptr<const TermUniverse> u, const std::function<void(const AType&)>& f) {
  require_variable_free(*u, "closed a-type enumeration");
  const auto& a = *u->base();
  const auto& L = a.signature();
  auto values = u->evaluate(a, nullptr, {});
  for_each_congruence(a, [&](const std::vector<std::vector<int>>& cong) {
    std::vector<long> labels(u->size());
    int stride = 0;
    for (int s = 0; s < L.sort_count(); ++s) stride = std::max(stride, a.size(s));
    for (int i = 0; i < u->size(); ++i) {
      SortId s = u->node(i).sort;
      labels[i] = static_cast<long>(s) * (stride + 1) + cong[s][values[i]];
    }
    std::vector<std::vector<std::vector<int>>> facts(L.relations().size());
    for (std::size_t r = 0; r < L.relations().size(); ++r) {
      const auto& rs = L.relations()[r];
      for (TupleCounter tc(a.arg_sizes(rs.args)); !tc.done(); tc.next())
        if (a.holds(static_cast<int>(r), tc.digits())) {
          std::vector<int> t;
          for (std::size_t j = 0; j < rs.args.size(); ++j) t.push_back(u->element(rs.args[j], tc.digits()[j]));
          facts[r].push_back(std::move(t));
        }
    }
    AType base = AType::from_labels(u, labels, facts);
    // optional extra relation tuples on classes
    std::vector<std::pair<int, std::vector<int>>> optional;
    for (std::size_t r = 0; r < L.relations().size(); ++r)
      base.for_each_class_tuple(L.relations()[r].args, [&](const std::vector<int>& t) {
        if (!base.relation(static_cast<int>(r)).count(t)) optional.emplace_back(static_cast<int>(r), t);
      });
    if (optional.size() > 20) throw InputError("too many closed a-types to enumerate");
    for (long mask = 0; mask < (1L << optional.size()); ++mask) {
      auto extra = facts;
      for (std::size_t k = 0; k < optional.size(); ++k)
        if ((mask >> k) & 1) {
          std::vector<int> nodes;
          for (int c : optional[k].second) nodes.push_back(base.representative(c));
          extra[optional[k].first].push_back(std::move(nodes));
        }
      f(AType::from_labels(u, labels, extra));
    }
  });
}

}  // namespace quasivar
