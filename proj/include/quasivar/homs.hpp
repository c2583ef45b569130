#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "structure.hpp"

namespace quasivar {

// A per-sort element map between two structures over the same signature.
struct Hom {
  std::vector<std::vector<int>> map;

  int operator()(SortId s, int e) const { return map[s][e]; }
  bool operator==(const Hom&) const = default;
  bool operator<(const Hom& o) const { return map < o.map; }
};

enum class HomMode { hom, embedding };

inline Hom identity_hom(const FinStructure& a) {
  Hom h;
  for (int s = 0; s < a.signature().sort_count(); ++s) {
    std::vector<int> m(a.size(s));
    for (int e = 0; e < a.size(s); ++e) m[e] = e;
    h.map.push_back(std::move(m));
  }
  return h;
}

// g ∘ f
inline Hom compose(const Hom& g, const Hom& f) {
  Hom h = f;
  for (std::size_t s = 0; s < h.map.size(); ++s)
    for (auto& e : h.map[s]) e = g.map[s][e];
  return h;
}

inline bool is_injective(const Hom& f) {
  for (const auto& m : f.map) {
    std::set<int> seen(m.begin(), m.end());
    if (seen.size() != m.size()) return false;
  }
  return true;
}

inline bool is_surjective(const Hom& f, const FinStructure& b) {
  for (std::size_t s = 0; s < f.map.size(); ++s) {
    std::set<int> seen(f.map[s].begin(), f.map[s].end());
    if (static_cast<int>(seen.size()) != b.size(static_cast<int>(s))) return false;
  }
  return true;
}

inline void require_same_signature(const FinStructure& a, const FinStructure& b) {
  if (!(a.signature() == b.signature()))
    throw InputError("structures '" + a.name() + "' and '" + b.name() + "' have different signatures");
}

// Checks the hom conditions (and reflection of relations for embeddings).
inline bool is_hom(const FinStructure& a, const FinStructure& b, const Hom& f, HomMode mode = HomMode::hom) {
  const auto& sig = a.signature();
  for (std::size_t c = 0; c < sig.constants().size(); ++c) {
    SortId s = sig.constants()[c].sort;
    if (f.map[s][a.constant(static_cast<int>(c))] != b.constant(static_cast<int>(c))) return false;
  }
  std::vector<int> img;
  for (std::size_t fi = 0; fi < sig.functions().size(); ++fi) {
    const auto& fs = sig.functions()[fi];
    for (TupleCounter tc(a.arg_sizes(fs.args)); !tc.done(); tc.next()) {
      img.clear();
      for (std::size_t i = 0; i < fs.args.size(); ++i) img.push_back(f.map[fs.args[i]][tc.digits()[i]]);
      if (f.map[fs.result][a.apply(static_cast<int>(fi), tc.digits())] != b.apply(static_cast<int>(fi), img))
        return false;
    }
  }
  for (std::size_t r = 0; r < sig.relations().size(); ++r) {
    const auto& rs = sig.relations()[r];
    for (TupleCounter tc(a.arg_sizes(rs.args)); !tc.done(); tc.next()) {
      img.clear();
      for (std::size_t i = 0; i < rs.args.size(); ++i) img.push_back(f.map[rs.args[i]][tc.digits()[i]]);
      bool in_a = a.holds(static_cast<int>(r), tc.digits());
      bool in_b = b.holds(static_cast<int>(r), img);
      if (in_a && !in_b) return false;
      if (mode == HomMode::embedding && in_b && !in_a) return false;
    }
  }
  return mode == HomMode::hom || is_injective(f);
}

namespace detail {

// Backtracking search for homs A → B. Elements of A are assigned in canonical
// order (sort, then carrier position); candidate values in carrier order, so
// solutions come out lexicographically ordered on the element map.
class HomSearch {
 public:
  HomSearch(const FinStructure& a, const FinStructure& b, HomMode mode, const std::vector<std::vector<int>>* fixed)
      : a_(a), b_(b), mode_(mode) {
    require_same_signature(a, b);
    const auto& sig = a.signature();
    int n = 0;
    for (int s = 0; s < sig.sort_count(); ++s) {
      offset_.push_back(n);
      for (int e = 0; e < a.size(s); ++e) slots_.emplace_back(s, e);
      n += a.size(s);
    }
    value_.assign(n, -1);
    forced_.assign(n, -1);
    if (fixed) {
      for (int s = 0; s < sig.sort_count(); ++s)
        for (int e = 0; e < a.size(s) && e < static_cast<int>((*fixed)[s].size()); ++e)
          if ((*fixed)[s][e] >= 0) force(s, e, (*fixed)[s][e]);
    }
    for (std::size_t c = 0; c < sig.constants().size(); ++c) {
      SortId s = sig.constants()[c].sort;
      force(s, a.constant(static_cast<int>(c)), b.constant(static_cast<int>(c)));
    }
    checks_.assign(n, {});
    for (std::size_t fi = 0; fi < sig.functions().size(); ++fi) {
      const auto& fs = sig.functions()[fi];
      for (TupleCounter tc(a.arg_sizes(fs.args)); !tc.done(); tc.next()) {
        Check c{true, static_cast<int>(fi), {}, slot(fs.result, a.apply(static_cast<int>(fi), tc.digits())), true};
        for (std::size_t i = 0; i < fs.args.size(); ++i) c.args.push_back(slot(fs.args[i], tc.digits()[i]));
        add_check(std::move(c));
      }
    }
    for (std::size_t r = 0; r < sig.relations().size(); ++r) {
      const auto& rs = sig.relations()[r];
      for (TupleCounter tc(a.arg_sizes(rs.args)); !tc.done(); tc.next()) {
        bool in_a = a.holds(static_cast<int>(r), tc.digits());
        if (!in_a && mode != HomMode::embedding) continue;
        Check c{false, static_cast<int>(r), {}, -1, in_a};
        for (std::size_t i = 0; i < rs.args.size(); ++i) c.args.push_back(slot(rs.args[i], tc.digits()[i]));
        add_check(std::move(c));
      }
    }
  }

  // Calls visit(hom) for each solution; stops when visit returns false.
  void run(const std::function<bool(const Hom&)>& visit) {
    if (infeasible_) return;
    visit_ = &visit;
    stop_ = false;
    used_.assign(b_.signature().sort_count(), {});
    for (int s = 0; s < b_.signature().sort_count(); ++s) used_[s].assign(b_.size(s), 0);
    descend(0);
  }

 private:
  struct Check {
    bool function;
    int symbol;
    std::vector<int> args;
    int result;
    bool positive;
  };

  int slot(SortId s, int e) const { return offset_[s] + e; }

  void force(SortId s, int e, int v) {
    int k = slot(s, e);
    if (v < 0 || v >= b_.size(s) || (forced_[k] >= 0 && forced_[k] != v)) infeasible_ = true;
    forced_[k] = v;
  }

  void add_check(Check c) {
    int last = c.result;
    for (int x : c.args) last = std::max(last, x);
    checks_[last].push_back(std::move(c));
  }

  bool consistent(int k) {
    std::vector<int> img;
    for (const auto& c : checks_[k]) {
      img.clear();
      for (int x : c.args) img.push_back(value_[x]);
      if (c.function) {
        if (b_.apply(c.symbol, img) != value_[c.result]) return false;
      } else if (b_.holds(c.symbol, img) != c.positive) {
        return false;
      }
    }
    return true;
  }

  void descend(int k) {
    if (stop_) return;
    if (k == static_cast<int>(slots_.size())) {
      Hom h;
      const auto& sig = a_.signature();
      for (int s = 0; s < sig.sort_count(); ++s)
        h.map.emplace_back(value_.begin() + offset_[s], value_.begin() + offset_[s] + a_.size(s));
      if (!(*visit_)(h)) stop_ = true;
      return;
    }
    SortId s = slots_[k].first;
    int lo = 0, hi = b_.size(s);
    if (forced_[k] >= 0) {
      lo = forced_[k];
      hi = lo + 1;
    }
    for (int v = lo; v < hi && !stop_; ++v) {
      if (mode_ == HomMode::embedding && used_[s][v]) continue;
      value_[k] = v;
      used_[s][v] = 1;
      if (consistent(k)) descend(k + 1);
      used_[s][v] = 0;
    }
    value_[k] = -1;
  }

  const FinStructure& a_;
  const FinStructure& b_;
  HomMode mode_;
  std::vector<int> offset_;
  std::vector<std::pair<SortId, int>> slots_;
  std::vector<int> value_, forced_;
  std::vector<std::vector<Check>> checks_;
  std::vector<std::vector<char>> used_;
  const std::function<bool(const Hom&)>* visit_ = nullptr;
  bool infeasible_ = false;
  bool stop_ = false;
};

}  // namespace detail

// `fixed` optionally pins some elements (entries < 0 are free).
inline void for_each_hom(const FinStructure& a, const FinStructure& b, HomMode mode,
                         const std::function<bool(const Hom&)>& visit,
                         const std::vector<std::vector<int>>* fixed = nullptr) {
  detail::HomSearch(a, b, mode, fixed).run(visit);
}

inline std::vector<Hom> enumerate_homs(const FinStructure& a, const FinStructure& b, HomMode mode = HomMode::hom,
                                       const std::vector<std::vector<int>>* fixed = nullptr) {
  std::vector<Hom> out;
  for_each_hom(a, b, mode, [&](const Hom& h) {
    out.push_back(h);
    return true;
  }, fixed);
  return out;
}

inline std::optional<Hom> first_hom(const FinStructure& a, const FinStructure& b, HomMode mode = HomMode::hom,
                                    const std::vector<std::vector<int>>* fixed = nullptr) {
  std::optional<Hom> out;
  for_each_hom(a, b, mode, [&](const Hom& h) {
    out = h;
    return false;
  }, fixed);
  return out;
}

struct MemberWitness {
  int member = -1;
  Hom hom;
};

// Membership in the universal class U_K, relative to the explicit list K.
inline std::optional<MemberWitness> in_universal_class(const FinStructure& a, const std::vector<FinStructure>& k) {
  for (std::size_t i = 0; i < k.size(); ++i)
    if (auto e = first_hom(a, k[i], HomMode::embedding)) return MemberWitness{static_cast<int>(i), *e};
  return std::nullopt;
}

// An atomic fact of A that no hom into K refutes (a ≠ b, or ¬R(ā)).
struct UnseparatedFact {
  int relation = -1;  // -1: equality
  SortId sort = 0;
  std::vector<int> args;
};

struct QuasivarietyVerdict {
  bool member = false;
  std::vector<MemberWitness> family;
  std::optional<UnseparatedFact> unseparated;
};

// Membership in the quasivariety W_K by separation: every atomic fact false in
// A must be false under some hom into a member of K. The witness family is
// chosen greedily in canonical hom order.
inline QuasivarietyVerdict in_quasivariety(const FinStructure& a, const std::vector<FinStructure>& k) {
  const auto& sig = a.signature();
  struct Fact {
    int relation;
    SortId sort;
    std::vector<int> args;
    bool done = false;
  };
  std::vector<Fact> facts;
  for (int s = 0; s < sig.sort_count(); ++s)
    for (int x = 0; x < a.size(s); ++x)
      for (int y = x + 1; y < a.size(s); ++y) facts.push_back({-1, s, {x, y}});
  for (std::size_t r = 0; r < sig.relations().size(); ++r)
    for (TupleCounter tc(a.arg_sizes(sig.relations()[r].args)); !tc.done(); tc.next())
      if (!a.holds(static_cast<int>(r), tc.digits())) facts.push_back({static_cast<int>(r), 0, tc.digits()});

  QuasivarietyVerdict out;
  std::size_t remaining = facts.size();
  std::vector<int> img;
  for (std::size_t i = 0; i < k.size() && remaining > 0; ++i) {
    for_each_hom(a, k[i], HomMode::hom, [&](const Hom& h) {
      bool useful = false;
      for (auto& f : facts) {
        if (f.done) continue;
        bool refuted;
        if (f.relation < 0) {
          refuted = h.map[f.sort][f.args[0]] != h.map[f.sort][f.args[1]];
        } else {
          const auto& rs = sig.relations()[f.relation];
          img.clear();
          for (std::size_t j = 0; j < rs.args.size(); ++j) img.push_back(h.map[rs.args[j]][f.args[j]]);
          refuted = !k[i].holds(f.relation, img);
        }
        if (refuted) {
          f.done = true;
          useful = true;
          --remaining;
        }
      }
      if (useful) out.family.push_back({static_cast<int>(i), h});
      return remaining > 0;
    });
  }
  out.member = remaining == 0;
  if (!out.member)
    for (const auto& f : facts)
      if (!f.done) {
        out.unseparated = UnseparatedFact{f.relation, f.sort, f.args};
        break;
      }
  return out;
}

}  // namespace quasivar
