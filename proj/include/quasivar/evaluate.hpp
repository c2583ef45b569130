#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "structure.hpp"

namespace quasivar {

// How parameters and variables are read in a target structure M. Parameters
// name elements of a base structure A; `params` maps them into M (null means
// A = M with the identity). Variables are looked up by name and sort.
struct Valuation {
  const std::vector<std::vector<int>>* params = nullptr;
  std::vector<std::pair<Variable, int>> vars;

  int variable(const std::string& name, SortId sort) const {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
      if (it->first.name == name && it->first.sort == sort) return it->second;
    throw InputError("variable '" + name + "' is not assigned");
  }
};

inline int eval_term(const Term& t, const FinStructure& m, const Valuation& v) {
  switch (t.kind) {
    case Term::Kind::variable:
      return v.variable(t.name, t.sort);
    case Term::Kind::constant:
      return m.constant(t.symbol);
    case Term::Kind::parameter:
      if (!v.params) {
        if (t.symbol < 0 || t.symbol >= m.size(t.sort)) throw InputError("parameter '" + t.name + "' out of range");
        return t.symbol;
      }
      return (*v.params)[t.sort][t.symbol];
    case Term::Kind::apply: {
      std::vector<int> args;
      args.reserve(t.args.size());
      for (const auto& a : t.args) args.push_back(eval_term(a, m, v));
      return m.apply(t.symbol, args);
    }
  }
  return -1;
}

inline bool eval_atom(const Atom& a, const FinStructure& m, const Valuation& v) {
  if (a.is_equality()) return eval_term(a.args[0], m, v) == eval_term(a.args[1], m, v);
  std::vector<int> args;
  for (const auto& t : a.args) args.push_back(eval_term(t, m, v));
  return m.holds(a.relation, args);
}

inline bool eval_conjunction(const std::vector<Atom>& atoms, const FinStructure& m, const Valuation& v) {
  for (const auto& a : atoms)
    if (!eval_atom(a, m, v)) return false;
  return true;
}

namespace detail {

// Calls body(valuation) for every assignment of `vars` in m, on top of `base`.
// Stops early when body returns false; returns whether it ran to completion.
template <class Body>
bool for_each_assignment(const std::vector<Variable>& vars, const FinStructure& m, const Valuation& base, Body&& body) {
  std::vector<int> sizes;
  for (const auto& x : vars) sizes.push_back(m.size(x.sort));
  Valuation v = base;
  for (const auto& x : vars) v.vars.emplace_back(x, 0);
  std::size_t off = base.vars.size();
  for (TupleCounter tc(sizes); !tc.done(); tc.next()) {
    for (std::size_t i = 0; i < vars.size(); ++i) v.vars[off + i].second = tc.digits()[i];
    if (!body(v)) return false;
  }
  return true;
}

inline bool matrix_holds(const Sentence& s, const FinStructure& m, const Valuation& v) {
  switch (s.shape) {
    case Sentence::Shape::atomic:
      return eval_atom(s.conclusions[0], m, v);
    case Sentence::Shape::quasi_algebraic:
    case Sentence::Shape::universal: {
      if (!eval_conjunction(s.premises, m, v)) return true;
      for (const auto& c : s.conclusions)
        if (eval_atom(c, m, v)) return true;
      return false;
    }
    case Sentence::Shape::h_universal:
      return !eval_conjunction(s.premises, m, v);
    case Sentence::Shape::coherent:
      return !for_each_assignment(s.existentials, m, v,
                                  [&](const Valuation& w) { return !eval_conjunction(s.premises, m, w); });
  }
  return false;
}

}  // namespace detail

// An assignment of the universal prefix falsifying the sentence, if any.
inline std::optional<std::vector<int>> find_counterexample(const Sentence& s, const FinStructure& m,
                                                           const Valuation& base = {}) {
  std::optional<std::vector<int>> found;
  detail::for_each_assignment(s.prefix, m, base, [&](const Valuation& v) {
    if (detail::matrix_holds(s, m, v)) return true;
    std::vector<int> w;
    for (std::size_t i = base.vars.size(); i < v.vars.size(); ++i) w.push_back(v.vars[i].second);
    found = std::move(w);
    return false;
  });
  return found;
}

inline bool evaluate(const Sentence& s, const FinStructure& m, const Valuation& base = {}) {
  return !find_counterexample(s, m, base);
}

// True in m under every assignment of the parameters of `a` into m.
inline bool holds_for_all_parameters(const Sentence& s, const FinStructure& a, const FinStructure& m) {
  const auto& sig = a.signature();
  std::vector<int> sizes;
  std::vector<std::pair<SortId, int>> slots;
  for (int srt = 0; srt < sig.sort_count(); ++srt)
    for (int e = 0; e < a.size(srt); ++e) {
      slots.emplace_back(srt, e);
      sizes.push_back(m.size(srt));
    }
  std::vector<std::vector<int>> params(sig.sort_count());
  for (int srt = 0; srt < sig.sort_count(); ++srt) params[srt].assign(a.size(srt), 0);
  for (TupleCounter tc(sizes); !tc.done(); tc.next()) {
    for (std::size_t i = 0; i < slots.size(); ++i) params[slots[i].first][slots[i].second] = tc.digits()[i];
    Valuation v;
    v.params = &params;
    if (!evaluate(s, m, v)) return false;
  }
  return true;
}

}  // namespace quasivar
