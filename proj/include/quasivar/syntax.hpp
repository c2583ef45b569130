#pragma once

#include <algorithm>
#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "error.hpp"
#include "signature.hpp"

namespace quasivar {

struct Variable {
  std::string name;
  SortId sort = 0;
  bool operator==(const Variable&) const = default;
  bool operator<(const Variable& o) const { return std::tie(name, sort) < std::tie(o.name, o.sort); }
};

// Terms over L ⊔ A ⊔ x̄. Parameters are elements of a base structure acting
// as fresh constants; `symbol` then holds the element index in its sort.
struct Term {
  enum class Kind { variable, constant, parameter, apply };

  Kind kind = Kind::variable;
  std::string name;
  int symbol = -1;
  SortId sort = 0;
  std::vector<Term> args;

  static Term variable(const Variable& v) { return {Kind::variable, v.name, -1, v.sort, {}}; }
  static Term constant(const Signature& sig, int index) {
    return {Kind::constant, sig.constants()[index].name, index, sig.constants()[index].sort, {}};
  }
  static Term parameter(std::string name, SortId sort, int element) {
    return {Kind::parameter, std::move(name), element, sort, {}};
  }
  static Term apply(const Signature& sig, int function, std::vector<Term> args) {
    const auto& f = sig.functions()[function];
    if (args.size() != f.args.size())
      throw InputError("function '" + f.name + "' expects " + std::to_string(f.args.size()) + " arguments");
    for (std::size_t i = 0; i < args.size(); ++i)
      if (args[i].sort != f.args[i])
        throw InputError("ill-sorted argument " + std::to_string(i + 1) + " of '" + f.name + "'");
    return {Kind::apply, f.name, function, f.result, std::move(args)};
  }

  int depth() const {
    int d = 0;
    for (const auto& a : args) d = std::max(d, a.depth() + 1);
    return d;
  }

  bool operator==(const Term& o) const {
    return kind == o.kind && name == o.name && symbol == o.symbol && sort == o.sort && args == o.args;
  }
  bool operator!=(const Term& o) const { return !(*this == o); }
  bool operator<(const Term& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (name != o.name) return name < o.name;
    if (symbol != o.symbol) return symbol < o.symbol;
    if (sort != o.sort) return sort < o.sort;
    return std::lexicographical_compare(args.begin(), args.end(), o.args.begin(), o.args.end());
  }
};

// Equality (relation < 0) or a relation symbol applied to terms.
struct Atom {
  int relation = -1;
  std::string name;
  std::vector<Term> args;

  static Atom equality(Term lhs, Term rhs) {
    if (lhs.sort != rhs.sort) throw InputError("equation between terms of different sorts");
    return {-1, "=", {std::move(lhs), std::move(rhs)}};
  }
  static Atom apply(const Signature& sig, int relation, std::vector<Term> args) {
    const auto& r = sig.relations()[relation];
    if (args.size() != r.args.size())
      throw InputError("relation '" + r.name + "' expects " + std::to_string(r.args.size()) + " arguments");
    for (std::size_t i = 0; i < args.size(); ++i)
      if (args[i].sort != r.args[i])
        throw InputError("ill-sorted argument " + std::to_string(i + 1) + " of '" + r.name + "'");
    return {relation, r.name, std::move(args)};
  }

  bool is_equality() const { return relation < 0; }

  bool operator==(const Atom& o) const { return relation == o.relation && name == o.name && args == o.args; }
  bool operator<(const Atom& o) const {
    if (relation != o.relation) return relation < o.relation;
    if (name != o.name) return name < o.name;
    return std::lexicographical_compare(args.begin(), args.end(), o.args.begin(), o.args.end());
  }
};

enum class Fragment { atomic, quasi_algebraic, universal, h_universal, coherent };

inline const char* fragment_name(Fragment f) {
  switch (f) {
    case Fragment::atomic: return "atomic";
    case Fragment::quasi_algebraic: return "quasi-algebraic";
    case Fragment::universal: return "universal";
    case Fragment::h_universal: return "h-universal";
    case Fragment::coherent: return "coherent";
  }
  return "?";
}

// ∀ prefix . matrix, where the matrix is one of the supported shapes:
//   atomic          conclusions = {φ}
//   quasi_algebraic ⋀premises ⇒ conclusions[0]
//   universal       ⋀premises ⇒ ⋁conclusions
//   h_universal     ¬⋀premises
//   coherent        ∃existentials ⋀premises
struct Sentence {
  enum class Shape { atomic, quasi_algebraic, universal, h_universal, coherent };

  std::vector<Variable> prefix;
  Shape shape = Shape::atomic;
  std::vector<Atom> premises;
  std::vector<Atom> conclusions;
  std::vector<Variable> existentials;

  static Sentence atomic(std::vector<Variable> prefix, Atom a) {
    Sentence s;
    s.prefix = std::move(prefix);
    s.shape = Shape::atomic;
    s.conclusions = {std::move(a)};
    return s;
  }
  static Sentence quasi_algebraic(std::vector<Variable> prefix, std::vector<Atom> premises, Atom conclusion) {
    Sentence s;
    s.prefix = std::move(prefix);
    s.shape = Shape::quasi_algebraic;
    s.premises = std::move(premises);
    s.conclusions = {std::move(conclusion)};
    return s;
  }
  // A single disjunct is normalised to the quasi-algebraic shape.
  static Sentence universal(std::vector<Variable> prefix, std::vector<Atom> premises, std::vector<Atom> conclusions) {
    if (conclusions.size() == 1)
      return quasi_algebraic(std::move(prefix), std::move(premises), std::move(conclusions[0]));
    Sentence s;
    s.prefix = std::move(prefix);
    s.shape = Shape::universal;
    s.premises = std::move(premises);
    s.conclusions = std::move(conclusions);
    return s;
  }
  static Sentence h_universal(std::vector<Variable> prefix, std::vector<Atom> premises) {
    Sentence s;
    s.prefix = std::move(prefix);
    s.shape = Shape::h_universal;
    s.premises = std::move(premises);
    return s;
  }
  static Sentence coherent(std::vector<Variable> prefix, std::vector<Variable> existentials, std::vector<Atom> body) {
    Sentence s;
    s.prefix = std::move(prefix);
    s.shape = Shape::coherent;
    s.existentials = std::move(existentials);
    s.premises = std::move(body);
    return s;
  }

  bool operator==(const Sentence&) const = default;
};

struct Theory {
  std::string name;
  std::shared_ptr<const Signature> signature;
  std::vector<Sentence> sentences;
};

namespace detail {

inline void collect_variables(const Term& t, std::set<Variable>& out) {
  if (t.kind == Term::Kind::variable) out.insert({t.name, t.sort});
  for (const auto& a : t.args) collect_variables(a, out);
}

}  // namespace detail

inline std::set<Variable> free_variables(const Atom& a) {
  std::set<Variable> out;
  for (const auto& t : a.args) detail::collect_variables(t, out);
  return out;
}

inline std::set<Variable> free_variables(const Sentence& s) {
  std::set<Variable> out;
  for (const auto* list : {&s.premises, &s.conclusions})
    for (const auto& a : *list)
      for (const auto& t : a.args) detail::collect_variables(t, out);
  for (const auto& v : s.prefix) out.erase(v);
  for (const auto& v : s.existentials) out.erase(v);
  return out;
}

// Most specific fragment tag. Throws for sentences outside the supported fragments.
inline Fragment classify_sentence(const Sentence& s) {
  if (!free_variables(s).empty())
    throw InputError("sentence has unbound variable '" + free_variables(s).begin()->name + "'");
  switch (s.shape) {
    case Sentence::Shape::atomic:
      return Fragment::atomic;
    case Sentence::Shape::quasi_algebraic:
      return Fragment::quasi_algebraic;
    case Sentence::Shape::universal:
      if (s.conclusions.empty()) return Fragment::h_universal;
      if (s.conclusions.size() == 1) return Fragment::quasi_algebraic;
      return Fragment::universal;
    case Sentence::Shape::h_universal:
      return Fragment::h_universal;
    case Sentence::Shape::coherent:
      if (!s.prefix.empty())
        throw InputError("existential matrix under a universal prefix is outside the supported fragments");
      return Fragment::coherent;
  }
  throw InputError("unknown sentence shape");
}

// ∀ȳ [⋀Φ ⇒ ⋁Ψ] shapes, including the atomic and quasi-algebraic special cases.
inline bool has_universal_shape(const Sentence& s) { return s.shape != Sentence::Shape::coherent; }

inline bool is_quasi_algebraic_compatible(const Sentence& s) {
  Fragment f = classify_sentence(s);
  return f == Fragment::atomic || f == Fragment::quasi_algebraic;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline bool is_plain_identifier(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == '_' || c == '\'' || u >= 0x80)) return false;
  }
  static const std::set<std::string> reserved = {"forall", "exists", "not", "true", "false"};
  return reserved.count(s) == 0;
}

}  // namespace detail

// Identifiers that are not plain (product element names, for instance) are quoted.
inline std::string print_name(const std::string& s) {
  if (detail::is_plain_identifier(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string print_term(const Term& t) {
  std::string out = print_name(t.name);
  if (t.kind == Term::Kind::apply) {
    out += "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ", ";
      out += print_term(t.args[i]);
    }
    out += ")";
  }
  return out;
}

inline std::string print_atom(const Atom& a) {
  if (a.is_equality()) return print_term(a.args[0]) + " = " + print_term(a.args[1]);
  std::string out = print_name(a.name) + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ", ";
    out += print_term(a.args[i]);
  }
  return out + ")";
}

inline std::string print_conjunction(const std::vector<Atom>& atoms) {
  if (atoms.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += " & ";
    out += print_atom(atoms[i]);
  }
  return out;
}

inline std::string print_variables(const Signature& sig, const std::vector<Variable>& vars) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ", ";
    out += print_name(vars[i].name) + ":" + sig.sorts()[vars[i].sort];
  }
  return out;
}

inline std::string print_sentence(const Signature& sig, const Sentence& s) {
  std::string out;
  if (!s.prefix.empty()) out = "forall " + print_variables(sig, s.prefix) + ". ";
  switch (s.shape) {
    case Sentence::Shape::atomic:
      out += print_atom(s.conclusions.at(0));
      break;
    case Sentence::Shape::quasi_algebraic:
      out += print_conjunction(s.premises) + " -> " + print_atom(s.conclusions.at(0));
      break;
    case Sentence::Shape::universal:
      out += print_conjunction(s.premises) + " -> ";
      if (s.conclusions.empty()) {
        out += "false";
      } else {
        for (std::size_t i = 0; i < s.conclusions.size(); ++i) {
          if (i) out += " | ";
          out += print_atom(s.conclusions[i]);
        }
      }
      break;
    case Sentence::Shape::h_universal:
      out += "not " + print_conjunction(s.premises);
      break;
    case Sentence::Shape::coherent:
      out += "exists " + print_variables(sig, s.existentials) + ". " + print_conjunction(s.premises);
      break;
  }
  return out;
}

inline std::string print_signature(const Signature& sig) {
  std::string out;
  for (const auto& s : sig.sorts()) out += "sort " + s + "\n";
  auto sort_list = [&](const std::vector<SortId>& args) {
    std::string r;
    for (SortId a : args) r += " " + sig.sorts()[a];
    return r;
  };
  for (const auto& f : sig.functions())
    out += "fun " + f.name + " :" + sort_list(f.args) + " -> " + sig.sorts()[f.result] + "\n";
  for (const auto& r : sig.relations()) out += "rel " + r.name + " :" + sort_list(r.args) + "\n";
  for (const auto& c : sig.constants()) out += "const " + c.name + " : " + sig.sorts()[c.sort] + "\n";
  return out;
}

}  // namespace quasivar
