#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexer.hpp"
#include "syntax.hpp"

namespace quasivar {

// Grammar: `sort NAME`, `fun NAME : SORT* -> SORT`, `rel NAME : SORT*`, `const NAME : SORT`.
inline Signature parse_signature(std::string_view text) {
  Signature sig;
  for (const auto& [line, content] : logical_lines(text)) {
    TokenStream ts(tokenize(content, line));
    std::string keyword = ts.expect_identifier("declaration keyword");
    auto sort_ref = [&]() {
      const Token& tok = ts.peek();
      std::string name = ts.expect_identifier("sort name");
      auto s = sig.find_sort(name);
      if (!s) throw InputError("unknown sort '" + name + "'", tok.line, tok.column);
      return *s;
    };
    auto declare = [&](auto&& add) {
      const Token& tok = ts.peek();
      try {
        add();
      } catch (const InputError& e) {
        throw InputError(e.what(), tok.line, tok.column);
      }
    };
    if (keyword == "sort") {
      std::string name = ts.expect_identifier("sort name");
      ts.expect_end();
      declare([&] { sig.add_sort(name); });
    } else if (keyword == "fun") {
      Token at = ts.peek();
      std::string name = ts.expect_identifier("function name");
      ts.expect(":");
      std::vector<SortId> args;
      while (ts.peek().kind == Token::Kind::identifier) args.push_back(sort_ref());
      ts.expect("->");
      SortId result = sort_ref();
      ts.expect_end();
      if (sig.has_symbol(name)) throw InputError("duplicate symbol '" + name + "'", at.line, at.column);
      sig.add_function(name, std::move(args), result);
    } else if (keyword == "rel") {
      Token at = ts.peek();
      std::string name = ts.expect_identifier("relation name");
      ts.expect(":");
      std::vector<SortId> args;
      while (ts.peek().kind == Token::Kind::identifier) args.push_back(sort_ref());
      ts.expect_end();
      if (sig.has_symbol(name)) throw InputError("duplicate symbol '" + name + "'", at.line, at.column);
      sig.add_relation(name, std::move(args));
    } else if (keyword == "const") {
      Token at = ts.peek();
      std::string name = ts.expect_identifier("constant name");
      ts.expect(":");
      SortId s = sort_ref();
      ts.expect_end();
      if (sig.has_symbol(name)) throw InputError("duplicate symbol '" + name + "'", at.line, at.column);
      sig.add_constant(name, s);
    } else {
      throw InputError("unknown declaration '" + keyword + "'", line, 1);
    }
  }
  return sig;
}

// Names visible while parsing formulas: parameters (elements of a base
// structure) and free variables, on top of the signature's symbols.
struct NameScope {
  const Signature* signature = nullptr;
  std::map<std::string, std::pair<SortId, int>> parameters;
  std::vector<Variable> variables;

  explicit NameScope(const Signature& sig) : signature(&sig) {}
};

namespace detail {

class FormulaParser {
 public:
  FormulaParser(TokenStream& ts, const NameScope& scope) : ts_(ts), scope_(scope), sig_(*scope.signature) {}

  Sentence sentence() {
    std::vector<Variable> prefix;
    if (ts_.accept_keyword("forall")) {
      prefix = variable_list();
      ts_.expect(".");
    }
    bound_.push_back(prefix);
    Sentence s = matrix(std::move(prefix));
    bound_.pop_back();
    ts_.expect_end();
    return s;
  }

  Atom atom_only() {
    Atom a = atom();
    ts_.expect_end();
    return a;
  }

  std::vector<Atom> conjunction_only() {
    auto c = conjunction();
    ts_.expect_end();
    return c;
  }

  Term term_only() {
    Term t = term();
    ts_.expect_end();
    return t;
  }

  std::vector<Variable> variable_list() {
    std::vector<Variable> vars;
    do {
      const Token& tok = ts_.peek();
      std::string name = ts_.expect_identifier("variable name");
      SortId sort;
      if (ts_.accept(":")) {
        const Token& st = ts_.peek();
        std::string sname = ts_.expect_identifier("sort name");
        auto s = sig_.find_sort(sname);
        if (!s) throw InputError("unknown sort '" + sname + "'", st.line, st.column);
        sort = *s;
      } else if (sig_.sort_count() == 1) {
        sort = 0;
      } else {
        throw InputError("variable '" + name + "' needs an explicit sort", tok.line, tok.column);
      }
      if (sig_.has_symbol(name))
        throw InputError("variable '" + name + "' shadows a symbol", tok.line, tok.column);
      for (const auto& v : vars)
        if (v.name == name) throw InputError("variable '" + name + "' bound twice", tok.line, tok.column);
      vars.push_back({name, sort});
    } while (ts_.accept(","));
    return vars;
  }

 private:
  Sentence matrix(std::vector<Variable> prefix) {
    if (ts_.accept_keyword("not")) return Sentence::h_universal(std::move(prefix), conjunction());
    if (ts_.accept_keyword("exists")) {
      auto ex = variable_list();
      ts_.expect(".");
      bound_.push_back(ex);
      auto body = conjunction();
      bound_.pop_back();
      return Sentence::coherent(std::move(prefix), std::move(ex), std::move(body));
    }
    const Token start = ts_.peek();
    bool bare_true = start.kind == Token::Kind::identifier && start.text == "true";
    auto conj = conjunction();
    if (ts_.accept("->")) {
      if (ts_.accept_keyword("false")) return Sentence::universal(std::move(prefix), std::move(conj), {});
      std::vector<Atom> disj{atom()};
      bool is_disjunction = false;
      while (ts_.accept("|")) {
        disj.push_back(atom());
        is_disjunction = true;
      }
      if (!is_disjunction) return Sentence::quasi_algebraic(std::move(prefix), std::move(conj), std::move(disj[0]));
      return Sentence::universal(std::move(prefix), std::move(conj), std::move(disj));
    }
    if (conj.size() != 1 || bare_true)
      throw InputError("a conjunction must be followed by '->'", start.line, start.column);
    return Sentence::atomic(std::move(prefix), std::move(conj[0]));
  }

  std::vector<Atom> conjunction() {
    if (ts_.accept_keyword("true")) return {};
    std::vector<Atom> atoms{atom()};
    while (ts_.accept("&")) atoms.push_back(atom());
    return atoms;
  }

  Atom atom() {
    const Token& tok = ts_.peek();
    if (tok.kind == Token::Kind::identifier) {
      if (auto r = sig_.find_relation(tok.text)) {
        Token at = ts_.next();
        std::vector<Term> args;
        ts_.expect("(");
        if (!ts_.accept(")")) {
          do args.push_back(term());
          while (ts_.accept(","));
          ts_.expect(")");
        }
        try {
          return Atom::apply(sig_, *r, std::move(args));
        } catch (const InputError& e) {
          throw InputError(e.what(), at.line, at.column);
        }
      }
    }
    Token at = ts_.peek();
    Term lhs = term();
    ts_.expect("=");
    Term rhs = term();
    if (lhs.sort != rhs.sort) throw InputError("equation between terms of different sorts", at.line, at.column);
    return Atom::equality(std::move(lhs), std::move(rhs));
  }

  Term term() {
    Token tok = ts_.peek();
    std::string name = ts_.expect_identifier("term");
    if (ts_.accept("(")) {
      auto f = sig_.find_function(name);
      if (!f) throw InputError("unknown function '" + name + "'", tok.line, tok.column);
      std::vector<Term> args;
      if (!ts_.accept(")")) {
        do args.push_back(term());
        while (ts_.accept(","));
        ts_.expect(")");
      }
      try {
        return Term::apply(sig_, *f, std::move(args));
      } catch (const InputError& e) {
        throw InputError(e.what(), tok.line, tok.column);
      }
    }
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
      for (const auto& v : *it)
        if (v.name == name) return Term::variable(v);
    for (const auto& v : scope_.variables)
      if (v.name == name) return Term::variable(v);
    if (auto c = sig_.find_constant(name)) return Term::constant(sig_, *c);
    if (auto p = scope_.parameters.find(name); p != scope_.parameters.end())
      return Term::parameter(name, p->second.first, p->second.second);
    if (sig_.find_function(name)) throw InputError("function '" + name + "' used without arguments", tok.line, tok.column);
    throw InputError("unknown name '" + name + "'", tok.line, tok.column);
  }

  TokenStream& ts_;
  const NameScope& scope_;
  const Signature& sig_;
  std::vector<std::vector<Variable>> bound_;
};

}  // namespace detail

inline Sentence parse_sentence(std::string_view text, const NameScope& scope, int line = 1) {
  TokenStream ts(tokenize(text, line));
  return detail::FormulaParser(ts, scope).sentence();
}

inline Sentence parse_sentence(std::string_view text, const Signature& sig) {
  return parse_sentence(text, NameScope(sig));
}

inline Atom parse_atom(std::string_view text, const NameScope& scope, int line = 1) {
  TokenStream ts(tokenize(text, line));
  return detail::FormulaParser(ts, scope).atom_only();
}

inline std::vector<Atom> parse_conjunction(std::string_view text, const NameScope& scope, int line = 1) {
  TokenStream ts(tokenize(text, line));
  return detail::FormulaParser(ts, scope).conjunction_only();
}

inline Term parse_term(std::string_view text, const NameScope& scope, int line = 1) {
  TokenStream ts(tokenize(text, line));
  return detail::FormulaParser(ts, scope).term_only();
}

// `x:s, y:s` (sorts optional in one-sorted signatures).
inline std::vector<Variable> parse_variables(std::string_view text, const Signature& sig, int line = 1) {
  TokenStream ts(tokenize(text, line));
  NameScope scope(sig);
  auto vars = detail::FormulaParser(ts, scope).variable_list();
  ts.expect_end();
  return vars;
}

// Theory body: one sentence per line. An optional `theory NAME` header line
// names it; the signature is supplied by the caller.
inline Theory parse_theory(std::string_view text, std::shared_ptr<const Signature> sig) {
  Theory th;
  th.signature = sig;
  NameScope scope(*sig);
  for (const auto& [line, content] : logical_lines(text)) {
    auto over = content.rfind("theory", 0) == 0 ? content.find(" over ") : std::string::npos;
    TokenStream ts(tokenize(content.substr(0, over), line));
    if (ts.peek().text == "theory" && ts.peek(1).kind == Token::Kind::identifier && ts.peek(2).kind == Token::Kind::end) {
      th.name = ts.peek(1).text;
      continue;
    }
    Sentence s = parse_sentence(content, scope, line);
    classify_sentence(s);
    th.sentences.push_back(std::move(s));
  }
  return th;
}

}  // namespace quasivar
