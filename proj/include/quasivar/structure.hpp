#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexer.hpp"
#include "parse.hpp"
#include "syntax.hpp"
#include "tuples.hpp"

namespace quasivar {

// A finite L-structure: per-sort carriers, total function tables, relation
// tables and constant assignments. Elements are indices into their carrier.
class FinStructure {
 public:
  FinStructure() = default;

  FinStructure(std::shared_ptr<const Signature> sig, std::string name,
               std::vector<std::vector<std::string>> carriers)
      : sig_(std::move(sig)), name_(std::move(name)), carriers_(std::move(carriers)) {
    if (static_cast<int>(carriers_.size()) != sig_->sort_count())
      throw InputError("structure '" + name_ + "' must list one carrier per sort");
    for (const auto& f : sig_->functions()) {
      functions_.emplace_back(table_size(f.args), -1);
    }
    for (const auto& r : sig_->relations()) relations_.emplace_back(table_size(r.args), 0);
    constants_.assign(sig_->constants().size(), -1);
    index_names();
  }

  const Signature& signature() const { return *sig_; }
  const std::shared_ptr<const Signature>& signature_ptr() const { return sig_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  int size(SortId s) const { return static_cast<int>(carriers_[s].size()); }
  int total_size() const {
    int n = 0;
    for (const auto& c : carriers_) n += static_cast<int>(c.size());
    return n;
  }
  std::vector<int> sizes() const {
    std::vector<int> out;
    for (const auto& c : carriers_) out.push_back(static_cast<int>(c.size()));
    return out;
  }
  const std::vector<std::string>& carrier(SortId s) const { return carriers_[s]; }
  const std::string& element_name(SortId s, int e) const { return carriers_[s][e]; }

  std::optional<int> find_element(SortId s, const std::string& name) const {
    auto it = names_[s].find(name);
    if (it == names_[s].end()) return std::nullopt;
    return it->second;
  }

  std::vector<int> arg_sizes(const std::vector<SortId>& args) const {
    std::vector<int> out;
    for (SortId s : args) out.push_back(size(s));
    return out;
  }

  std::size_t tuple_index(const std::vector<SortId>& args, std::span<const int> tuple) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < args.size(); ++i) idx = idx * static_cast<std::size_t>(size(args[i])) + tuple[i];
    return idx;
  }

  int apply(int f, std::span<const int> args) const {
    return functions_[f][tuple_index(sig_->functions()[f].args, args)];
  }
  bool holds(int r, std::span<const int> args) const {
    return relations_[r][tuple_index(sig_->relations()[r].args, args)] != 0;
  }
  int constant(int c) const { return constants_[c]; }

  void set_function(int f, std::span<const int> args, int value) {
    functions_[f][tuple_index(sig_->functions()[f].args, args)] = value;
  }
  void set_relation(int r, std::span<const int> args, bool value) {
    relations_[r][tuple_index(sig_->relations()[r].args, args)] = value ? 1 : 0;
  }
  void set_constant(int c, int value) { constants_[c] = value; }

  const std::vector<int>& function_table(int f) const { return functions_[f]; }
  const std::vector<char>& relation_table(int r) const { return relations_[r]; }

  // Throws unless every table is total and closed in the carriers.
  void validate() const {
    const auto& sig = *sig_;
    for (std::size_t f = 0; f < functions_.size(); ++f) {
      SortId res = sig.functions()[f].result;
      for (int v : functions_[f])
        if (v < 0 || v >= size(res))
          throw InputError("structure '" + name_ + "': function '" + sig.functions()[f].name + "' is not total");
    }
    for (std::size_t c = 0; c < constants_.size(); ++c) {
      SortId s = sig.constants()[c].sort;
      if (constants_[c] < 0 || constants_[c] >= size(s))
        throw InputError("structure '" + name_ + "': constant '" + sig.constants()[c].name + "' is unassigned");
    }
  }

  bool operator==(const FinStructure& o) const {
    return *sig_ == *o.sig_ && carriers_ == o.carriers_ && functions_ == o.functions_ &&
           relations_ == o.relations_ && constants_ == o.constants_;
  }

 private:
  std::size_t table_size(const std::vector<SortId>& args) const {
    std::size_t n = 1;
    for (SortId s : args) n *= carriers_[s].size();
    return n;
  }

  void index_names() {
    names_.assign(carriers_.size(), {});
    for (std::size_t s = 0; s < carriers_.size(); ++s)
      for (std::size_t e = 0; e < carriers_[s].size(); ++e)
        if (!names_[s].emplace(carriers_[s][e], static_cast<int>(e)).second)
          throw InputError("structure '" + name_ + "': duplicate element '" + carriers_[s][e] + "'");
  }

  std::shared_ptr<const Signature> sig_;
  std::string name_;
  std::vector<std::vector<std::string>> carriers_;
  std::vector<std::map<std::string, int>> names_;
  std::vector<std::vector<int>> functions_;
  std::vector<std::vector<char>> relations_;
  std::vector<int> constants_;
};

// The one-point structure 𝟏: one element per sort, every relation full.
inline FinStructure trivial_structure(std::shared_ptr<const Signature> sig, std::string name = "1") {
  std::vector<std::vector<std::string>> carriers(sig->sort_count(), std::vector<std::string>{"*"});
  FinStructure one(sig, std::move(name), std::move(carriers));
  std::vector<int> zeros(16, 0);
  for (std::size_t f = 0; f < sig->functions().size(); ++f)
    one.set_function(static_cast<int>(f), std::span<const int>(zeros.data(), sig->functions()[f].args.size()), 0);
  for (std::size_t r = 0; r < sig->relations().size(); ++r)
    one.set_relation(static_cast<int>(r), std::span<const int>(zeros.data(), sig->relations()[r].args.size()), true);
  for (std::size_t c = 0; c < sig->constants().size(); ++c) one.set_constant(static_cast<int>(c), 0);
  return one;
}

// Every sort has exactly one element and every relation is full.
inline bool is_trivial(const FinStructure& a) {
  for (int s = 0; s < a.signature().sort_count(); ++s)
    if (a.size(s) != 1) return false;
  for (std::size_t r = 0; r < a.signature().relations().size(); ++r)
    for (char v : a.relation_table(static_cast<int>(r)))
      if (!v) return false;
  return true;
}

// Parameter names of A for formula parsing (the L(A) convention).
inline std::map<std::string, std::pair<SortId, int>> parameter_names(const FinStructure& a) {
  std::map<std::string, std::pair<SortId, int>> out;
  const auto& sig = a.signature();
  for (int s = 0; s < sig.sort_count(); ++s)
    for (int e = 0; e < a.size(s); ++e) {
      const auto& n = a.element_name(s, e);
      if (sig.has_symbol(n))
        throw InputError("element name '" + n + "' collides with a symbol of the signature");
      if (!out.emplace(n, std::make_pair(s, e)).second)
        throw InputError("element name '" + n + "' is used in two sorts");
    }
  return out;
}

inline NameScope scope_of(const FinStructure& a, std::vector<Variable> variables = {}) {
  NameScope scope(a.signature());
  scope.parameters = parameter_names(a);
  scope.variables = std::move(variables);
  return scope;
}

// ---------------------------------------------------------------------------
// Structure files

inline std::string print_structure(const FinStructure& a, const std::string& signature_path) {
  const auto& sig = a.signature();
  std::string out = "structure " + print_name(a.name()) + " over " + signature_path + "\n";
  for (int s = 0; s < sig.sort_count(); ++s) {
    out += "sort " + sig.sorts()[s] + " = {";
    for (int e = 0; e < a.size(s); ++e) out += (e ? ", " : "") + print_name(a.element_name(s, e));
    out += "}\n";
  }
  auto tuple_text = [&](const std::vector<SortId>& sorts, const std::vector<int>& t) {
    std::string r = "(";
    for (std::size_t i = 0; i < t.size(); ++i) r += (i ? "," : "") + print_name(a.element_name(sorts[i], t[i]));
    return r + ")";
  };
  for (std::size_t f = 0; f < sig.functions().size(); ++f) {
    const auto& fs = sig.functions()[f];
    out += "fun " + fs.name + " = {";
    bool first = true;
    for (TupleCounter tc(a.arg_sizes(fs.args)); !tc.done(); tc.next()) {
      out += (first ? "" : ", ") + tuple_text(fs.args, tc.digits()) + "->" +
             print_name(a.element_name(fs.result, a.apply(static_cast<int>(f), tc.digits())));
      first = false;
    }
    out += "}\n";
  }
  for (std::size_t r = 0; r < sig.relations().size(); ++r) {
    const auto& rs = sig.relations()[r];
    out += "rel " + rs.name + " = {";
    bool first = true;
    for (TupleCounter tc(a.arg_sizes(rs.args)); !tc.done(); tc.next()) {
      if (!a.holds(static_cast<int>(r), tc.digits())) continue;
      out += (first ? "" : ", ") + tuple_text(rs.args, tc.digits());
      first = false;
    }
    out += "}\n";
  }
  for (std::size_t c = 0; c < sig.constants().size(); ++c) {
    const auto& cs = sig.constants()[c];
    out += "const " + cs.name + " = " + print_name(a.element_name(cs.sort, a.constant(static_cast<int>(c)))) + "\n";
  }
  return out;
}

// Header line of a structure file: `structure NAME over SIGFILE`.
struct StructureHeader {
  std::string name;
  std::string signature_path;
};

inline std::optional<StructureHeader> read_structure_header(std::string_view text) {
  for (const auto& [line, content] : logical_lines(text)) {
    auto toks = tokenize(content.substr(0, content.find(" over ")), line);
    if (toks.size() < 2 || toks[0].text != "structure") return std::nullopt;
    StructureHeader h;
    h.name = toks[1].text;
    auto over = content.find(" over ");
    if (over != std::string::npos) {
      std::string path = content.substr(over + 6);
      auto b = path.find_first_not_of(" \t");
      auto e = path.find_last_not_of(" \t");
      if (b != std::string::npos) h.signature_path = path.substr(b, e - b + 1);
    }
    return h;
  }
  return std::nullopt;
}

// Body of a structure file. Declarations may span lines; the header line is skipped.
inline FinStructure parse_structure(std::string_view text, std::shared_ptr<const Signature> sig) {
  const auto& L = *sig;
  std::string name = "A";
  std::vector<Token> tokens;
  for (const auto& [line, content] : logical_lines(text)) {
    auto toks = tokenize(content.substr(0, content.find(" over ")), line);
    if (!toks.empty() && toks[0].kind == Token::Kind::identifier && toks[0].text == "structure") {
      if (toks.size() > 1 && toks[1].kind == Token::Kind::identifier) name = toks[1].text;
      continue;
    }
    toks = tokenize(content, line);
    toks.pop_back();
    tokens.insert(tokens.end(), toks.begin(), toks.end());
  }
  int last_line = tokens.empty() ? 1 : tokens.back().line;
  tokens.push_back({Token::Kind::end, "", last_line, 1});
  TokenStream ts(std::move(tokens));

  std::vector<std::optional<std::vector<std::string>>> carriers(L.sort_count());
  struct Pending {
    std::string keyword, symbol;
    std::vector<Token> body;
    int line, column;
  };
  std::vector<Pending> tables;

  while (!ts.at_end()) {
    Token kw = ts.peek();
    std::string keyword = ts.expect_identifier("declaration keyword");
    if (keyword == "sort") {
      Token at = ts.peek();
      std::string sname = ts.expect_identifier("sort name");
      auto s = L.find_sort(sname);
      if (!s) throw InputError("unknown sort '" + sname + "'", at.line, at.column);
      if (carriers[*s]) throw InputError("carrier of '" + sname + "' given twice", at.line, at.column);
      ts.expect("=");
      ts.expect("{");
      std::vector<std::string> elems;
      if (!ts.accept("}")) {
        do elems.push_back(ts.expect_identifier("element name"));
        while (ts.accept(","));
        ts.expect("}");
      }
      carriers[*s] = std::move(elems);
    } else if (keyword == "fun" || keyword == "rel" || keyword == "const") {
      Token at = ts.peek();
      std::string symbol = ts.expect_identifier("symbol name");
      ts.expect("=");
      Pending p{keyword, symbol, {}, at.line, at.column};
      if (keyword == "const") {
        p.body.push_back(ts.next());
        if (p.body.back().kind != Token::Kind::identifier)
          throw InputError("expected element name", p.body.back().line, p.body.back().column);
      } else {
        if (ts.peek().text != "{") ts.fail("expected '{'");
        int depth = 0;
        do {
          Token t = ts.next();
          if (t.kind == Token::Kind::end) throw InputError("unterminated table", at.line, at.column);
          if (t.kind == Token::Kind::punct && t.text == "{") ++depth;
          if (t.kind == Token::Kind::punct && t.text == "}") --depth;
          p.body.push_back(t);
        } while (depth > 0);
      }
      tables.push_back(std::move(p));
    } else {
      throw InputError("unknown declaration '" + keyword + "'", kw.line, kw.column);
    }
  }
  std::vector<std::vector<std::string>> cs;
  for (int s = 0; s < L.sort_count(); ++s) {
    if (!carriers[s]) throw InputError("structure '" + name + "' lacks a carrier for sort '" + L.sorts()[s] + "'");
    cs.push_back(*carriers[s]);
  }
  FinStructure a(sig, name, std::move(cs));

  for (auto& p : tables) {
    p.body.push_back({Token::Kind::end, "", p.line, p.column});
    TokenStream body(p.body);
    auto element = [&](SortId s) {
      Token t = body.peek();
      std::string en = body.expect_identifier("element name");
      auto e = a.find_element(s, en);
      if (!e) throw InputError("'" + en + "' is not an element of sort '" + L.sorts()[s] + "'", t.line, t.column);
      return *e;
    };
    auto tuple = [&](const std::vector<SortId>& sorts) {
      std::vector<int> t;
      if (sorts.size() == 1 && body.peek().kind == Token::Kind::identifier) return std::vector<int>{element(sorts[0])};
      body.expect("(");
      for (std::size_t i = 0; i < sorts.size(); ++i) {
        if (i) body.expect(",");
        t.push_back(element(sorts[i]));
      }
      body.expect(")");
      return t;
    };
    if (p.keyword == "const") {
      auto c = L.find_constant(p.symbol);
      if (!c) throw InputError("unknown constant '" + p.symbol + "'", p.line, p.column);
      a.set_constant(*c, element(L.constants()[*c].sort));
    } else if (p.keyword == "fun") {
      auto f = L.find_function(p.symbol);
      if (!f) throw InputError("unknown function '" + p.symbol + "'", p.line, p.column);
      const auto& fs = L.functions()[*f];
      std::vector<char> seen(a.function_table(*f).size(), 0);
      body.expect("{");
      if (!body.accept("}")) {
        do {
          Token t = body.peek();
          auto args = tuple(fs.args);
          body.expect("->");
          int v = element(fs.result);
          auto idx = a.tuple_index(fs.args, args);
          if (seen[idx]) throw InputError("tuple listed twice in '" + p.symbol + "'", t.line, t.column);
          seen[idx] = 1;
          a.set_function(*f, args, v);
        } while (body.accept(","));
        body.expect("}");
      }
      for (char s : seen)
        if (!s) throw InputError("function '" + p.symbol + "' is not total", p.line, p.column);
    } else {
      auto r = L.find_relation(p.symbol);
      if (!r) throw InputError("unknown relation '" + p.symbol + "'", p.line, p.column);
      const auto& rs = L.relations()[*r];
      body.expect("{");
      if (!body.accept("}")) {
        do a.set_relation(*r, tuple(rs.args), true);
        while (body.accept(","));
        body.expect("}");
      }
    }
    body.expect_end();
  }
  a.validate();
  return a;
}

}  // namespace quasivar
