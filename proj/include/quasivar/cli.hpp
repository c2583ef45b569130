#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quasivar/quasivar.hpp"

namespace quasivar::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

inline std::string digest(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Options {
  std::string sig, theory, structure, atype, from, to, hom, mode = "hom", morphism;
  std::vector<std::string> klass, structures, sentences;
  std::string vars, xs, ys, phi, theta, relations, gens, ideal, out_dir = ".", premise_bound;
  std::optional<int> depth, size_bound, max_vars, samples, limit;
  int jobs = 0;
  bool timing = false;
};

// Structure file named in an a-type header, resolved against the a-type's directory.
inline std::string atype_structure_path(const std::string& atype_path) {
  for (const auto& [line, content] : logical_lines(read_file(atype_path))) {
    auto over = content.find(" over ");
    if (over == std::string::npos) break;
    std::string rest = content.substr(over + 6);
    if (auto v = rest.find(" vars "); v != std::string::npos) rest = rest.substr(0, v);
    rest.erase(0, rest.find_first_not_of(" \t"));
    rest.erase(rest.find_last_not_of(" \t") + 1);
    return (fs::path(atype_path).parent_path() / rest).string();
  }
  throw InputError(atype_path + ": expected 'atype over STRUCTFILE'");
}

inline std::string theory_signature_path(const std::string& path) {
  for (const auto& [line, content] : logical_lines(read_file(path))) {
    auto over = content.find(" over ");
    if (over == std::string::npos) break;
    std::string rest = content.substr(over + 6);
    rest.erase(0, rest.find_first_not_of(" \t"));
    rest.erase(rest.find_last_not_of(" \t") + 1);
    return rest;
  }
  throw InputError(path + ": expected 'theory NAME over SIGFILE'");
}

// Files read on behalf of the command, with digests, plus the loaders.
class Session {
 public:
  explicit Session(const Options& o) : opt(o) {}

  const Options& opt;
  Loader loader;
  json inputs = json::array();

  void record(const std::string& path) {
    for (const auto& in : inputs)
      if (in["path"] == path) return;
    inputs.push_back({{"path", path}, {"digest", digest(read_file(path))}});
  }

  std::shared_ptr<const FinStructure> structure(const std::string& path) {
    if (path.empty()) throw InputError("--structure is required");
    record(path);
    return loader.structure(path);
  }
  std::shared_ptr<const Signature> signature(const std::string& path) {
    if (path.empty()) throw InputError("--sig is required");
    record(path);
    return loader.signature(path);
  }
  Theory theory(const std::string& path) {
    record(path);
    return loader.theory(path, opt.sig.empty() ? nullptr : signature(opt.sig));
  }
  ATypeFile atype(const std::string& path) {
    if (path.empty()) throw InputError("--atype is required");
    record(path);
    ATypeFile f = parse_atype_file(path, loader);
    record(atype_structure_path(path));
    if (!opt.structure.empty()) {
      auto base = structure(opt.structure);
      if (!(base->signature() == f.base->signature())) throw InputError("--structure does not match the a-type's signature");
      NameScope scope = scope_of(*base, f.variables);
      std::vector<Atom> atoms;
      for (const auto& a : f.atoms) atoms.push_back(parse_atom(print_atom(a), scope));
      f.base = base;
      f.atoms = std::move(atoms);
    }
    return f;
  }
  std::vector<FinStructure> klass(const FinStructure* like = nullptr) {
    std::vector<FinStructure> k;
    for (const auto& p : opt.klass) k.push_back(*structure(p));
    for (const auto& m : k)
      if (like && !(m.signature() == like->signature()))
        throw InputError("class member '" + m.name() + "' has a different signature from '" + like->name() + "'");
    return k;
  }
  Context context(const FinStructure* like, bool need_depth) {
    if (opt.klass.empty()) throw InputError("--class is required");
    if (need_depth && !opt.depth) throw InputError("--depth is required for this input");
    Context ctx{klass(like), opt.size_bound.value_or(0), opt.depth.value_or(0)};
    return ctx;
  }
  int depth() const {
    if (!opt.depth) throw InputError("--depth is required");
    return *opt.depth;
  }
};

// ---------------------------------------------------------------------------
// Report fragments

inline json names_of(const std::vector<Atom>& atoms) {
  json out = json::array();
  for (const auto& a : atoms) out.push_back(print_atom(a));
  return out;
}

inline json terms_json(const std::vector<Term>& ts) {
  json out = json::array();
  for (const auto& t : ts) out.push_back(print_term(t));
  return out;
}

inline json hom_json(const FinStructure& a, const FinStructure& b, const Hom& f) {
  json out = json::object();
  const auto& L = a.signature();
  for (int s = 0; s < L.sort_count(); ++s) {
    json m = json::object();
    for (int e = 0; e < a.size(s); ++e) m[a.element_name(s, e)] = b.element_name(s, f.map[s][e]);
    out[L.sorts()[s]] = std::move(m);
  }
  return out;
}

inline json point_json(const FinStructure& m, const std::vector<Variable>& vars, const std::vector<int>& point) {
  json out = json::object();
  for (std::size_t i = 0; i < vars.size(); ++i) out[vars[i].name] = m.element_name(vars[i].sort, point[i]);
  return out;
}

inline json class_names(const std::vector<FinStructure>& k) {
  json out = json::array();
  for (const auto& m : k) out.push_back(m.name());
  return out;
}

inline json evaluation_json(const Evaluation& ev, const TermUniverse& u, const std::vector<FinStructure>& k) {
  json out = {{"member", k[ev.member].name()}};
  if (u.base()) out["hom"] = hom_json(*u.base(), k[ev.member], ev.hom);
  out["point"] = point_json(k[ev.member], u.variables(), ev.point);
  return out;
}

inline json primes_json(const std::vector<Prime>& primes, const std::vector<FinStructure>& k) {
  json out = json::array();
  for (const auto& p : primes) {
    json j = evaluation_json(p.witness, p.type.universe(), k);
    j["classes"] = p.type.class_count();
    out.push_back(std::move(j));
  }
  return out;
}

inline json scope_json(const Options& o, bool relative) {
  json s = json::object();
  s["size_bound"] = o.size_bound ? json(*o.size_bound) : json(nullptr);
  s["depth"] = o.depth ? json(*o.depth) : json(nullptr);
  if (o.premise_bound.empty()) {
    s["premise_bound"] = nullptr;
  } else {
    s["premise_bound"] = o.premise_bound == "none" ? json("none") : json(std::atoi(o.premise_bound.c_str()));
  }
  s["max_vars"] = o.max_vars ? json(*o.max_vars) : json(nullptr);
  if (relative) s["relative_to"] = o.klass;
  return s;
}

inline std::string structure_signature_path(const std::string& path) {
  auto h = read_structure_header(read_file(path));
  if (!h || h->signature_path.empty()) throw InputError(path + ": missing signature in header");
  return h->signature_path;
}

inline Hom parse_hom(const FinStructure& a, const FinStructure& b, const std::string& text) {
  Hom f;
  const auto& L = a.signature();
  for (int s = 0; s < L.sort_count(); ++s) f.map.emplace_back(a.size(s), -1);
  std::stringstream ss(text);
  std::string item;
  auto trim = [](std::string x) {
    x.erase(0, x.find_first_not_of(" \t"));
    x.erase(x.find_last_not_of(" \t") + 1);
    if (x.size() >= 2 && x.front() == '"' && x.back() == '"') x = x.substr(1, x.size() - 2);
    return x;
  };
  while (std::getline(ss, item, ',')) {
    auto arrow = item.find("->");
    if (arrow == std::string::npos) throw InputError("hom entries look like 'a->b'");
    std::string x = trim(item.substr(0, arrow)), y = trim(item.substr(arrow + 2));
    bool placed = false;
    for (int s = 0; s < L.sort_count(); ++s) {
      auto ex = a.find_element(s, x);
      auto ey = b.find_element(s, y);
      if (ex && ey) {
        f.map[s][*ex] = *ey;
        placed = true;
      }
    }
    if (!placed) throw InputError("cannot map '" + x + "' to '" + y + "'");
  }
  for (int s = 0; s < L.sort_count(); ++s)
    for (int e = 0; e < a.size(s); ++e)
      if (f.map[s][e] < 0) throw InputError("hom leaves '" + a.element_name(s, e) + "' unmapped");
  if (!is_hom(a, b, f)) throw InputError("the given map is not a homomorphism");
  return f;
}

inline Scope parse_scope(const Options& o) {
  if (o.premise_bound.empty()) throw InputError("--premise-bound is required (a number or 'none')");
  if (!o.depth) throw InputError("--depth is required");
  if (!o.max_vars) throw InputError("--max-vars is required");
  Scope s;
  if (o.premise_bound != "none") {
    try {
      s.premise_bound = std::stoi(o.premise_bound);
    } catch (const std::exception&) {
      throw InputError("--premise-bound must be a number or 'none'");
    }
    if (*s.premise_bound < 0) throw InputError("--premise-bound must be non-negative");
  }
  s.depth = *o.depth;
  s.max_vars = *o.max_vars;
  return s;
}

// ---------------------------------------------------------------------------
// Commands. Each fills `r` and returns a one-line summary.

using Command = std::function<std::string(Session&, json&)>;

inline std::string cmd_parse(Session& s, json& r) {
  const auto& o = s.opt;
  if (!o.atype.empty()) {
    auto f = s.atype(o.atype);
    r["kind"] = "atype";
    std::string base = o.structure.empty() ? atype_structure_path(o.atype) : o.structure;
    r["canonical"] = print_atype_file(fs::path(base).lexically_relative(fs::path(o.atype).parent_path()).string(), f.base->signature(), f.variables, f.atoms);
  } else if (!o.structure.empty()) {
    auto a = s.structure(o.structure);
    r["kind"] = "structure";
    r["canonical"] = print_structure(*a, structure_signature_path(o.structure));
  } else if (!o.theory.empty()) {
    auto t = s.theory(o.theory);
    r["kind"] = "theory";
    r["canonical"] = print_theory(t, o.sig.empty() ? theory_signature_path(o.theory) : o.sig);
  } else if (!o.sig.empty()) {
    r["kind"] = "signature";
    r["canonical"] = print_signature(*s.signature(o.sig));
  } else {
    throw InputError("parse needs one of --sig, --theory, --structure, --atype");
  }
  r["verdict"] = "well-formed";
  return "well-formed " + r["kind"].get<std::string>();
}

inline std::vector<Sentence> sentences_from(Session& s, const NameScope* scope) {
  const auto& o = s.opt;
  std::vector<Sentence> out;
  if (!o.theory.empty())
    for (auto& st : s.theory(o.theory).sentences) out.push_back(std::move(st));
  for (const auto& text : o.sentences) {
    if (!scope) throw InputError("--sentence needs --sig or --structure");
    out.push_back(parse_sentence(text, *scope));
  }
  if (out.empty()) throw InputError("no sentences given (--theory or --sentence)");
  return out;
}

inline std::string cmd_classify(Session& s, json& r) {
  std::optional<NameScope> scope;
  std::shared_ptr<const Signature> sig;
  if (!s.opt.sig.empty()) {
    sig = s.signature(s.opt.sig);
    scope.emplace(*sig);
  }
  auto sentences = sentences_from(s, scope ? &*scope : nullptr);
  if (!sig) sig = s.theory(s.opt.theory).signature;
  json list = json::array();
  for (const auto& st : sentences) {
    Fragment f = classify_sentence(st);
    list.push_back({{"sentence", print_sentence(*sig, st)},
                    {"fragment", fragment_name(f)},
                    {"universal_compatible", has_universal_shape(st)},
                    {"quasi_algebraic_compatible", is_quasi_algebraic_compatible(st)}});
  }
  r["verdict"] = list;
  return std::to_string(list.size()) + " sentence(s) classified";
}

inline std::string cmd_eval(Session& s, json& r) {
  auto a = s.structure(s.opt.structure);
  NameScope scope = scope_of(*a);
  auto sentences = sentences_from(s, &scope);
  json list = json::array();
  bool all = true;
  for (const auto& st : sentences) {
    auto ce = find_counterexample(st, *a);
    json j = {{"sentence", print_sentence(a->signature(), st)}, {"holds", !ce}};
    if (ce) j["counterexample"] = point_json(*a, st.prefix, *ce);
    all = all && !ce;
    list.push_back(std::move(j));
  }
  r["results"] = list;
  r["verdict"] = all;
  return all ? "all sentences hold" : "some sentence fails";
}

inline HomMode parse_mode(const std::string& m) {
  if (m == "hom") return HomMode::hom;
  if (m == "embedding") return HomMode::embedding;
  throw InputError("--mode must be 'hom' or 'embedding'");
}

inline std::string cmd_homs(Session& s, json& r) {
  auto a = s.structure(s.opt.from);
  auto b = s.structure(s.opt.to);
  require_same_signature(*a, *b);
  auto homs = enumerate_homs(*a, *b, parse_mode(s.opt.mode));
  json list = json::array();
  for (std::size_t i = 0; i < homs.size(); ++i) {
    if (s.opt.limit && static_cast<int>(i) >= *s.opt.limit) break;
    list.push_back(hom_json(*a, *b, homs[i]));
  }
  r["mode"] = s.opt.mode;
  r["verdict"] = homs.size();
  r["homs"] = list;
  return std::to_string(homs.size()) + " " + s.opt.mode + "(s)";
}

inline std::string cmd_product(Session& s, json& r) {
  if (s.opt.structures.empty()) throw InputError("--structures is required");
  std::vector<FinStructure> factors;
  for (const auto& p : s.opt.structures) factors.push_back(*s.structure(p));
  for (const auto& f : factors) require_same_signature(factors[0], f);
  FinStructure p = product(factors);
  r["verdict"] = p.total_size();
  r["structure"] = print_structure(p, structure_signature_path(s.opt.structures[0]));
  return "product with " + std::to_string(p.total_size()) + " elements";
}

inline std::shared_ptr<const TermUniverse> universe_of(Session& s, const ATypeFile& f) {
  if (!f.variables.empty() && !s.opt.depth) throw InputError("--depth is required for a-types with variables");
  return universe_for(f.base, f.variables, s.opt.depth.value_or(0), f.atoms);
}

inline std::string cmd_close(Session& s, json& r) {
  auto f = s.atype(s.opt.atype);
  AType p = close(universe_of(s, f), f.atoms);
  r["classes"] = p.class_count();
  r["verdict"] = names_of(p.basis());
  return "closure has " + std::to_string(p.basis().size()) + " basis atoms";
}

inline std::string cmd_quotient(Session& s, json& r) {
  auto f = s.atype(s.opt.atype);
  if (!f.variables.empty()) throw InputError("quotient needs a variable-free a-type");
  AType p = close(universe_of(s, f), f.atoms);
  auto q = quotient(p);
  r["verdict"] = q.quotient.total_size();
  r["structure"] = print_structure(q.quotient, structure_signature_path(s.opt.structure.empty() ? atype_structure_path(s.opt.atype) : s.opt.structure));
  r["projection"] = hom_json(*f.base, q.quotient, q.projection);
  return "quotient with " + std::to_string(q.quotient.total_size()) + " elements";
}

inline std::string cmd_radical(Session& s, json& r) {
  auto f = s.atype(s.opt.atype);
  auto u = universe_of(s, f);
  Context ctx = s.context(f.base.get(), !f.variables.empty());
  auto res = radical(u, f.atoms, ctx);
  r["verdict"] = names_of(res.radical.basis());
  r["primes"] = primes_json(res.primes, ctx.k);
  r["degenerate"] = res.degenerate;
  r["exact"] = res.exact;
  return std::to_string(res.primes.size()) + " prime(s) above the input";
}

inline std::string cmd_is_prime(Session& s, json& r) {
  auto f = s.atype(s.opt.atype);
  Context ctx = s.context(f.base.get(), !f.variables.empty());
  AType p = close(universe_of(s, f), f.atoms);
  auto v = is_prime(p, ctx);
  r["verdict"] = v.prime;
  r["exact"] = v.exact;
  if (v.embedding) r["embedding"] = {{"member", ctx.k[v.embedding->member].name()}};
  if (v.evaluation) r["evaluation"] = evaluation_json(*v.evaluation, p.universe(), ctx.k);
  return v.prime ? "prime" : "not prime";
}

inline std::string cmd_is_radical(Session& s, json& r) {
  auto f = s.atype(s.opt.atype);
  Context ctx = s.context(f.base.get(), !f.variables.empty());
  AType p = close(universe_of(s, f), f.atoms);
  auto v = is_radical(p, ctx);
  r["verdict"] = v.radical;
  r["exact"] = v.exact;
  r["primes"] = primes_json(v.result.primes, ctx.k);
  r["missing_from_input"] = names_of(atoms_missing(v.result.radical, p));
  if (v.quotient_route) r["quotient_in_quasivariety"] = v.quotient_route->member;
  return v.radical ? "radical" : "not radical";
}

inline std::string cmd_represent(Session& s, json& r) {
  auto a = s.structure(s.opt.structure);
  Context ctx = s.context(a.get(), false);
  auto rep = represent(a, ctx);
  json factors = json::array();
  for (const auto& f : rep.factors) factors.push_back({{"name", f.name()}, {"size", f.total_size()}});
  r["verdict"] = rep.embedding;
  r["subdirect"] = rep.subdirect;
  r["factors"] = factors;
  json coords = json::object();
  const auto& L = a->signature();
  for (int srt = 0; srt < L.sort_count(); ++srt) {
    json m = json::object();
    for (int e = 0; e < a->size(srt); ++e) {
      json t = json::array();
      for (std::size_t i = 0; i < rep.factors.size(); ++i) t.push_back(rep.factors[i].element_name(srt, rep.projections[i].map[srt][e]));
      m[a->element_name(srt, e)] = t;
    }
    coords[L.sorts()[srt]] = std::move(m);
  }
  r["map"] = coords;
  r["product_size"] = rep.product ? json(rep.product->total_size()) : json(nullptr);
  return rep.embedding ? "subdirect representation found" : "representation map is not an embedding";
}

inline std::vector<Variable> parse_vars_opt(const std::string& text, const Signature& sig) {
  if (text.find_first_not_of(" \t") == std::string::npos) return {};
  return parse_variables(text, sig);
}

inline std::vector<Atom> parse_conj_opt(const std::string& text, const NameScope& scope) {
  if (text.find_first_not_of(" \t") == std::string::npos) return {};
  return parse_conjunction(text, scope);
}

inline std::string cmd_present(Session& s, json& r) {
  auto sig = s.signature(s.opt.sig);
  auto vars = parse_vars_opt(s.opt.vars, *sig);
  NameScope scope(*sig);
  scope.variables = vars;
  auto pi = parse_conj_opt(s.opt.relations, scope);
  if (s.opt.klass.empty()) throw InputError("--class is required");
  Context ctx{s.klass(), s.opt.size_bound.value_or(0), s.depth()};
  for (const auto& m : ctx.k)
    if (!(m.signature() == *sig)) throw InputError("class member '" + m.name() + "' is over a different signature");
  auto p = present(sig, vars, pi, ctx);
  json elements = json::array();
  for (int srt = 0; srt < sig->sort_count(); ++srt)
    for (const auto& t : p.element_terms[srt]) elements.push_back(print_term(t));
  r["verdict"] = p.structure.total_size();
  r["elements"] = elements;
  r["reached_depth"] = p.reached_depth;
  r["degenerate"] = p.degenerate;
  r["universal_property"] = p.universal_ok;
  r["structure"] = print_structure(p.structure, s.opt.sig);
  return "presented structure has " + std::to_string(p.structure.total_size()) + " elements";
}

inline std::string cmd_points(Session& s, json& r) {
  auto f = s.atype(s.opt.atype);
  auto v = rational_points(f.base, f.variables, f.atoms);
  json pts = json::array();
  for (const auto& p : v.points) pts.push_back(point_json(*f.base, f.variables, p));
  r["verdict"] = v.points.size();
  r["points"] = pts;
  return std::to_string(v.points.size()) + " rational point(s)";
}

inline std::string cmd_nullstellensatz(Session& s, json& r) {
  auto f = s.atype(s.opt.atype);
  Context ctx = s.context(f.base.get(), true);
  auto rep = check_nullstellensatz(f.base, f.variables, f.atoms, ctx);
  r["verdict"] = rep.equal;
  r["points"] = rep.variety.points.size();
  r["ambient_in_quasivariety"] = rep.ambient_in_wk;
  r["vanishing_only"] = names_of(rep.left_only);
  r["radical_only"] = names_of(rep.right_only);
  r["degenerate"] = rep.right.degenerate;
  r["exact"] = rep.right.exact;
  return rep.equal ? "tp(V) equals the radical" : "tp(V) differs from the radical";
}

inline json scoped_json(const FinStructure& a, const ScopedVerdict& v) {
  json j = {{"passes", v.passes}, {"assignments", v.assignments}};
  if (v.counterexample) {
    j["counterexample"] = print_sentence(a.signature(), v.counterexample->sentence);
    std::vector<std::string> pt;
    for (int x : v.counterexample->point) pt.push_back(std::to_string(x));
    j["point"] = v.counterexample->point;
  }
  return j;
}

template <class Check>
std::string run_scoped(Session& s, json& r, const std::string& what, Check&& check) {
  auto a = s.structure(s.opt.from);
  auto b = s.structure(s.opt.to);
  require_same_signature(*a, *b);
  Scope scope = parse_scope(s.opt);
  std::vector<Hom> homs;
  if (!s.opt.hom.empty()) homs.push_back(parse_hom(*a, *b, s.opt.hom));
  else homs = enumerate_homs(*a, *b);
  json list = json::array();
  bool all = true;
  for (const auto& f : homs) {
    json j = {{"hom", hom_json(*a, *b, f)}};
    all = check(*a, *b, f, scope, j) && all;
    list.push_back(std::move(j));
  }
  r["verdict"] = all;
  r["exact"] = false;
  r["homs"] = list;
  return std::to_string(homs.size()) + " hom(s) checked, " + what + (all ? " holds" : " fails for some");
}

inline std::string cmd_gc(Session& s, json& r) {
  return run_scoped(s, r, "geometric closedness", [](const FinStructure& a, const FinStructure& b, const Hom& f, const Scope& sc, json& j) {
    auto v = check_geometrically_closed(a, b, f, sc);
    j["result"] = scoped_json(a, v);
    return v.passes;
  });
}

inline std::string cmd_immersion(Session& s, json& r) {
  return run_scoped(s, r, "immersion", [](const FinStructure& a, const FinStructure& b, const Hom& f, const Scope& sc, json& j) {
    auto v = check_immersion(a, b, f, sc);
    j["result"] = scoped_json(a, v);
    return v.passes;
  });
}

inline std::string cmd_gcim(Session& s, json& r) {
  return run_scoped(s, r, "the GCIM implication", [](const FinStructure& a, const FinStructure& b, const Hom& f, const Scope& sc, json& j) {
    auto v = check_gcim(a, b, f, sc);
    j["geometrically_closed"] = scoped_json(a, v.geometrically_closed);
    j["immersion"] = scoped_json(a, v.immersion);
    j["one_embeds_in_target"] = v.one_embeds;
    j["vacuous"] = v.vacuous;
    return true;
  });
}

inline std::string cmd_witness_terms(Session& s, json& r) {
  if (!s.opt.morphism.empty()) {
    s.record(s.opt.morphism);
    std::string text = read_file(s.opt.morphism);
    // morphism from VFILE to WFILE formula "..."
    auto lines = logical_lines(text);
    if (lines.empty()) throw InputError(s.opt.morphism + ": empty morphism file");
    const std::string& line = lines[0].second;
    auto p_from = line.find("morphism from ");
    auto p_to = line.find(" to ");
    auto p_formula = line.find(" formula ");
    if (p_from != 0 || p_to == std::string::npos || p_formula == std::string::npos || p_formula < p_to)
      throw InputError(s.opt.morphism + ": expected 'morphism from VFILE to WFILE formula \"...\"'");
    std::string vfile = line.substr(14, p_to - 14), wfile = line.substr(p_to + 4, p_formula - p_to - 4);
    std::string formula = line.substr(p_formula + 9);
    formula.erase(0, formula.find_first_not_of(" \t"));
    formula.erase(formula.find_last_not_of(" \t") + 1);
    if (formula.size() < 2 || formula.front() != '"' || formula.back() != '"')
      throw InputError(s.opt.morphism + ": the formula must be quoted");
    formula = formula.substr(1, formula.size() - 2);
    auto dir = fs::path(s.opt.morphism).parent_path();
    auto vf = s.atype((dir / vfile).string());
    auto wf = s.atype((dir / wfile).string());
    if (vf.base != wf.base) throw InputError("source and target varieties must live over the same structure");
    Context ctx = s.context(vf.base.get(), true);
    auto v = rational_points(vf.base, vf.variables, vf.atoms);
    auto w = rational_points(wf.base, wf.variables, wf.atoms);
    auto all_vars = vf.variables;
    all_vars.insert(all_vars.end(), wf.variables.begin(), wf.variables.end());
    require_disjoint(vf.variables, wf.variables);
    auto phi = parse_conjunction(formula, scope_of(*vf.base, all_vars));
    auto m = check_morphism(v, w, phi, ctx);
    r["verdict"] = m.ok;
    if (!m.ok) r["failure"] = m.failure;
    if (m.ok) {
      auto wt = extract_witness_terms(witness_query(m.morphism), ctx);
      if (wt.terms) r["terms"] = terms_json(*wt.terms);
      r["verified"] = wt.verified;
    }
    json graph = json::array();
    for (const auto& g : m.morphism.graph) graph.push_back(point_json(*vf.base, wf.variables, g));
    r["graph"] = graph;
    return m.ok ? "morphism of varieties" : "not a morphism: " + m.failure;
  }
  auto a = s.structure(s.opt.structure);
  Context ctx = s.context(a.get(), true);
  WitnessQuery q;
  q.base = a;
  q.xs = parse_vars_opt(s.opt.xs, a->signature());
  q.ys = parse_vars_opt(s.opt.ys, a->signature());
  require_disjoint(q.xs, q.ys);
  auto both = q.xs;
  both.insert(both.end(), q.ys.begin(), q.ys.end());
  q.phi = parse_conj_opt(s.opt.phi, scope_of(*a, both));
  q.theta = parse_conj_opt(s.opt.theta, scope_of(*a, q.xs));
  auto res = extract_witness_terms(q, ctx);
  r["verdict"] = res.terms.has_value();
  if (res.terms) r["terms"] = terms_json(*res.terms);
  else r["missing_output"] = q.ys.at(res.missing_output).name;
  r["verified"] = res.verified;
  r["contexts"] = res.contexts;
  return res.terms ? "witness terms found" : "no witness terms within depth";
}

inline std::string cmd_coordinate_algebra(Session& s, json& r) {
  auto f = s.atype(s.opt.atype);
  auto v = rational_points(f.base, f.variables, f.atoms);
  auto c = coordinate_algebra(v, s.depth());
  json elements = json::array();
  for (const auto& per_sort : c.algebra.terms)
    for (const auto& t : per_sort) elements.push_back(print_term(t));
  r["verdict"] = c.algebra.structure.total_size();
  r["elements"] = elements;
  r["classes_at_depth"] = c.classes_at_depth;
  r["onto_depth_part"] = c.onto_depth_part;
  r["embeds_in_power"] = c.embeds_in_power ? json(*c.embeds_in_power) : json(nullptr);
  r["degenerate"] = c.degenerate;
  return "coordinate algebra has " + std::to_string(c.algebra.structure.total_size()) + " elements";
}

inline std::string cmd_duality(Session& s, json& r) {
  auto a = s.structure(s.opt.structure);
  Context ctx = s.context(a.get(), true);
  if (!s.opt.samples) throw InputError("--samples is required");
  auto rep = check_duality_instance(a, ctx, *s.opt.samples);
  json pairs = json::array();
  for (const auto& p : rep.pairs)
    pairs.push_back({{"source", p.source}, {"target", p.target}, {"morphisms", p.morphisms},
                     {"algebra_maps", p.algebra_maps}, {"faithful", p.faithful}, {"full", p.full}});
  json ess = json::array();
  for (const auto& e : rep.essential)
    ess.push_back({{"sample", e.sample}, {"nullstellensatz", e.nullstellensatz}, {"isomorphic", e.isomorphic}});
  json samples = json::array();
  for (const auto& o : rep.samples)
    samples.push_back({{"variables", o.variety.vars.size()}, {"atoms", names_of(o.variety.pi)}, {"points", o.variety.points.size()}});
  r["verdict"] = rep.holds;
  r["samples"] = samples;
  r["pairs"] = pairs;
  r["identity_law"] = rep.identity_law;
  r["composition_law"] = rep.composition_law;
  r["compositions_checked"] = rep.compositions_checked;
  r["essential"] = ess;
  return rep.holds ? "duality holds on the samples" : "duality fails on the samples";
}

inline std::string write_output(const fs::path& dir, const std::string& name, const std::string& text, json& files) {
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.string());
  out << text;
  files.push_back({{"path", p.string()}, {"digest", digest(text)}});
  return p.string();
}

inline std::string cmd_morleyize(Session& s, json& r) {
  auto sig = s.signature(s.opt.sig);
  auto ss = morleyize_signature(sig);
  fs::path dir = s.opt.out_dir;
  std::string sig_name = fs::path(s.opt.sig).stem().string() + "-star.sig";
  json files = json::array();
  write_output(dir, sig_name, print_signature(*ss.star), files);
  if (!s.opt.theory.empty()) {
    auto t = s.loader.theory(s.opt.theory, sig);
    s.record(s.opt.theory);
    write_output(dir, fs::path(s.opt.theory).stem().string() + "-star.thy", print_theory(star_theory(t, ss), sig_name), files);
  }
  for (const auto& p : s.opt.structures) {
    auto a = s.structure(p);
    if (!(a->signature() == *sig)) throw InputError(p + " is not over " + s.opt.sig);
    write_output(dir, fs::path(p).stem().string() + "-star.struct", print_structure(star_expand(*a, ss), sig_name), files);
  }
  json starred = json::object();
  for (std::size_t i = 0; i < ss.starred.size(); ++i)
    starred[sig->relations()[i].name] = ss.star->relations()[ss.starred[i]].name;
  json unequal = json::object();
  for (int i = 0; i < sig->sort_count(); ++i) unequal[sig->sorts()[i]] = ss.star->relations()[ss.unequal[i]].name;
  r["verdict"] = files;
  r["starred"] = starred;
  r["disequality"] = unequal;
  return "wrote " + std::to_string(files.size()) + " file(s)";
}

inline std::string cmd_strict(Session& s, json& r) {
  if (!s.opt.theory.empty()) {
    auto t = s.theory(s.opt.theory);
    auto v = is_strict(t);
    r["route"] = "axioms";
    r["verdict"] = v.strict;
    if (v.refuting_axiom) r["refuting_axiom"] = print_sentence(*t.signature, *v.refuting_axiom);
    return v.strict ? "strict: an axiom fails in the one-point structure" : "not strict";
  }
  if (s.opt.klass.empty()) throw InputError("strict needs --theory or --class");
  auto k = s.klass();
  auto v = is_strict(k);
  r["route"] = "class";
  r["verdict"] = v.strict;
  if (!v.strict) {
    r["member"] = k[v.member].name();
    json pt = json::object();
    for (int srt = 0; srt < k[v.member].signature().sort_count(); ++srt)
      pt[k[v.member].signature().sorts()[srt]] = k[v.member].element_name(srt, v.embedding->map[srt][0]);
    r["point"] = pt;
  }
  return v.strict ? "strict relative to K" : "not strict relative to K";
}

inline std::string cmd_star_transfer(Session& s, json& r) {
  auto a = s.structure(s.opt.structure);
  Context ctx = s.context(a.get(), false);
  auto rep = check_star_transfer(*a, ctx.k);
  r["verdict"] = rep.in_universal;
  r["in_universal_class"] = rep.in_universal;
  if (rep.universal_witness)
    r["embedding"] = {{"member", ctx.k[rep.universal_witness->member].name()},
                      {"hom", hom_json(*a, ctx.k[rep.universal_witness->member], rep.universal_witness->hom)}};
  r["expansion_in_quasivariety"] = rep.star_in_quasivariety;
  r["homs_between_expansions"] = rep.homs_checked;
  r["expansions_without_one"] = rep.one_checks;
  return std::string("biconditional holds (both sides ") + (rep.in_universal ? "true" : "false") + ")";
}

inline std::string cmd_star_bijection(Session& s, json& r) {
  auto f = s.atype(s.opt.atype);
  Context ctx = s.context(f.base.get(), true);
  auto rep = star_prime_bijection(f.base, f.variables, f.atoms, ctx.k, ctx.depth);
  r["verdict"] = rep.bijection;
  r["strong_primes"] = primes_json(rep.strong_primes, ctx.k);
  r["star_primes"] = rep.star_primes.size();
  r["matching"] = rep.matching;
  return std::to_string(rep.strong_primes.size()) + " strongly prime a-type(s) matched";
}

inline json ideal_json(const FinStructure& a, const Ideal& i) {
  json out = json::array();
  for (int x : i) out.push_back(a.element_name(0, x));
  return out;
}

inline Ideal parse_ideal(const FinStructure& a, const std::string& text) {
  std::vector<int> gens;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    auto e = a.find_element(0, item);
    if (!e) throw InputError("unknown element '" + item + "'");
    gens.push_back(*e);
  }
  return ideal_closure(a, gens);
}

inline std::string cmd_gba_validate(Session& s, json& r) {
  auto a = s.structure(s.opt.structure);
  auto c = validate_gba(*a);
  const auto& L = a->signature();
  r["verdict"] = c.valid;
  r["roles"] = {{"mul", L.functions()[c.roles.mul].name},
                {"inv", L.functions()[c.roles.inv].name},
                {"e", c.roles.unit_constant >= 0 ? L.constants()[c.roles.unit_constant].name : L.functions()[c.roles.unit_function].name}};
  if (!c.valid) {
    r["violation"] = c.violation;
    json w = json::array();
    for (int x : c.witness) w.push_back(a->element_name(0, x));
    r["witness"] = w;
  }
  return c.valid ? "group-based" : "not group-based: " + c.violation;
}

inline std::string cmd_gba_ideals(Session& s, json& r) {
  auto a = s.structure(s.opt.structure);
  auto rep = ideal_atype_bijection(a);
  json ideals = json::array();
  for (const auto& i : rep.ideals) ideals.push_back(ideal_json(*a, i));
  r["verdict"] = ideals;
  r["closed_atypes"] = rep.closed_types.size();
  r["bijection"] = true;
  return std::to_string(rep.ideals.size()) + " ideal(s), matched with closed a-types";
}

inline std::string cmd_gba_radical(Session& s, json& r) {
  auto a = s.structure(s.opt.structure);
  Context ctx = s.context(a.get(), false);
  Ideal i = parse_ideal(*a, s.opt.ideal);
  auto rep = ideal_radical(a, i, ctx);
  json primes = json::array();
  for (std::size_t j = 0; j < rep.primes.size(); ++j)
    primes.push_back({{"ideal", ideal_json(*a, rep.primes[j])}, {"member", ctx.k[rep.prime_members[j]].name()}});
  r["ideal"] = ideal_json(*a, i);
  r["verdict"] = ideal_json(*a, rep.radical);
  r["primes"] = primes;
  r["degenerate"] = rep.degenerate;
  return "radical has " + std::to_string(rep.radical.size()) + " element(s)";
}

inline std::string cmd_gba_nullstellensatz(Session& s, json& r) {
  auto a = s.structure(s.opt.structure);
  Context ctx = s.context(a.get(), true);
  auto vars = parse_vars_opt(s.opt.vars, a->signature());
  NameScope scope = scope_of(*a, vars);
  std::vector<Term> gens;
  std::stringstream ss(s.opt.gens);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (item.find_first_not_of(" \t") != std::string::npos) gens.push_back(parse_term(item, scope));
  auto rep = gba_nullstellensatz(a, vars, gens, ctx);
  json zeros = json::array();
  for (const auto& z : rep.zeros) zeros.push_back(point_json(*a, vars, z));
  r["verdict"] = rep.equal;
  r["zeros"] = zeros;
  r["vanishing"] = rep.vanishing.size();
  r["radical"] = rep.radical.size();
  r["vanishing_only"] = terms_json(rep.vanishing_only);
  r["radical_only"] = terms_json(rep.radical_only);
  r["ambient_in_quasivariety"] = rep.atypes.ambient_in_wk;
  r["exact"] = rep.atypes.right.exact;
  return rep.equal ? "I(Z(I)) equals the radical" : "I(Z(I)) differs from the radical";
}

// ---------------------------------------------------------------------------

struct CommandSpec {
  const char* name;
  const char* help;
  Command run;
  bool relative;  // K-relative semantics
};

inline const std::vector<CommandSpec>& commands() {
  static const std::vector<CommandSpec> list = {
      {"parse", "parse a file and print it canonically", cmd_parse, false},
      {"classify", "fragment of each sentence", cmd_classify, false},
      {"eval", "truth of sentences in a structure", cmd_eval, false},
      {"homs", "enumerate homomorphisms or embeddings", cmd_homs, false},
      {"product", "direct product of structures", cmd_product, false},
      {"quotient", "quotient by a variable-free a-type", cmd_quotient, false},
      {"close", "closure of an a-type", cmd_close, false},
      {"radical", "positive radical relative to K", cmd_radical, true},
      {"is-prime", "is the closed a-type prime", cmd_is_prime, true},
      {"is-radical", "is the closed a-type radical", cmd_is_radical, true},
      {"represent", "subdirect representation over the primes", cmd_represent, true},
      {"present", "structure presented in W_K", cmd_present, true},
      {"points", "rational points of an a-type", cmd_points, false},
      {"nullstellensatz", "compare tp(V) with the radical", cmd_nullstellensatz, true},
      {"gc-check", "scoped geometric closedness", cmd_gc, false},
      {"immersion-check", "scoped immersion check", cmd_immersion, false},
      {"gcim-check", "closed homs into strict targets are immersions", cmd_gcim, false},
      {"witness-terms", "terms witnessing a functional conjunction", cmd_witness_terms, true},
      {"coordinate-algebra", "coordinate algebra of a variety", cmd_coordinate_algebra, false},
      {"duality-check", "spot-check the variety/algebra duality", cmd_duality, true},
      {"morleyize", "emit star signature, theory and structures", cmd_morleyize, false},
      {"strict", "strictness by axioms or relative to K", cmd_strict, false},
      {"star-transfer", "universal class versus expanded quasivariety", cmd_star_transfer, true},
      {"star-bijection", "strongly prime versus expanded prime a-types", cmd_star_bijection, true},
      {"gba-validate", "group-based algebra certificate", cmd_gba_validate, false},
      {"gba-ideals", "ideals and their closed a-types", cmd_gba_ideals, false},
      {"gba-radical", "radical of an ideal relative to K", cmd_gba_radical, true},
      {"gba-nullstellensatz", "ideal-language Nullstellensatz", cmd_gba_nullstellensatz, true},
  };
  return list;
}

inline void add_options(CLI::App& sub, Options& o) {
  sub.add_option("--sig", o.sig, "signature file");
  sub.add_option("--theory", o.theory, "theory file");
  sub.add_option("--structure", o.structure, "structure file");
  sub.add_option("--atype", o.atype, "a-type file");
  sub.add_option("--from", o.from, "source structure");
  sub.add_option("--to", o.to, "target structure");
  sub.add_option("--hom", o.hom, "element map 'a->b, c->d'");
  sub.add_option("--mode", o.mode, "hom or embedding");
  sub.add_option("--morphism", o.morphism, "morphism file");
  sub.add_option("--class", o.klass, "class members K")->delimiter(',');
  sub.add_option("--structures", o.structures, "structure files")->delimiter(',');
  sub.add_option("--sentence", o.sentences, "sentence text");
  sub.add_option("--vars", o.vars, "variables 'x:s, y:s'");
  sub.add_option("--xs", o.xs, "input variables");
  sub.add_option("--ys", o.ys, "output variables");
  sub.add_option("--phi", o.phi, "conjunction over xs, ys");
  sub.add_option("--theta", o.theta, "conjunction over xs");
  sub.add_option("--relations", o.relations, "defining relations");
  sub.add_option("--gens", o.gens, "ideal generators, ';'-separated terms");
  sub.add_option("--ideal", o.ideal, "ideal generators, ','-separated elements");
  sub.add_option("--out-dir", o.out_dir, "output directory");
  sub.add_option("--premise-bound", o.premise_bound, "premise bound or 'none'");
  sub.add_option("--depth", o.depth, "term depth bound");
  sub.add_option("--size-bound", o.size_bound, "size bound k");
  sub.add_option("--max-vars", o.max_vars, "quantified variable bound");
  sub.add_option("--samples", o.samples, "number of sample varieties");
  sub.add_option("--limit", o.limit, "list at most this many");
  sub.add_option("--jobs", o.jobs, "worker threads (default QUASIVAR_JOBS or 1)");
  sub.add_flag("--timing", o.timing, "add wall-clock time to the report");
}

// Exit codes: 0 verdict computed, 1 input error, 2 theorem-check violation.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"quasivar: finite-instance workbench for quasivarieties and a-types"};
  app.require_subcommand(1);
  Options o;
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : commands()) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_options(*sub, o);
    subs[c.name] = sub;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  const CommandSpec* spec = nullptr;
  for (const auto& c : commands())
    if (subs[c.name]->parsed()) spec = &c;

  default_jobs() = resolve_jobs(o.jobs);
  json report = json::object();
  report["command"] = spec->name;
  auto start = std::chrono::steady_clock::now();
  Session session(o);
  try {
    json body = json::object();
    std::string summary = spec->run(session, body);
    report["inputs"] = session.inputs;
    report["scope"] = scope_json(o, spec->relative);
    if (spec->relative) report["semantics"] = "relative to K";
    for (auto& [k, v] : body.items()) report[k] = v;
    if (o.timing)
      report["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out << report.dump(2) << "\n";
    err << spec->name << ": " << summary << "\n";
    if (spec->relative && o.size_bound) {
      Context ctx{session.klass(), *o.size_bound, 0};
      for (const auto& w : ctx.warnings()) err << "warning: " << w << "\n";
    }
    return 0;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 1;
  } catch (const TheoremViolation& e) {
    err << "theorem check violated: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace quasivar::cli
