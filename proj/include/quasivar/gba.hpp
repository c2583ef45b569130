#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "affine.hpp"
#include "atype.hpp"
#include "homs.hpp"
#include "radical.hpp"

namespace quasivar {

// Which symbols play ∗, ⁻¹ and e. Tried as (mul, inv, e), then (add, neg, zero).
struct GbaRoles {
  int mul = -1;
  int inv = -1;
  int unit_constant = -1;  // constant symbol for e, or
  int unit_function = -1;  // nullary function symbol for e
};

struct GbaCertificate {
  GbaRoles roles;
  int e = -1;  // the unit element
  bool valid = false;
  std::string violation;
  std::vector<int> witness;  // offending tuple
};

using Ideal = std::vector<int>;  // sorted element indices

namespace detail {

inline std::optional<GbaRoles> roles_named(const Signature& L, const std::string& m, const std::string& i, const std::string& u) {
  auto fm = L.find_function(m);
  auto fi = L.find_function(i);
  if (!fm || !fi) return std::nullopt;
  if (L.functions()[*fm].args.size() != 2 || L.functions()[*fi].args.size() != 1) return std::nullopt;
  GbaRoles r;
  r.mul = *fm;
  r.inv = *fi;
  if (auto c = L.find_constant(u)) {
    r.unit_constant = *c;
  } else if (auto f = L.find_function(u); f && L.functions()[*f].args.empty()) {
    r.unit_function = *f;
  } else {
    return std::nullopt;
  }
  return r;
}

}  // namespace detail

inline GbaRoles gba_roles(const Signature& L) {
  if (L.sort_count() != 1) throw InputError("group-based algebras are one-sorted");
  if (!L.relations().empty()) throw InputError("group-based algebras have no relation symbols");
  if (auto r = detail::roles_named(L, "mul", "inv", "e")) return *r;
  if (auto r = detail::roles_named(L, "add", "neg", "zero")) return *r;
  throw InputError("no group operations found: expected mul/inv/e or add/neg/zero");
}

inline GbaCertificate validate_gba(const FinStructure& a) {
  GbaCertificate c;
  c.roles = gba_roles(a.signature());
  const auto& r = c.roles;
  c.e = r.unit_constant >= 0 ? a.constant(r.unit_constant) : a.apply(r.unit_function, {});
  const int n = a.size(0);
  auto mul = [&](int x, int y) { return a.apply(r.mul, std::vector<int>{x, y}); };
  auto inv = [&](int x) { return a.apply(r.inv, std::vector<int>{x}); };
  auto fail = [&](std::string what, std::vector<int> w) {
    c.violation = std::move(what);
    c.witness = std::move(w);
    return c;
  };
  for (int x = 0; x < n; ++x) {
    if (mul(c.e, x) != x || mul(x, c.e) != x) return fail("unit law", {x});
    if (mul(x, inv(x)) != c.e || mul(inv(x), x) != c.e) return fail("inverse law", {x});
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (mul(mul(x, y), z) != mul(x, mul(y, z))) return fail("associativity", {x, y, z});
  }
  const auto& L = a.signature();
  for (std::size_t f = 0; f < L.functions().size(); ++f) {
    const auto& fs = L.functions()[f];
    if (fs.args.empty()) continue;
    std::vector<int> es(fs.args.size(), c.e);
    if (a.apply(static_cast<int>(f), es) != c.e) return fail(fs.name + "(e, ..., e) != e", es);
  }
  c.valid = true;
  return c;
}

inline GbaCertificate require_gba(const FinStructure& a) {
  auto c = validate_gba(a);
  if (!c.valid) throw InputError(a.name() + " is not group-based: " + c.violation);
  return c;
}

namespace detail {

struct GbaOps {
  const FinStructure& a;
  GbaCertificate c;
  int mul(int x, int y) const { return a.apply(c.roles.mul, std::vector<int>{x, y}); }
  int inv(int x) const { return a.apply(c.roles.inv, std::vector<int>{x}); }
};

inline Ideal to_ideal(const std::vector<char>& in) {
  Ideal out;
  for (std::size_t i = 0; i < in.size(); ++i)
    if (in[i]) out.push_back(static_cast<int>(i));
  return out;
}

// Normal subgroup generated by the marked set.
inline void normal_close(const GbaOps& g, std::vector<char>& in) {
  const int n = g.a.size(0);
  in[g.c.e] = 1;
  for (bool grew = true; grew;) {
    grew = false;
    for (int x = 0; x < n; ++x) {
      if (!in[x]) continue;
      auto add = [&](int y) {
        if (!in[y]) in[y] = grew = true;
      };
      add(g.inv(x));
      for (int y = 0; y < n; ++y) {
        if (in[y]) add(g.mul(x, y));
        add(g.mul(g.mul(y, x), g.inv(y)));
      }
    }
  }
}

// One pass of F-absorption and commutator absorption; returns whether the
// set grew.
inline bool absorb(const GbaOps& g, std::vector<char>& in) {
  const auto& L = g.a.signature();
  const int n = g.a.size(0);
  bool grew = false;
  Ideal members = to_ideal(in);
  for (std::size_t f = 0; f < L.functions().size(); ++f) {
    const std::size_t k = L.functions()[f].args.size();
    if (k == 0) continue;
    std::vector<int> is(k, static_cast<int>(members.size())), as(k, n);
    std::vector<int> xs(k), ys(k), xy(k);
    for (TupleCounter ti(is); !ti.done(); ti.next()) {
      for (std::size_t j = 0; j < k; ++j) xs[j] = members[ti.digits()[j]];
      int fx = g.a.apply(static_cast<int>(f), xs);
      if (!in[fx]) in[fx] = grew = true;
      for (TupleCounter tb(as); !tb.done(); tb.next()) {
        for (std::size_t j = 0; j < k; ++j) {
          ys[j] = tb.digits()[j];
          xy[j] = g.mul(xs[j], ys[j]);
        }
        int fy = g.a.apply(static_cast<int>(f), ys);
        int comm = g.mul(g.mul(g.inv(fx), g.inv(fy)), g.a.apply(static_cast<int>(f), xy));
        if (!in[comm]) in[comm] = grew = true;
      }
    }
  }
  return grew;
}

inline bool satisfies_ideal_conditions(const GbaOps& g, const std::vector<char>& in) {
  auto copy = in;
  return !absorb(g, copy);
}

}  // namespace detail

// Least ideal containing s.
inline Ideal ideal_closure(const FinStructure& a, const std::vector<int>& s) {
  detail::GbaOps g{a, require_gba(a)};
  std::vector<char> in(a.size(0), 0);
  for (int x : s) {
    if (x < 0 || x >= a.size(0)) throw InputError("element index out of range");
    in[x] = 1;
  }
  do detail::normal_close(g, in);
  while (detail::absorb(g, in));
  return detail::to_ideal(in);
}

inline bool is_ideal(const FinStructure& a, const Ideal& s) {
  detail::GbaOps g{a, require_gba(a)};
  std::vector<char> in(a.size(0), 0);
  for (int x : s) in[x] = 1;
  auto closed = in;
  detail::normal_close(g, closed);
  return closed == in && detail::satisfies_ideal_conditions(g, in);
}

// Normal subgroups by joins with single elements from {e}, then filtered by
// the ideal conditions. Ordered by size, then lexicographically.
inline std::vector<Ideal> normal_subgroups(const FinStructure& a) {
  detail::GbaOps g{a, require_gba(a)};
  const int n = a.size(0);
  std::set<std::vector<char>> seen;
  std::vector<std::vector<char>> frontier;
  std::vector<char> triv(n, 0);
  detail::normal_close(g, triv);
  seen.insert(triv);
  frontier.push_back(triv);
  while (!frontier.empty()) {
    std::vector<std::vector<char>> next;
    for (const auto& sub : frontier)
      for (int x = 0; x < n; ++x) {
        if (sub[x]) continue;
        auto bigger = sub;
        bigger[x] = 1;
        detail::normal_close(g, bigger);
        if (seen.insert(bigger).second) next.push_back(std::move(bigger));
      }
    frontier = std::move(next);
  }
  std::vector<Ideal> out;
  for (const auto& s : seen) out.push_back(detail::to_ideal(s));
  std::sort(out.begin(), out.end(), [](const Ideal& x, const Ideal& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  return out;
}

inline std::vector<Ideal> enumerate_ideals(const FinStructure& a) {
  detail::GbaOps g{a, require_gba(a)};
  std::vector<Ideal> out;
  for (auto& s : normal_subgroups(a)) {
    std::vector<char> in(a.size(0), 0);
    for (int x : s) in[x] = 1;
    if (detail::satisfies_ideal_conditions(g, in)) out.push_back(std::move(s));
  }
  return out;
}

inline std::string print_ideal(const FinStructure& a, const Ideal& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + print_name(a.element_name(0, s[i]));
  return out + "}";
}

// ---------------------------------------------------------------------------
// Ideals and closed a-types

// I ↦ tp_a(A ↠ A/I) over a variable-free universe.
inline AType atype_of_ideal(std::shared_ptr<const TermUniverse> u, const Ideal& s) {
  const auto& a = *u->base();
  detail::GbaOps g{a, require_gba(a)};
  std::vector<char> in(a.size(0), 0);
  for (int x : s) in[x] = 1;
  std::vector<int> coset(a.size(0));
  for (int x = 0; x < a.size(0); ++x) {
    coset[x] = x;
    for (int y = 0; y < x; ++y)
      if (in[g.mul(x, g.inv(y))]) {
        coset[x] = coset[y];
        break;
      }
  }
  auto vals = u->evaluate(a, nullptr, {});
  std::vector<long> labels;
  for (int v : vals) labels.push_back(coset[v]);
  return AType::from_labels(u, labels, {});
}

// Φ(π): the class of e.
inline Ideal ideal_of_atype(const AType& p) {
  const auto& u = p.universe();
  const auto& a = *u.base();
  int e = require_gba(a).e;
  Ideal out;
  for (int x = 0; x < a.size(0); ++x)
    if (p.equal(u.element(0, x), u.element(0, e))) out.push_back(x);
  return out;
}

struct IdealBijection {
  std::vector<Ideal> ideals;
  std::vector<AType> closed_types;
  std::vector<int> type_of_ideal;  // ideal i -> closed_types index
};

inline IdealBijection ideal_atype_bijection(std::shared_ptr<const FinStructure> a) {
  require_gba(*a);
  auto u = universe_for(a, {}, 0, {});
  IdealBijection rep;
  rep.ideals = enumerate_ideals(*a);
  for_each_closed_atype(u, [&](const AType& p) { rep.closed_types.push_back(p); });
  if (rep.ideals.size() != rep.closed_types.size())
    throw TheoremViolation(std::to_string(rep.ideals.size()) + " ideals but " + std::to_string(rep.closed_types.size()) +
                           " closed a-types");
  std::set<int> hit;
  for (const auto& s : rep.ideals) {
    AType p = atype_of_ideal(u, s);
    if (!(ideal_of_atype(p) == s)) throw TheoremViolation("ideal " + print_ideal(*a, s) + " is not the kernel of its quotient");
    int found = -1;
    for (std::size_t j = 0; j < rep.closed_types.size(); ++j)
      if (rep.closed_types[j] == p) found = static_cast<int>(j);
    if (found < 0 || !hit.insert(found).second)
      throw TheoremViolation("ideal " + print_ideal(*a, s) + " has no matching closed a-type");
    rep.type_of_ideal.push_back(found);
  }
  for (const auto& p : rep.closed_types)
    if (!is_ideal(*a, ideal_of_atype(p))) throw TheoremViolation("kernel of a closed a-type is not an ideal");
  return rep;
}

// ---------------------------------------------------------------------------
// Radicals

struct IdealRadical {
  Ideal input;
  Ideal radical;
  std::vector<Ideal> primes;
  std::vector<int> prime_members;  // K member realizing each prime
  bool degenerate = false;         // no prime contains I
};

inline Ideal kernel(const FinStructure& m, const Hom& f, int e_target) {
  Ideal out;
  for (std::size_t x = 0; x < f.map[0].size(); ++x)
    if (f.map[0][x] == e_target) out.push_back(static_cast<int>(x));
  return out;
}

// Prime ideals are kernels of homs into K containing I; the radical is their
// intersection. Checked against the radical of the matching a-type.
inline IdealRadical ideal_radical(std::shared_ptr<const FinStructure> a, const Ideal& s, const Context& ctx) {
  require_gba(*a);
  for (const auto& m : ctx.k) require_gba(m);
  IdealRadical rep;
  rep.input = s;
  std::set<Ideal> seen;
  for (std::size_t i = 0; i < ctx.k.size(); ++i) {
    int e = validate_gba(ctx.k[i]).e;
    for_each_hom(*a, ctx.k[i], HomMode::hom, [&](const Hom& f) {
      Ideal ker = kernel(ctx.k[i], f, e);
      if (std::includes(ker.begin(), ker.end(), s.begin(), s.end()) && seen.insert(ker).second) {
        rep.primes.push_back(ker);
        rep.prime_members.push_back(static_cast<int>(i));
      }
      return true;
    });
  }
  rep.degenerate = rep.primes.empty();
  std::vector<char> in(a->size(0), 1);
  for (const auto& p : rep.primes) {
    std::vector<char> mark(a->size(0), 0);
    for (int x : p) mark[x] = 1;
    for (int x = 0; x < a->size(0); ++x) in[x] = in[x] && mark[x];
  }
  rep.radical = detail::to_ideal(in);

  auto u = universe_for(a, {}, 0, {});
  auto engine = radical_of_closed(atype_of_ideal(u, s), ctx);
  Ideal transported = ideal_of_atype(engine.radical);
  if (transported != rep.radical)
    throw TheoremViolation("radical of " + print_ideal(*a, s) + " is " + print_ideal(*a, rep.radical) +
                           " but the a-type radical gives " + print_ideal(*a, transported));
  return rep;
}

// ---------------------------------------------------------------------------
// Nullstellensatz in ideal language

struct GbaNullstellensatz {
  NullstellensatzReport atypes;             // the same comparison over a-types
  std::vector<std::vector<int>> zeros;      // 𝒵_A(I)
  std::vector<Term> vanishing;              // ℐ(𝒵_A(I)) within the depth-d universe
  std::vector<Term> radical;                // √I⁺ within the depth-d universe
  std::vector<Term> vanishing_only, radical_only;
  bool equal = false;
};

inline GbaNullstellensatz gba_nullstellensatz(std::shared_ptr<const FinStructure> a, const std::vector<Variable>& vars,
                                              const std::vector<Term>& generators, const Context& ctx) {
  auto cert = require_gba(*a);
  for (const auto& m : ctx.k) require_gba(m);
  Term e = Term::parameter(a->element_name(0, cert.e), 0, cert.e);
  std::vector<Atom> pi;
  for (const auto& t : generators) pi.push_back(Atom::equality(t, e));
  GbaNullstellensatz rep;
  rep.atypes = check_nullstellensatz(a, vars, pi, ctx);
  rep.zeros = rep.atypes.variety.points;
  const auto& left = rep.atypes.left.type;
  const auto& right = rep.atypes.right.radical;
  const auto& u = left.universe();
  int unit = u.element(0, cert.e);
  for (int n = 0; n < u.size(); ++n) {
    bool l = left.equal(n, unit), r = right.equal(n, unit);
    if (l) rep.vanishing.push_back(u.term(n));
    if (r) rep.radical.push_back(u.term(n));
    if (l && !r) rep.vanishing_only.push_back(u.term(n));
    if (r && !l) rep.radical_only.push_back(u.term(n));
  }
  rep.equal = rep.vanishing_only.empty() && rep.radical_only.empty();
  return rep;
}

}  // namespace quasivar
