#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "structure.hpp"

namespace quasivar {

// Substructure of a product ∏ factors generated by seed tuples, built
// breadth-first so every element carries a defining term of least depth.
// Elements are stored as profiles (one value per factor).
struct GenSeed {
  SortId sort = 0;
  std::vector<int> profile;
  Term term;
};

struct Generated {
  FinStructure structure;
  std::vector<std::vector<std::vector<int>>> profiles;  // [sort][element]
  std::vector<std::vector<Term>> terms;                 // [sort][element]
  std::vector<int> seeds;                               // element of each seed, in its sort
  int reached_depth = 0;                                // depth at which generation stabilized

  int find(SortId s, const std::vector<int>& profile) const {
    for (std::size_t e = 0; e < profiles[s].size(); ++e)
      if (profiles[s][e] == profile) return static_cast<int>(e);
    return -1;
  }
};

inline constexpr std::size_t generation_limit = 20000;

// Seeds come first (in order), then constants and nullary functions, then one
// layer per depth. Element names are the printed terms, primed on collision
// with a symbol.
inline Generated generate_in_product(std::shared_ptr<const Signature> sig, const std::vector<const FinStructure*>& factors,
                                     const std::vector<GenSeed>& seeds, const std::string& name,
                                     std::size_t limit = generation_limit) {
  const auto& L = *sig;
  const std::size_t width = factors.size();
  struct Elem {
    SortId sort;
    std::vector<int> profile;
    Term term;
  };
  std::vector<Elem> elems;
  std::vector<int> seed_ids;
  std::map<std::pair<SortId, std::vector<int>>, int> index;
  auto add = [&](SortId s, std::vector<int> profile, const Term& t) {
    auto [it, fresh] = index.emplace(std::make_pair(s, profile), static_cast<int>(elems.size()));
    if (fresh) {
      if (elems.size() >= limit) throw InputError("generated structure exceeds " + std::to_string(limit) + " elements");
      elems.push_back({s, std::move(profile), t});
    }
    return it->second;
  };
  for (const auto& sd : seeds) seed_ids.push_back(add(sd.sort, sd.profile, sd.term));
  for (std::size_t c = 0; c < L.constants().size(); ++c) {
    std::vector<int> prof(width);
    for (std::size_t j = 0; j < width; ++j) prof[j] = factors[j]->constant(static_cast<int>(c));
    add(L.constants()[c].sort, std::move(prof), Term::constant(L, static_cast<int>(c)));
  }
  for (std::size_t f = 0; f < L.functions().size(); ++f)
    if (L.functions()[f].args.empty()) {
      std::vector<int> prof(width);
      for (std::size_t j = 0; j < width; ++j) prof[j] = factors[j]->apply(static_cast<int>(f), {});
      add(L.functions()[f].result, std::move(prof), Term::apply(L, static_cast<int>(f), {}));
    }

  Generated out;
  std::size_t layer_start = 0;
  std::vector<int> args, ids;
  for (int depth = 1;; ++depth) {
    std::size_t layer_end = elems.size();
    std::vector<std::vector<int>> by_sort(L.sort_count());
    for (std::size_t e = 0; e < layer_end; ++e) by_sort[elems[e].sort].push_back(static_cast<int>(e));
    for (std::size_t f = 0; f < L.functions().size(); ++f) {
      const auto& fs = L.functions()[f];
      if (fs.args.empty()) continue;
      std::vector<int> sizes;
      for (SortId s : fs.args) sizes.push_back(static_cast<int>(by_sort[s].size()));
      for (TupleCounter tc(sizes); !tc.done(); tc.next()) {
        bool fresh = false;
        ids.clear();
        for (std::size_t a = 0; a < fs.args.size(); ++a) {
          int id = by_sort[fs.args[a]][tc.digits()[a]];
          fresh = fresh || static_cast<std::size_t>(id) >= layer_start;
          ids.push_back(id);
        }
        if (!fresh) continue;
        std::vector<int> prof(width);
        for (std::size_t j = 0; j < width; ++j) {
          args.clear();
          for (int id : ids) args.push_back(elems[id].profile[j]);
          prof[j] = factors[j]->apply(static_cast<int>(f), args);
        }
        if (index.count({fs.result, prof})) continue;
        std::vector<Term> targs;
        for (int id : ids) targs.push_back(elems[id].term);
        add(fs.result, std::move(prof), Term::apply(L, static_cast<int>(f), std::move(targs)));
      }
    }
    if (elems.size() == layer_end) {
      out.reached_depth = depth - 1;
      break;
    }
    layer_start = layer_end;
  }

  std::set<std::string> taken;
  for (const auto& fs : L.functions()) taken.insert(fs.name);
  for (const auto& rs : L.relations()) taken.insert(rs.name);
  for (const auto& cs : L.constants()) taken.insert(cs.name);
  std::vector<std::vector<std::string>> carriers(L.sort_count());
  std::vector<int> local(elems.size());
  out.profiles.assign(L.sort_count(), {});
  out.terms.assign(L.sort_count(), {});
  for (std::size_t e = 0; e < elems.size(); ++e) {
    std::string n = print_term(elems[e].term);
    while (taken.count(n)) n += "'";
    taken.insert(n);
    SortId s = elems[e].sort;
    local[e] = static_cast<int>(carriers[s].size());
    carriers[s].push_back(n);
    out.profiles[s].push_back(elems[e].profile);
    out.terms[s].push_back(elems[e].term);
  }
  FinStructure st(sig, name, carriers);
  for (std::size_t f = 0; f < L.functions().size(); ++f) {
    const auto& fs = L.functions()[f];
    for (TupleCounter tc(st.arg_sizes(fs.args)); !tc.done(); tc.next()) {
      std::vector<int> prof(width);
      for (std::size_t j = 0; j < width; ++j) {
        args.clear();
        for (std::size_t a = 0; a < fs.args.size(); ++a) args.push_back(out.profiles[fs.args[a]][tc.digits()[a]][j]);
        prof[j] = factors[j]->apply(static_cast<int>(f), args);
      }
      st.set_function(static_cast<int>(f), tc.digits(), local[index.at({fs.result, prof})]);
    }
  }
  for (std::size_t r = 0; r < L.relations().size(); ++r) {
    const auto& rs = L.relations()[r];
    for (TupleCounter tc(st.arg_sizes(rs.args)); !tc.done(); tc.next()) {
      bool all = true;
      for (std::size_t j = 0; j < width && all; ++j) {
        args.clear();
        for (std::size_t a = 0; a < rs.args.size(); ++a) args.push_back(out.profiles[rs.args[a]][tc.digits()[a]][j]);
        all = factors[j]->holds(static_cast<int>(r), args);
      }
      st.set_relation(static_cast<int>(r), tc.digits(), all);
    }
  }
  for (std::size_t c = 0; c < L.constants().size(); ++c) {
    std::vector<int> prof(width);
    for (std::size_t j = 0; j < width; ++j) prof[j] = factors[j]->constant(static_cast<int>(c));
    st.set_constant(static_cast<int>(c), local[index.at({L.constants()[c].sort, prof})]);
  }
  for (int id : seed_ids) out.seeds.push_back(local[id]);
  out.structure = std::move(st);
  return out;
}

}  // namespace quasivar
