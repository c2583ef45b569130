#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "structure.hpp"

namespace quasivar {

struct TermNode {
  Term::Kind kind = Term::Kind::parameter;
  int symbol = -1;  // element index, constant, variable position or function
  SortId sort = 0;
  std::vector<int> children;
  int depth = 0;
};

// A finite, subterm-closed set of terms over L ⊔ A ⊔ x̄, shared as a DAG.
// Holds every term of depth ≤ d, every D⁺A term F(ā) over parameters, and
// any extra terms supplied (with their subterms). Node ids follow a canonical
// order: depth 0 (parameters, constants, variables), then each depth layer by
// function symbol and argument ids; extra terms come last.
class TermUniverse {
 public:
  static constexpr std::size_t default_limit = 400000;

  TermUniverse(std::shared_ptr<const Signature> sig, std::shared_ptr<const FinStructure> base,
               std::vector<Variable> vars, int depth, const std::vector<Term>& extra = {},
               std::size_t limit = default_limit)
      : sig_(std::move(sig)), base_(std::move(base)), vars_(std::move(vars)), depth_(depth), limit_(limit) {
    const auto& L = *sig_;
    by_sort_.assign(L.sort_count(), {});
    if (base_)
      for (int s = 0; s < L.sort_count(); ++s)
        for (int e = 0; e < base_->size(s); ++e) element_.push_back(add({Term::Kind::parameter, e, s, {}, 0}));
    element_offset_.assign(L.sort_count(), 0);
    if (base_)
      for (int s = 1; s < L.sort_count(); ++s) element_offset_[s] = element_offset_[s - 1] + base_->size(s - 1);
    for (std::size_t c = 0; c < L.constants().size(); ++c)
      add({Term::Kind::constant, static_cast<int>(c), L.constants()[c].sort, {}, 0});
    for (std::size_t v = 0; v < vars_.size(); ++v)
      variable_.push_back(add({Term::Kind::variable, static_cast<int>(v), vars_[v].sort, {}, 0}));
    for (std::size_t f = 0; f < L.functions().size(); ++f)
      if (L.functions()[f].args.empty()) add({Term::Kind::apply, static_cast<int>(f), L.functions()[f].result, {}, 0});
    for (int k = 1; k <= depth_; ++k) add_layer(k);
    if (base_ && depth_ < 1) add_diagram_terms();
    for (const auto& t : extra) intern(t);
  }

  const Signature& signature() const { return *sig_; }
  const std::shared_ptr<const Signature>& signature_ptr() const { return sig_; }
  const std::shared_ptr<const FinStructure>& base() const { return base_; }
  const std::vector<Variable>& variables() const { return vars_; }
  int depth() const { return depth_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const TermNode& node(int id) const { return nodes_[id]; }
  const std::vector<int>& of_sort(SortId s) const { return by_sort_[s]; }

  int element(SortId s, int e) const { return element_[element_offset_[s] + e]; }
  int variable(int i) const { return variable_[i]; }

  std::optional<int> find(const Term& t) const {
    TermNode n;
    n.sort = t.sort;
    n.kind = t.kind;
    switch (t.kind) {
      case Term::Kind::parameter:
        if (!base_ || t.symbol < 0 || t.symbol >= base_->size(t.sort)) return std::nullopt;
        return element(t.sort, t.symbol);
      case Term::Kind::variable:
        for (std::size_t i = 0; i < vars_.size(); ++i)
          if (vars_[i].name == t.name && vars_[i].sort == t.sort) return variable_[i];
        return std::nullopt;
      case Term::Kind::constant:
        n.symbol = t.symbol;
        break;
      case Term::Kind::apply:
        n.symbol = t.symbol;
        for (const auto& a : t.args) {
          auto c = find(a);
          if (!c) return std::nullopt;
          n.children.push_back(*c);
        }
        break;
    }
    auto it = index_.find(key(n));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int require(const Term& t) const {
    auto id = find(t);
    if (!id) throw InputError("term '" + print_term(t) + "' lies outside the term universe (depth " +
                              std::to_string(depth_) + ")");
    return *id;
  }

  Term term(int id) const {
    const auto& n = nodes_[id];
    switch (n.kind) {
      case Term::Kind::parameter:
        return Term::parameter(base_->element_name(n.sort, n.symbol), n.sort, n.symbol);
      case Term::Kind::constant:
        return Term::constant(*sig_, n.symbol);
      case Term::Kind::variable:
        return Term::variable(vars_[n.symbol]);
      case Term::Kind::apply: {
        std::vector<Term> args;
        for (int c : n.children) args.push_back(term(c));
        return Term::apply(*sig_, n.symbol, std::move(args));
      }
    }
    return {};
  }

  std::string text(int id) const { return print_term(term(id)); }

  // Value of every node in M. `params` maps A into M (null: A = M, identity);
  // `point` assigns the variables.
  std::vector<int> evaluate(const FinStructure& m, const std::vector<std::vector<int>>* params,
                            const std::vector<int>& point) const {
    std::vector<int> val(nodes_.size());
    std::vector<int> args;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& n = nodes_[i];
      switch (n.kind) {
        case Term::Kind::parameter:
          val[i] = params ? (*params)[n.sort][n.symbol] : n.symbol;
          break;
        case Term::Kind::constant:
          val[i] = m.constant(n.symbol);
          break;
        case Term::Kind::variable:
          val[i] = point[n.symbol];
          break;
        case Term::Kind::apply:
          args.clear();
          for (int c : n.children) args.push_back(val[c]);
          val[i] = m.apply(n.symbol, args);
          break;
      }
    }
    return val;
  }

  int intern(const Term& t) {
    TermNode n;
    n.kind = t.kind;
    n.sort = t.sort;
    switch (t.kind) {
      case Term::Kind::parameter:
      case Term::Kind::variable: {
        auto id = find(t);
        if (!id) throw InputError("term '" + print_term(t) + "' uses a name outside this universe");
        return *id;
      }
      case Term::Kind::constant:
        n.symbol = t.symbol;
        break;
      case Term::Kind::apply:
        n.symbol = t.symbol;
        for (const auto& a : t.args) {
          n.children.push_back(intern(a));
          n.depth = std::max(n.depth, nodes_[n.children.back()].depth + 1);
        }
        break;
    }
    if (auto it = index_.find(key(n)); it != index_.end()) return it->second;
    return add(std::move(n));
  }

 private:
  using Key = std::tuple<int, int, int, std::vector<int>>;

  static Key key(const TermNode& n) {
    return {static_cast<int>(n.kind), n.symbol, n.kind == Term::Kind::parameter ? n.sort : 0, n.children};
  }

  int add(TermNode n) {
    if (nodes_.size() >= limit_)
      throw InputError("term universe exceeds " + std::to_string(limit_) + " terms; lower the depth bound");
    int id = static_cast<int>(nodes_.size());
    index_.emplace(key(n), id);
    by_sort_[n.sort].push_back(id);
    nodes_.push_back(std::move(n));
    return id;
  }

  void add_layer(int k) {
    const auto& L = *sig_;
    std::vector<std::vector<int>> below(L.sort_count());
    for (std::size_t i = 0; i < nodes_.size(); ++i) below[nodes_[i].sort].push_back(static_cast<int>(i));
    for (std::size_t f = 0; f < L.functions().size(); ++f) {
      const auto& fs = L.functions()[f];
      if (fs.args.empty()) continue;
      std::vector<int> sizes;
      for (SortId s : fs.args) sizes.push_back(static_cast<int>(below[s].size()));
      for (TupleCounter tc(sizes); !tc.done(); tc.next()) {
        TermNode n{Term::Kind::apply, static_cast<int>(f), fs.result, {}, 0};
        for (std::size_t j = 0; j < fs.args.size(); ++j) {
          int c = below[fs.args[j]][tc.digits()[j]];
          n.children.push_back(c);
          n.depth = std::max(n.depth, nodes_[c].depth + 1);
        }
        if (n.depth == k) add(std::move(n));
      }
    }
  }

  void add_diagram_terms() {
    const auto& L = *sig_;
    for (std::size_t f = 0; f < L.functions().size(); ++f) {
      const auto& fs = L.functions()[f];
      for (TupleCounter tc(base_->arg_sizes(fs.args)); !tc.done(); tc.next()) {
        if (fs.args.empty()) continue;
        TermNode n{Term::Kind::apply, static_cast<int>(f), fs.result, {}, 1};
        for (std::size_t j = 0; j < fs.args.size(); ++j) n.children.push_back(element(fs.args[j], tc.digits()[j]));
        if (!index_.count(key(n))) add(std::move(n));
      }
    }
  }

  std::shared_ptr<const Signature> sig_;
  std::shared_ptr<const FinStructure> base_;
  std::vector<Variable> vars_;
  int depth_;
  std::size_t limit_;
  std::vector<TermNode> nodes_;
  std::map<Key, int> index_;
  std::vector<std::vector<int>> by_sort_;
  std::vector<int> element_, element_offset_, variable_;
};

}  // namespace quasivar
