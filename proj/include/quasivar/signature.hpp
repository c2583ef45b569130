#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace quasivar {

using SortId = int;

struct FunctionSymbol {
  std::string name;
  std::vector<SortId> args;
  SortId result = 0;
  bool operator==(const FunctionSymbol&) const = default;
};

struct RelationSymbol {
  std::string name;
  std::vector<SortId> args;
  bool operator==(const RelationSymbol&) const = default;
};

struct ConstantSymbol {
  std::string name;
  SortId sort = 0;
  bool operator==(const ConstantSymbol&) const = default;
};

enum class SymbolKind { sort, function, relation, constant };

// A many-sorted first-order language. Symbol names are unique across kinds.
class Signature {
 public:
  SortId add_sort(const std::string& name) {
    claim(name, SymbolKind::sort, static_cast<int>(sorts_.size()));
    sorts_.push_back(name);
    return static_cast<SortId>(sorts_.size() - 1);
  }

  int add_function(const std::string& name, std::vector<SortId> args,
                   SortId result) {
    for (SortId s : args) check_sort(s);
    check_sort(result);
    claim(name, SymbolKind::function, static_cast<int>(functions_.size()));
    functions_.push_back({name, std::move(args), result});
    return static_cast<int>(functions_.size() - 1);
  }

  int add_relation(const std::string& name, std::vector<SortId> args) {
    for (SortId s : args) check_sort(s);
    claim(name, SymbolKind::relation, static_cast<int>(relations_.size()));
    relations_.push_back({name, std::move(args)});
    return static_cast<int>(relations_.size() - 1);
  }

  int add_constant(const std::string& name, SortId sort) {
    check_sort(sort);
    claim(name, SymbolKind::constant, static_cast<int>(constants_.size()));
    constants_.push_back({name, sort});
    return static_cast<int>(constants_.size() - 1);
  }

  const std::vector<std::string>& sorts() const { return sorts_; }
  const std::vector<FunctionSymbol>& functions() const { return functions_; }
  const std::vector<RelationSymbol>& relations() const { return relations_; }
  const std::vector<ConstantSymbol>& constants() const { return constants_; }

  int sort_count() const { return static_cast<int>(sorts_.size()); }

  std::optional<std::pair<SymbolKind, int>> lookup(const std::string& name) const {
    auto it = symbols_.find(name);
    if (it == symbols_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<SortId> find_sort(const std::string& name) const { return find(name, SymbolKind::sort); }
  std::optional<int> find_function(const std::string& name) const { return find(name, SymbolKind::function); }
  std::optional<int> find_relation(const std::string& name) const { return find(name, SymbolKind::relation); }
  std::optional<int> find_constant(const std::string& name) const { return find(name, SymbolKind::constant); }

  bool has_symbol(const std::string& name) const { return symbols_.count(name) != 0; }

  bool operator==(const Signature& other) const {
    return sorts_ == other.sorts_ && functions_ == other.functions_ &&
           relations_ == other.relations_ && constants_ == other.constants_;
  }

 private:
  std::optional<int> find(const std::string& name, SymbolKind kind) const {
    auto it = symbols_.find(name);
    if (it == symbols_.end() || it->second.first != kind) return std::nullopt;
    return it->second.second;
  }

  void claim(const std::string& name, SymbolKind kind, int index) {
    if (name.empty()) throw InputError("empty symbol name");
    if (!symbols_.emplace(name, std::make_pair(kind, index)).second)
      throw InputError("duplicate symbol '" + name + "'");
  }

  void check_sort(SortId s) const {
    if (s < 0 || s >= static_cast<SortId>(sorts_.size()))
      throw InputError("unknown sort id " + std::to_string(s));
  }

  std::vector<std::string> sorts_;
  std::vector<FunctionSymbol> functions_;
  std::vector<RelationSymbol> relations_;
  std::vector<ConstantSymbol> constants_;
  std::map<std::string, std::pair<SymbolKind, int>> symbols_;
};

}  // namespace quasivar
