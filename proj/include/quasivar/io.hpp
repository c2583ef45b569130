#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "parse.hpp"
#include "structure.hpp"

namespace quasivar {

namespace fs = std::filesystem;

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Loads files and shares one Signature object per signature path.
class Loader {
 public:
  std::shared_ptr<const Signature> signature(const fs::path& path) {
    auto key = fs::weakly_canonical(path).string();
    if (auto it = sigs_.find(key); it != sigs_.end()) return it->second;
    auto sig = std::make_shared<const Signature>(with_file(path, [&] { return parse_signature(read_file(path)); }));
    sigs_[key] = sig;
    return sig;
  }

  // `structure NAME over SIGFILE`; the signature path is relative to the file.
  std::shared_ptr<const FinStructure> structure(const fs::path& path) {
    auto key = fs::weakly_canonical(path).string();
    if (auto it = structs_.find(key); it != structs_.end()) return it->second;
    std::string text = read_file(path);
    auto header = with_file(path, [&] { return read_structure_header(text); });
    if (!header || header->signature_path.empty())
      throw InputError(path.string() + ": missing 'structure NAME over SIGFILE' header");
    auto sig = signature(path.parent_path() / header->signature_path);
    auto a = std::make_shared<const FinStructure>(with_file(path, [&] { return parse_structure(text, sig); }));
    structs_[key] = a;
    return a;
  }

  std::vector<FinStructure> structures(const std::vector<std::string>& paths) {
    std::vector<FinStructure> out;
    for (const auto& p : paths) out.push_back(*structure(p));
    for (const auto& m : out)
      if (!(m.signature() == out[0].signature()))
        throw InputError("class members '" + out[0].name() + "' and '" + m.name() + "' have different signatures");
    return out;
  }

  // `theory NAME over SIGFILE`, then one sentence per line. A signature given
  // by the caller takes precedence over the header.
  Theory theory(const fs::path& path, std::shared_ptr<const Signature> sig = nullptr) {
    std::string text = read_file(path);
    if (!sig) {
      for (const auto& [line, content] : logical_lines(text)) {
        auto pos = content.find(" over ");
        if (content.rfind("theory", 0) == 0 && pos != std::string::npos) {
          std::string rest = content.substr(pos + 6);
          rest.erase(0, rest.find_first_not_of(" \t"));
          rest.erase(rest.find_last_not_of(" \t") + 1);
          sig = signature(path.parent_path() / rest);
        }
        break;
      }
    }
    if (!sig) throw InputError(path.string() + ": theory needs a signature ('theory NAME over SIGFILE' or --sig)");
    return with_file(path, [&] { return parse_theory(text, sig); });
  }

  template <class F>
  static auto with_file(const fs::path& path, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const InputError& e) {
      throw InputError(path.string() + ": " + e.what());
    }
  }

 private:
  std::map<std::string, std::shared_ptr<const Signature>> sigs_;
  std::map<std::string, std::shared_ptr<const FinStructure>> structs_;
};

// An a-type file: `atype over STRUCTFILE [vars x:s, y:s]`, then one atom per line.
struct ATypeFile {
  std::shared_ptr<const FinStructure> base;
  std::vector<Variable> variables;
  std::vector<Atom> atoms;
};

inline ATypeFile parse_atype_file(const fs::path& path, Loader& loader) {
  std::string text = read_file(path);
  ATypeFile out;
  bool header = false;
  Loader::with_file(path, [&] {
    for (const auto& [line, content] : logical_lines(text)) {
      if (!header) {
        if (content.rfind("atype", 0) != 0) throw InputError("expected 'atype over STRUCTFILE'", line, 1);
        auto over = content.find(" over ");
        if (over == std::string::npos) throw InputError("expected 'over STRUCTFILE'", line, 1);
        std::string rest = content.substr(over + 6);
        std::string vars;
        if (auto v = rest.find(" vars "); v != std::string::npos) {
          vars = rest.substr(v + 6);
          rest = rest.substr(0, v);
        }
        rest.erase(0, rest.find_first_not_of(" \t"));
        rest.erase(rest.find_last_not_of(" \t") + 1);
        out.base = loader.structure(path.parent_path() / rest);
        if (vars.find_first_not_of(" \t") != std::string::npos)
          out.variables = parse_variables(vars, out.base->signature(), line);
        header = true;
        continue;
      }
      NameScope scope = scope_of(*out.base, out.variables);
      out.atoms.push_back(parse_atom(content, scope, line));
    }
    if (!header) throw InputError("empty a-type file");
    return 0;
  });
  return out;
}

inline std::string print_atype_file(const std::string& structure_path, const Signature& sig,
                                    const std::vector<Variable>& vars, const std::vector<Atom>& atoms) {
  std::string out = "atype over " + structure_path;
  if (!vars.empty()) out += " vars " + print_variables(sig, vars);
  out += "\n";
  for (const auto& a : atoms) out += print_atom(a) + "\n";
  return out;
}

}  // namespace quasivar
