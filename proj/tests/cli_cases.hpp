#pragma once

// In-process CLI runs and one working invocation per subcommand, shared by
// the CLI tests and the acceptance determinism check.

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "quasivar/cli.hpp"

namespace cli_cases {

using quasivar::cli::json;

struct Outcome {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

inline Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "quasivar");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = quasivar::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

inline std::string d(const std::string& name) { return fixtures::data(name); }

inline std::string klass(std::initializer_list<const char*> names) {
  std::string out;
  for (const char* n : names) out += (out.empty() ? "" : ",") + d(n);
  return out;
}

inline std::string tmp_dir(const std::string& leaf) {
  auto p = std::filesystem::temp_directory_path() / ("quasivar_cli_" + leaf);
  std::filesystem::remove_all(p);
  return p.string();
}

// One working invocation per subcommand.
inline std::vector<std::vector<std::string>> invocations() {
  return {
      {"parse", "--sig", d("ring.sig")},
      {"classify", "--theory", d("fields.thy")},
      {"eval", "--structure", d("chain2.struct"), "--sentence", "forall x:s. leq(x, x)"},
      {"homs", "--from", d("chain2.struct"), "--to", d("chain3.struct")},
      {"product", "--structures", klass({"z2.struct", "z3.struct"})},
      {"quotient", "--atype", d("two_zero.atype")},
      {"close", "--atype", d("two_zero.atype")},
      {"radical", "--atype", d("sq_zero.atype"), "--class", klass({"z2.struct"}), "--depth", "1"},
      {"is-prime", "--atype", d("two_zero.atype"), "--class", klass({"z2.struct"})},
      {"is-radical", "--atype", d("empty.atype"), "--class", klass({"z2.struct", "z3.struct"})},
      {"represent", "--structure", d("z4.struct"), "--class", klass({"z2.struct", "z3.struct"})},
      {"present", "--sig", d("semilattice.sig"), "--vars", "x:s, y:s", "--class", klass({"sl2.struct"}), "--depth", "2"},
      {"points", "--atype", d("sq_zero.atype")},
      {"nullstellensatz", "--atype", d("sq_zero.atype"), "--class", klass({"z2.struct", "z4.struct"}), "--depth", "1"},
      {"gc-check", "--from", d("chain2.struct"), "--to", d("chain1.struct"), "--premise-bound", "1", "--depth", "1", "--max-vars", "1"},
      {"immersion-check", "--from", d("chain2.struct"), "--to", d("chain3.struct"), "--premise-bound", "none", "--depth", "1", "--max-vars", "1"},
      {"gcim-check", "--from", d("z4.struct"), "--to", d("z2.struct"), "--premise-bound", "1", "--depth", "1", "--max-vars", "1"},
      {"witness-terms", "--morphism", d("double.morph"), "--class", klass({"z4.struct"}), "--depth", "2"},
      {"coordinate-algebra", "--atype", d("sq_zero.atype"), "--depth", "2"},
      {"duality-check", "--structure", d("z2.struct"), "--class", klass({"z2.struct"}), "--depth", "2", "--samples", "3"},
      {"morleyize", "--sig", d("poset.sig"), "--out-dir", tmp_dir("inv")},
      {"strict", "--theory", d("fields.thy")},
      {"star-transfer", "--structure", d("chain4.struct"), "--class", klass({"chain3.struct"})},
      {"star-bijection", "--atype", d("above_bottom.atype"), "--class", klass({"chain2.struct", "chain3.struct"}), "--depth", "1"},
      {"gba-validate", "--structure", d("s3.struct")},
      {"gba-ideals", "--structure", d("z4.struct")},
      {"gba-radical", "--structure", d("z4.struct"), "--ideal", "0", "--class", klass({"z2.struct", "z3.struct"})},
      {"gba-nullstellensatz", "--structure", d("z2.struct"), "--vars", "x:r", "--gens", "add(x, x)", "--class", klass({"z2.struct"}), "--depth", "2"},
  };
}

}  // namespace cli_cases
