#pragma once

#include <string>

#include "quasivar/io.hpp"

namespace fixtures {

inline std::string data(const std::string& name) { return std::string(QUASIVAR_DATA_DIR) + "/" + name; }

inline quasivar::Loader& loader() {
  static quasivar::Loader l;
  return l;
}

inline quasivar::FinStructure load(const std::string& name) { return *loader().structure(data(name)); }

inline std::shared_ptr<const quasivar::Signature> sig(const std::string& name) {
  return loader().signature(data(name));
}

}  // namespace fixtures
