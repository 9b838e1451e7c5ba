#pragma once

#include <filesystem>
#include <string>

#include "sysopt/io.hpp"

namespace testing_support {

inline std::filesystem::path data_dir() { return SYSOPT_DATA_DIR; }

/// Loads data/<name>/ with its own demand.csv and params.txt.
inline sysopt::Instance load_fixture(const std::string& name) {
  auto dir = data_dir() / name;
  return sysopt::load_instance(dir, dir / "demand.csv", dir / "params.txt");
}

}  // namespace testing_support
