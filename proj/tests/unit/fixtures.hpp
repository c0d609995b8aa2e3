#pragma once

#include <filesystem>
#include <string>

#include <unistd.h>

namespace fixtures {

inline std::filesystem::path source_dir() { return RVS_SOURCE_DIR; }
inline std::filesystem::path data(const std::string& rel) { return source_dir() / "data" / rel; }

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("rvs_test_" + std::to_string(::getpid()) + "_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace fixtures
