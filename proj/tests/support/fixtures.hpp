#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace exemplar::testing {

inline std::filesystem::path fixture(const std::string& relative) {
  return std::filesystem::path(EXEMPLAR_FIXTURES) / relative;
}

inline std::filesystem::path source_path(const std::string& relative) {
  return std::filesystem::path(EXEMPLAR_SOURCE_ROOT) / relative;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("sparql-exemplar-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace exemplar::testing
