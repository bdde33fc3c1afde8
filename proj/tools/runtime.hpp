#pragma once

#include "alsigns/classnum.hpp"

#include <cstdlib>
#include <filesystem>
#include <string>
#include <system_error>

namespace alsigns::tools {

constexpr const char *kCacheEnv = "ALSIGNS_HURWITZ_CACHE";

// The env var wins, then $XDG_CACHE_HOME or ~/.cache, then the temp dir.
// "none" disables the cache.
inline std::string default_cache_path(i64 bound) {
  if (const char *env = std::getenv(kCacheEnv)) return env;
  std::filesystem::path dir;
  if (const char *xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg)
    dir = xdg;
  else if (const char *home = std::getenv("HOME"); home && *home)
    dir = std::filesystem::path(home) / ".cache";
  else
    dir = std::filesystem::temp_directory_path();
  return (dir / "alsigns" / ("hurwitz-" + std::to_string(bound) + ".bin")).string();
}

inline void install_table(i64 bound, std::string cache_path, int workers) {
  if (cache_path == "none") cache_path.clear();
  if (!cache_path.empty()) {
    std::error_code ec;
    auto parent = std::filesystem::path(cache_path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  }
  ensure_hurwitz_table(bound, cache_path, workers);
}

} // namespace alsigns::tools
