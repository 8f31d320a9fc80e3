#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "xprod/ckalg.hpp"
#include "xprod/dynsys_ext.hpp"

namespace xprod::cli {

/// FNV-1a of the text, 16 hex digits.
std::string cache_key(const std::string& text);

/// --cache-dir if given, else $XPROD_CACHE_DIR, else none.
std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::filesystem::path>& flag);

/// Exclusive `<target>.lock`, released on destruction.
class CacheLock {
 public:
  explicit CacheLock(const std::filesystem::path& target);
  ~CacheLock();
  CacheLock(const CacheLock&) = delete;
  CacheLock& operator=(const CacheLock&) = delete;

 private:
  std::filesystem::path lock_;
};

/// Writes through a temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::optional<std::string> read_file(const std::filesystem::path& path);

struct OrbitCache {
  std::string system;
  int depth = 0;
  std::vector<std::size_t> terminated;  // per depth 0..depth
  std::vector<std::size_t> cylinders;
  std::vector<dynsys::OrbitPoint> points;  // enumeration at full depth
  bool operator==(const OrbitCache&) const = default;
};

OrbitCache build_orbit_cache(const dynsys::ReversibleExtension& ext, const std::string& system, int depth);
std::string serialize(const OrbitCache& c);
OrbitCache parse_orbit_cache(const std::string& text);

struct AFCache {
  std::string system;
  int levels = 0;
  std::vector<std::vector<long>> dims;                    // per level, per block
  std::vector<std::vector<std::vector<std::string>>> words;  // per level, per block
  std::vector<std::vector<std::vector<double>>> delta_one;   // per level >= 1, per block, row-major
  bool operator==(const AFCache&) const = default;
};

AFCache build_af_cache(const ck::AFStructure& af, const std::string& system);
std::string serialize(const AFCache& c);
AFCache parse_af_cache(const std::string& text);

}  // namespace xprod::cli
