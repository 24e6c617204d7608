#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "weyl_lab/galerkin.hpp"

namespace weyl_lab::cli {

struct CacheKey {
  int n = 0;
  int K = 0;
  int G = 0;
  std::uint64_t spec_hash = 0;

  std::string filename() const;
};

std::string serialize(const galerkin::SpectralData& S);
/// Throws std::runtime_error on a malformed or checksum-failing buffer.
galerkin::SpectralData deserialize(const std::string& bytes);

/// Binary spectrum cache in one directory, guarded by an advisory lock file.
class SpectrumCache {
public:
  explicit SpectrumCache(std::string directory);

  /// $WEYL_LAB_CACHE if set, else <out_dir>/cache.
  static std::string default_directory(const std::string& out_dir);

  const std::string& directory() const { return dir_; }
  /// Miss on absent or corrupt entries; a corrupt entry sets `warning`.
  std::optional<galerkin::SpectralData> lookup(const CacheKey& key, std::string* warning = nullptr) const;
  void store(const CacheKey& key, const galerkin::SpectralData& S) const;

private:
  std::string dir_;
};

} // namespace weyl_lab::cli
