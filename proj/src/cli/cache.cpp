#include "weyl_lab/cli/cache.hpp"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include "weyl_lab/cli/config.hpp"

namespace weyl_lab::cli {

namespace fs = std::filesystem;

std::string CacheKey::filename() const {
  return "spectrum_n" + std::to_string(n) + "_K" + std::to_string(K) + "_G" + std::to_string(G) + "_" +
         hex64(spec_hash) + ".bin";
}

namespace {

constexpr char kMagic[8] = {'W', 'L', 'S', 'P', 'E', 'C', '0', '1'};

std::uint64_t fnv(const char* data, std::size_t len) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 1099511628211ULL;
  }
  return h;
}

class Writer {
public:
  template <class T>
  void put(const T& v) {
    buf_.append(reinterpret_cast<const char*>(&v), sizeof v);
  }
  void put_doubles(const double* p, std::size_t count) {
    buf_.append(reinterpret_cast<const char*>(p), count * sizeof(double));
  }
  std::string& str() { return buf_; }

private:
  std::string buf_;
};

class Reader {
public:
  Reader(const char* p, std::size_t len) : p_(p), end_(p + len) {}
  template <class T>
  T get() {
    T v;
    take(&v, sizeof v);
    return v;
  }
  void get_doubles(double* out, std::size_t count) { take(out, count * sizeof(double)); }
  bool done() const { return p_ == end_; }

private:
  void take(void* out, std::size_t len) {
    if (static_cast<std::size_t>(end_ - p_) < len) throw std::runtime_error("truncated cache entry");
    std::memcpy(out, p_, len);
    p_ += len;
  }
  const char* p_;
  const char* end_;
};

// RAII flock on <dir>/.lock.
class DirLock {
public:
  DirLock(const std::string& dir, bool exclusive) {
    fd_ = ::open((dir + "/.lock").c_str(), O_RDWR | O_CREAT, 0644);
    if (fd_ >= 0) ::flock(fd_, exclusive ? LOCK_EX : LOCK_SH);
  }
  ~DirLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

private:
  int fd_ = -1;
};

} // namespace

std::string serialize(const galerkin::SpectralData& S) {
  Writer w;
  w.put(static_cast<std::int32_t>(S.n));
  w.put(static_cast<std::int32_t>(S.K));
  w.put(static_cast<std::int32_t>(S.provenance.K));
  w.put(static_cast<std::int32_t>(S.provenance.G));
  w.put(S.provenance.spec_hash);
  w.put(S.shift);
  w.put(S.potential_sup);
  w.put(S.reliable_band);
  const auto D = static_cast<std::int64_t>(S.size());
  w.put(D);
  for (const auto& m : S.modes)
    for (int i = 0; i < S.n; ++i) w.put(static_cast<std::int32_t>(m.k(i)));
  w.put_doubles(S.eigenvalues_sq.data(), static_cast<std::size_t>(D));
  w.put_doubles(S.frequencies.data(), static_cast<std::size_t>(D));
  w.put_doubles(reinterpret_cast<const double*>(S.vectors.data()), static_cast<std::size_t>(2 * D * D));

  std::string out(kMagic, sizeof kMagic);
  out += w.str();
  const std::uint64_t sum = fnv(w.str().data(), w.str().size());
  out.append(reinterpret_cast<const char*>(&sum), sizeof sum);
  return out;
}

galerkin::SpectralData deserialize(const std::string& bytes) {
  if (bytes.size() < sizeof kMagic + sizeof(std::uint64_t) || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    throw std::runtime_error("not a spectrum cache entry");
  const char* payload = bytes.data() + sizeof kMagic;
  const std::size_t len = bytes.size() - sizeof kMagic - sizeof(std::uint64_t);
  std::uint64_t stored;
  std::memcpy(&stored, payload + len, sizeof stored);
  if (fnv(payload, len) != stored) throw std::runtime_error("checksum mismatch");

  Reader r(payload, len);
  galerkin::SpectralData S;
  S.n = r.get<std::int32_t>();
  S.K = r.get<std::int32_t>();
  S.provenance.K = r.get<std::int32_t>();
  S.provenance.G = r.get<std::int32_t>();
  S.provenance.spec_hash = r.get<std::uint64_t>();
  S.shift = r.get<double>();
  S.potential_sup = r.get<double>();
  S.reliable_band = r.get<double>();
  const auto D = r.get<std::int64_t>();
  if (S.n < 1 || S.n > lattice::kMaxModeDimension || D < 0 || D > 100'000)
    throw std::runtime_error("implausible cache header");
  S.modes.resize(static_cast<std::size_t>(D));
  for (auto& m : S.modes) {
    m.k.resize(S.n);
    for (int i = 0; i < S.n; ++i) m.k(i) = r.get<std::int32_t>();
    m.norm_sq = m.k.cast<long>().squaredNorm();
    m.eigenvalue_sq = lattice::free_eigenvalue_sq(m.norm_sq);
    m.frequency = lattice::free_frequency(m.norm_sq);
  }
  S.eigenvalues_sq.resize(D);
  S.frequencies.resize(D);
  S.vectors.resize(D, D);
  r.get_doubles(S.eigenvalues_sq.data(), static_cast<std::size_t>(D));
  r.get_doubles(S.frequencies.data(), static_cast<std::size_t>(D));
  r.get_doubles(reinterpret_cast<double*>(S.vectors.data()), static_cast<std::size_t>(2 * D * D));
  if (!r.done()) throw std::runtime_error("trailing bytes in cache entry");
  return S;
}

SpectrumCache::SpectrumCache(std::string directory) : dir_(std::move(directory)) {}

std::string SpectrumCache::default_directory(const std::string& out_dir) {
  if (const char* env = std::getenv("WEYL_LAB_CACHE"); env && *env) return env;
  return (fs::path(out_dir) / "cache").string();
}

std::optional<galerkin::SpectralData> SpectrumCache::lookup(const CacheKey& key, std::string* warning) const {
  const fs::path path = fs::path(dir_) / key.filename();
  if (!fs::exists(path)) return std::nullopt;
  DirLock lock(dir_, false);
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    galerkin::SpectralData S = deserialize(ss.str());
    if (S.n != key.n || S.provenance.K != key.K || S.provenance.G != key.G || S.provenance.spec_hash != key.spec_hash)
      throw std::runtime_error("key mismatch");
    return S;
  } catch (const std::exception& e) {
    if (warning) *warning = "ignoring corrupt cache entry " + path.string() + ": " + e.what();
    return std::nullopt;
  }
}

void SpectrumCache::store(const CacheKey& key, const galerkin::SpectralData& S) const {
  fs::create_directories(dir_);
  DirLock lock(dir_, true);
  const fs::path path = fs::path(dir_) / key.filename();
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write cache entry " + tmp.string());
    const std::string bytes = serialize(S);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  fs::rename(tmp, path);
}

} // namespace weyl_lab::cli
