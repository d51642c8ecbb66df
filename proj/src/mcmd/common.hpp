// Shared primitives: error type, deterministic RNG, content hashing.
#pragma once

#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcmd {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// FNV-1a content hashing. Used for params/checkpoint/config/dataset identity.
// ---------------------------------------------------------------------------

inline std::uint64_t fnv1a_bytes(const void* data, std::size_t n,
                                 std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a_str(const std::string& s,
                               std::uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a_bytes(s.data(), s.size(), h);
}

inline std::uint64_t fnv1a_doubles(const std::vector<double>& v,
                                   std::uint64_t h = 0xcbf29ce484222325ull) {
  return v.empty() ? h : fnv1a_bytes(v.data(), v.size() * sizeof(double), h);
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

// ---------------------------------------------------------------------------
// Deterministic RNG. mt19937_64 engine with hand-rolled distributions so the
// generated streams do not depend on the standard library implementation.
// ---------------------------------------------------------------------------

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1) : eng_(seed) {}

  std::uint64_t u64() { return eng_(); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // standard normal via Box-Muller (cached second draw)
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // integer in [0, n)
  int randint(int n) {
    if (n <= 0) throw Error("Rng::randint: n must be positive");
    int v = static_cast<int>(uniform() * n);
    return v >= n ? n - 1 : v;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(randint(static_cast<int>(i)));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Derive an independent stream seed from a root seed and a path of tags.
  static std::uint64_t derive(std::uint64_t seed,
                              std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = fnv1a_bytes(&seed, sizeof(seed));
    for (std::uint64_t p : path) h = fnv1a_bytes(&p, sizeof(p), h);
    return h ? h : 1;  // mt19937_64 treats 0 fine, but keep seeds nonzero
  }

  static std::uint64_t derive_str(std::uint64_t seed, const std::string& tag) {
    std::uint64_t h = fnv1a_bytes(&seed, sizeof(seed));
    return fnv1a_str(tag, h);
  }

  // Engine state round-trips through text (standard-specified format).
  std::string serialize() const {
    std::ostringstream os;
    os << eng_ << ' ' << (has_spare_ ? 1 : 0) << ' ';
    os.precision(17);
    os << spare_;
    return os.str();
  }

  void deserialize(const std::string& s) {
    std::istringstream is(s);
    int hs = 0;
    is >> eng_ >> hs >> spare_;
    if (!is) throw Error("Rng::deserialize: malformed state string");
    has_spare_ = hs != 0;
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mcmd
