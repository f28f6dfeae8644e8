// ---------------------------------------------------------------------------
// common.hpp
//
// Shared plumbing for the ibcurve core: a dense row-major matrix, the
// resource-guard error type, and a small deterministic PRNG.  The PRNG is
// hand-rolled (splitmix64 seeding a xoshiro256** stream) so that results are
// bit-identical across platforms and standard libraries; std::uniform_*
// distributions carry no such guarantee.
// ---------------------------------------------------------------------------
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ibcurve {

// Numeric conventions used throughout the library.  Entries smaller than
// kZeroTol are treated as exact zeros before any logarithm; distributions
// must sum to their target mass within kMassTol.
inline constexpr double kZeroTol = 1e-15;
inline constexpr double kMassTol = 1e-12;

// Thrown when an enumeration guard would be exceeded (partition counts,
// brute-force grids).  Distinct from std::invalid_argument so callers can
// map it to its own error code.
class ResourceLimitError : public std::runtime_error {
 public:
  explicit ResourceLimitError(const std::string& what)
      : std::runtime_error(what) {}
};

// Thrown on malformed input files; carries a human-readable location.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a file cannot be opened, read, or written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Dense row-major matrix of doubles.  Deliberately minimal: the solvers and
// oracles only ever need element access and contiguous rows.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0)
      : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, fill) {
    if (r < 0 || c < 0) throw std::invalid_argument("Mat: negative dimension");
  }

  double& operator()(int r, int c) {
    return a[static_cast<std::size_t>(r) * cols + c];
  }
  double operator()(int r, int c) const {
    return a[static_cast<std::size_t>(r) * cols + c];
  }
  std::span<double> row(int r) {
    return {a.data() + static_cast<std::size_t>(r) * cols,
            static_cast<std::size_t>(cols)};
  }
  std::span<const double> row(int r) const {
    return {a.data() + static_cast<std::size_t>(r) * cols,
            static_cast<std::size_t>(cols)};
  }
  bool same_shape(const Mat& o) const {
    return rows == o.rows && cols == o.cols;
  }
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a child seed from a master seed and a stream index.  Used to give
// every scan point and every restart its own independent stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  return splitmix64(s);
}

// xoshiro256** with splitmix64 seeding.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
  }

  std::uint64_t next_u64() {
    auto rotl = [](std::uint64_t x, int k) {
      return (x << k) | (x >> (64 - k));
    };
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform double in (0, 1]; safe as an argument to log.
  double next_positive() { return 1.0 - next_double(); }

  // Uniform integer in [0, n).  Rejection-free modulo is fine at the scales
  // used here (n is always tiny compared to 2^64).
  int next_int(int n) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  // Fills `out` with a point drawn uniformly from the probability simplex
  // (normalized unit exponentials).
  void fill_simplex(std::span<double> out) {
    double total = 0.0;
    for (auto& v : out) {
      v = -std::log(next_positive());
      total += v;
    }
    for (auto& v : out) v /= total;
  }

 private:
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace ibcurve
