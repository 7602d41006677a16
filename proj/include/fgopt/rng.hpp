#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "fgopt/types.hpp"

namespace fgopt {

/// Counter-based deterministic RNG.
///
/// Every random draw in the library is derived from a 64-bit root seed plus a
/// stream label and index, so a run is replayable bit-for-bit and sub-streams
/// (per iteration, per oracle call) are independent of execution order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix(seed ^ 0x9e3779b97f4a7c15ULL)) {
    if (state_ == 0) state_ = 0x106689d45497fdb5ULL;
  }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    return h;
  }

  /// Derive the seed of a named sub-stream: hash(root, label, index).
  static std::uint64_t derive(std::uint64_t root, std::string_view label, std::uint64_t index = 0) {
    std::uint64_t h = root;
    h = splitmix(h ^ fnv1a(label));
    h = splitmix(h ^ index);
    return h;
  }

  std::uint64_t next_u64() {
    // xorshift64*
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545f4914f6cdd1dULL;
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (explicit, platform-independent).
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  int next_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  Vec gaussian_vector(int dim) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = next_gaussian();
    return v;
  }

  /// Uniform draw from the unit sphere in R^dim.
  Vec sphere_vector(int dim) {
    Vec v = gaussian_vector(dim);
    double n = v.norm();
    while (n < 1e-300) {
      v = gaussian_vector(dim);
      n = v.norm();
    }
    return v / n;
  }

  Mat gaussian_matrix(int rows, int cols) {
    Mat m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = next_gaussian();
    return m;
  }

 private:
  static std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fgopt
