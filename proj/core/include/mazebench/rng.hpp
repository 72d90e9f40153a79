#pragma once

#include <cstdint>
#include <vector>

namespace mazebench {

// Deterministic 64-bit generator (splitmix64). std::mt19937 plus the standard
// distributions are not guaranteed bit-stable across implementations, and
// scene manifests must be byte-identical for a given seed on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // Uniform in [0, bound), bound > 0. Rejection-sampled, unbiased.
  std::uint64_t next_below(std::uint64_t bound);

  // Uniform integer in [lo, hi] inclusive.
  int next_int(int lo, int hi);

  // Uniform double in [0, 1).
  double next_double();

  bool next_bool(double p_true);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Derive an independent stream, e.g. per dataset index.
  Rng fork(std::uint64_t salt) const;

private:
  std::uint64_t state_;
};

}  // namespace mazebench
