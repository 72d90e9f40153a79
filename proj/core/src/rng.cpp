#include "mazebench/rng.hpp"

namespace mazebench {

std::uint64_t Rng::next_u64() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::next_below(std::uint64_t bound) {
  const std::uint64_t threshold = -bound % bound;
  for (;;) {
    std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

int Rng::next_int(int lo, int hi) {
  return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

bool Rng::next_bool(double p_true) { return next_double() < p_true; }

Rng Rng::fork(std::uint64_t salt) const {
  Rng child(state_ ^ (salt * 0xd6e8feb86659fd93ULL + 0xa5a5a5a5a5a5a5a5ULL));
  child.next_u64();
  return child;
}

}  // namespace mazebench
