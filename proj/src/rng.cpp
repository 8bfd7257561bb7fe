#include "iva/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace iva {

std::uint64_t RandomStream::mix(std::uint64_t z) {
  // splitmix64 finalizer; spreads small/correlated seeds before mt19937_64.
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t RandomStream::uniform_int(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_int bound must be >= 1");
  // rejection sampling over the largest multiple of bound
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % bound;
}

double RandomStream::exponential(double rate) {
  if (!(rate > 0)) throw std::invalid_argument("exponential rate must be positive");
  return -std::log1p(-uniform01()) / rate;
}

}  // namespace iva
