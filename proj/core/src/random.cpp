// Apache License, Version 2.0, refer to LICENSE.txt
#include "puchain/random.hpp"

#include <stdexcept>

namespace puchain {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  std::uint64_t x = mix64(seed);
  x = mix64(x ^ (stream * 0xd1342543de82ef95ull + 1));
  x = mix64(x ^ (counter * 0xaf251af3b0f025b5ull + 3));
  return x;
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return static_cast<double>(counter_bits(seed, stream, counter) >> 11) * 0x1.0p-53;
}

std::size_t inverse_cdf(std::span<const double> pmf, double u) {
  if (pmf.empty()) throw std::invalid_argument("inverse_cdf on an empty pmf");
  double cumulative = 0.0;
  std::size_t last_positive = pmf.size();
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    if (pmf[i] <= 0.0) continue;
    last_positive = i;
    cumulative += pmf[i];
    if (u < cumulative) return i;
  }
  if (last_positive == pmf.size()) throw std::invalid_argument("inverse_cdf on a pmf with no mass");
  // Rounding left the cumulative sum just under u.
  return last_positive;
}

}  // namespace puchain
