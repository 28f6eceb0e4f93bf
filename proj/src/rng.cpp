#include "dmrecon/rng.hpp"

#include <cmath>
#include <numbers>

namespace dmrecon {

double CounterRng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = CounterRng::mix(root);
  for (std::uint64_t c : coords) {
    h = CounterRng::mix(h ^ CounterRng::mix(c + 0x632be59bd9b4e019ULL));
  }
  return h;
}

} // namespace dmrecon
