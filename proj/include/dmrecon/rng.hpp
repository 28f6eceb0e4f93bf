#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace dmrecon {

/// Counter-based generator: the i-th draw is a SplitMix64 finalizer applied to
/// key + i * golden. Streams are split by deriving a fresh key, so results do
/// not depend on the order in which streams are consumed.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return mix(key_ + (counter_++) * kGolden); }

  /// Uniform in [0, 1) with 53 bits of mantissa.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (one value per call, second discarded).
  double normal();

  CounterRng split(std::uint64_t stream) const { return CounterRng(mix(key_ ^ mix(stream + kGolden))); }

  std::uint64_t key() const { return key_; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// FNV-1a, used to fold string coordinates (scenario ids) into seeds.
std::uint64_t hash_string(std::string_view s);

/// Deterministic seed from a root seed and a list of coordinates.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> coords);

} // namespace dmrecon
