#pragma once

#include <cstdint>
#include <random>

namespace mfbg {

// Uniform generator with a fixed cross-platform sequence. Doubles are mapped
// from the raw 64-bit output directly (std::uniform_real_distribution is
// implementation-defined and would break golden values).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // [0, 1)
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Seed for a named substream of a root seed. Agents use their own index, so
// adding or removing agents never perturbs another agent's draws. Auxiliary
// consumers use the reserved ids below, far away from any agent index.
inline std::uint64_t substream_seed(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t x = root + 0x9E3779B97F4A7C15ull * (stream + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t kArmThetaStream = 0xFFFFFFFF00000001ull;
inline constexpr std::uint64_t kSolverStartStream = 0xFFFFFFFF00000002ull;
inline constexpr std::uint64_t kVarianceStream = 0xFFFFFFFF00000003ull;
inline constexpr std::uint64_t kProfilePairStream = 0xFFFFFFFF00000004ull;
inline constexpr std::uint64_t kMonteCarloStream = 0xFFFFFFFF00000005ull;

}  // namespace mfbg
