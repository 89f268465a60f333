#ifndef MDL_RNG_HPP
#define MDL_RNG_HPP

#include <cstdint>
#include <limits>

namespace mdl {

/// SplitMix64: 64-bit state, one add and a mixing function per draw.
/// Streams for workers or trials come from split(), which derives an
/// independent state from (seed, stream id), so any simulation is
/// reproducible from its seed alone.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    return mix(z);
  }

  /// Uniform on [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Independent stream `id` of this generator's seed family.
  Rng split(std::uint64_t id) const { return Rng(mix(state_ ^ mix(id + 0x632be59bd9b4e019ULL))); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace mdl

#endif  // MDL_RNG_HPP
