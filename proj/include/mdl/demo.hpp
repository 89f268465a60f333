#ifndef MDL_DEMO_HPP
#define MDL_DEMO_HPP

// The three-sequence compression demonstration: a periodic sequence, fair
// coin flips and a biased coin, each coded with the best two-part Markov
// code found over orders and grid types.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdl/io.hpp"
#include "mdl/universal.hpp"

namespace mdl::demo {

struct SequenceResult {
  std::string name;
  std::string generator;
  UniversalCodeReport best;
  unsigned order = 0;
  double rate = 0.0;  // bits per symbol
};

struct DemoResult {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<SequenceResult> sequences;

  /// Periodic sequence: at most the order/start overhead plus 8 log2(n+1).
  double periodic_bound = 0.0;
  bool periodic_ok = false;
  /// Fair coin: not compressed by more than 20 bits.
  bool random_ok = false;
  /// Biased coin: rate within 5% of log2 5 - 8/5.
  double biased_target_rate = 0.0;
  bool biased_ok = false;
};

/// Shortest two-part codelength over orders 0..max_order and both grids.
inline SequenceResult best_twopart(const BinarySequence& x, unsigned max_order) {
  SequenceResult out;
  out.best.total = Bits::infinity();
  for (unsigned k = 0; k <= max_order && k < x.size(); ++k) {
    for (auto grid : {GridSpec::crude(), GridSpec::refined()}) {
      auto r = twopart_codelength(x, k, grid);
      if (r.total < out.best.total) {
        out.best = std::move(r);
        out.order = k;
      }
    }
  }
  out.rate = out.best.total.value() / static_cast<double>(x.size());
  return out;
}

inline DemoResult demo_sequences(std::size_t n, std::uint64_t seed, unsigned max_order = 5) {
  if (n < 100 || n % 4 != 0) {
    throw std::domain_error("demo_sequences: n must be a multiple of 4 and at least 100");
  }
  DemoResult d;
  d.n = n;
  d.seed = seed;
  const Rng root(seed);
  const struct {
    const char* name;
    const char* spec;
    std::uint64_t stream;
  } specs[] = {{"periodic", "repeat:0001", 1}, {"fair-coin", "bernoulli:0.5", 2},
               {"biased-coin", "bernoulli:0.2", 3}};
  for (const auto& s : specs) {
    const auto x = io::generate_sequence(s.spec, n, root.split(s.stream)());
    SequenceResult r = best_twopart(x, max_order);
    r.name = s.name;
    r.generator = s.spec;
    d.sequences.push_back(std::move(r));
  }
  // Order-3 index plus three start bits, then 8 counts at log2(n+1) each.
  const double overhead = integer_codelength(4).value() + 3.0;
  d.periodic_bound = overhead + 8.0 * std::log2(static_cast<double>(n) + 1.0);
  d.periodic_ok = d.sequences[0].best.total.value() <= d.periodic_bound;
  d.random_ok = d.sequences[1].best.total.value() >= static_cast<double>(n) - 20.0;
  d.biased_target_rate = std::log2(5.0) - 8.0 / 5.0;
  d.biased_ok = std::abs(d.sequences[2].rate - d.biased_target_rate) <= 0.05 * d.biased_target_rate;
  return d;
}

}  // namespace mdl::demo

#endif  // MDL_DEMO_HPP
