#ifndef MDL_MODELS_HPP
#define MDL_MODELS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mdl/codelen.hpp"
#include "mdl/detail/quadrature.hpp"

namespace mdl {

/// Ordered 0/1 observations, n >= 1.
class BinarySequence {
 public:
  explicit BinarySequence(std::vector<std::uint8_t> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw std::invalid_argument("BinarySequence: empty sequence");
    for (auto s : symbols_) {
      if (s > 1) throw std::invalid_argument("BinarySequence: symbol outside {0,1}");
    }
  }

  /// From a string of '0'/'1' characters.
  static BinarySequence from_string(std::string_view bits) {
    std::vector<std::uint8_t> v;
    v.reserve(bits.size());
    for (char c : bits) {
      if (c != '0' && c != '1') {
        throw std::invalid_argument("BinarySequence: character outside {0,1}");
      }
      v.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return BinarySequence(std::move(v));
  }

  /// The n-bit sequence spelled by `code`, most significant bit first.
  static BinarySequence from_index(std::uint64_t code, std::size_t n) {
    std::vector<std::uint8_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = (code >> (n - 1 - i)) & 1u;
    return BinarySequence(std::move(v));
  }

  std::size_t size() const { return symbols_.size(); }
  std::uint8_t operator[](std::size_t i) const { return symbols_[i]; }
  std::span<const std::uint8_t> symbols() const { return symbols_; }

  std::string to_string() const {
    std::string s;
    s.reserve(symbols_.size());
    for (auto b : symbols_) s.push_back(static_cast<char>('0' + b));
    return s;
  }

  friend bool operator==(const BinarySequence&, const BinarySequence&) = default;

 private:
  std::vector<std::uint8_t> symbols_;
};

struct BernoulliCounts {
  std::uint64_t n1 = 0;
  std::uint64_t n0 = 0;
  std::uint64_t n() const { return n0 + n1; }
  friend bool operator==(const BernoulliCounts&, const BernoulliCounts&) = default;
};

inline BernoulliCounts bernoulli_counts(const BinarySequence& x) {
  BernoulliCounts c;
  for (auto s : x.symbols()) (s ? c.n1 : c.n0)++;
  return c;
}

/// -log2 of theta^n1 (1-theta)^n0, with 0 log 0 = 0.
inline Bits bernoulli_neg_loglik(const BernoulliCounts& c, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::domain_error("bernoulli_neg_loglik: theta outside [0,1]");
  }
  double len = 0.0;
  if (c.n1 > 0) len += static_cast<double>(c.n1) * bits_of_prob(theta).value();
  if (c.n0 > 0) len += static_cast<double>(c.n0) * bits_of_prob(1.0 - theta).value();
  return Bits(len);
}

inline double bernoulli_ml(const BernoulliCounts& c) {
  if (c.n() == 0) throw std::domain_error("bernoulli_ml: no observations");
  return static_cast<double>(c.n1) / static_cast<double>(c.n());
}

inline constexpr unsigned kMaxMarkovOrder = 24;

/// Context index of the `order` symbols preceding position i; the oldest
/// symbol is the most significant bit.
inline std::size_t context_at(const BinarySequence& x, std::size_t i, unsigned order) {
  std::size_t ctx = 0;
  for (std::size_t t = i - order; t < i; ++t) ctx = (ctx << 1) | x[t];
  return ctx;
}

/// k-bit label of a context index, oldest symbol first.
inline std::string context_label(std::size_t ctx, unsigned order) {
  std::string s(order, '0');
  for (unsigned t = 0; t < order; ++t) {
    if ((ctx >> (order - 1 - t)) & 1u) s[t] = '1';
  }
  return s;
}

/// Per-context transition counts of a k-th order binary chain.
struct MarkovCounts {
  unsigned order = 0;
  /// counts[j] tallies the symbols that followed context j.
  std::vector<BernoulliCounts> counts;
  std::vector<std::uint8_t> start;

  std::uint64_t transitions() const {
    std::uint64_t t = 0;
    for (const auto& c : counts) t += c.n();
    return t;
  }
};

inline MarkovCounts markov_counts(const BinarySequence& x, unsigned order) {
  if (order > kMaxMarkovOrder) throw std::domain_error("markov_counts: order too large");
  if (x.size() <= order) {
    throw std::domain_error("markov_counts: need n > k (n=" + std::to_string(x.size()) +
                            ", k=" + std::to_string(order) + ")");
  }
  MarkovCounts mc;
  mc.order = order;
  mc.counts.assign(std::size_t{1} << order, BernoulliCounts{});
  mc.start.assign(x.symbols().begin(), x.symbols().begin() + order);
  const std::size_t mask = (std::size_t{1} << order) - 1;
  std::size_t ctx = order ? context_at(x, order, order) : 0;
  for (std::size_t i = order; i < x.size(); ++i) {
    (x[i] ? mc.counts[ctx].n1 : mc.counts[ctx].n0)++;
    ctx = ((ctx << 1) | x[i]) & mask;
  }
  return mc;
}

/// Per-context P(next = 1); contexts never visited carry no value.
struct MarkovParameters {
  unsigned order = 0;
  std::vector<std::optional<double>> theta_one;
};

inline MarkovParameters markov_ml(const MarkovCounts& c) {
  MarkovParameters p;
  p.order = c.order;
  p.theta_one.reserve(c.counts.size());
  for (const auto& ctx : c.counts) {
    if (ctx.n() == 0) {
      p.theta_one.emplace_back(std::nullopt);
    } else {
      p.theta_one.emplace_back(bernoulli_ml(ctx));
    }
  }
  return p;
}

/// Codelength of x under a k-th order chain: start_cost for the first k
/// symbols plus -log2 of every transition.
inline Bits markov_neg_loglik(const BinarySequence& x, unsigned order,
                              const MarkovParameters& theta, Bits start_cost) {
  if (theta.order != order) throw std::invalid_argument("markov_neg_loglik: order mismatch");
  const MarkovCounts c = markov_counts(x, order);
  Bits total = start_cost;
  for (std::size_t j = 0; j < c.counts.size(); ++j) {
    if (c.counts[j].n() == 0) continue;
    if (j >= theta.theta_one.size() || !theta.theta_one[j]) {
      throw std::invalid_argument("markov_neg_loglik: no parameter for context " +
                                  context_label(j, order));
    }
    total += bernoulli_neg_loglik(c.counts[j], *theta.theta_one[j]);
  }
  return total;
}

/// Default start cost: the first k symbols at one bit each.
inline Bits markov_neg_loglik(const BinarySequence& x, unsigned order,
                              const MarkovParameters& theta) {
  return markov_neg_loglik(x, order, theta, Bits(order));
}

/// -log2 P(x | ML chain) straight from counts.
inline Bits markov_ml_neg_loglik(const MarkovCounts& c, Bits start_cost) {
  Bits total = start_cost;
  for (const auto& ctx : c.counts) {
    if (ctx.n() > 0) total += bernoulli_neg_loglik(ctx, bernoulli_ml(ctx));
  }
  return total;
}

/// Fisher information of the Bernoulli family, 1/(theta(1-theta)).
/// Diverges at the boundary.
inline double fisher_bernoulli(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::domain_error("fisher_bernoulli: theta outside [0,1]");
  }
  if (theta == 0.0 || theta == 1.0) return kInf;
  return 1.0 / (theta * (1.0 - theta));
}

/// A binary chain family of fixed order; order 0 is the Bernoulli model.
struct ModelFamily {
  unsigned order = 0;

  static ModelFamily bernoulli() { return {0}; }
  static ModelFamily markov(unsigned k) {
    if (k > kMaxMarkovOrder) throw std::domain_error("ModelFamily: order too large");
    return {k};
  }

  std::string id() const { return order == 0 ? "bernoulli" : "markov:" + std::to_string(order); }
  /// Number of free parameters, one per context.
  std::size_t dimension() const { return std::size_t{1} << order; }

  Bits start_cost() const { return Bits(order); }
  MarkovParameters ml(const BinarySequence& x) const { return markov_ml(markov_counts(x, order)); }
  Bits neg_loglik(const BinarySequence& x, const MarkovParameters& theta) const {
    return markov_neg_loglik(x, order, theta, start_cost());
  }
  Bits ml_neg_loglik(const BinarySequence& x) const {
    return markov_ml_neg_loglik(markov_counts(x, order), start_cost());
  }
  /// Per-context Fisher information (each context is a Bernoulli factor).
  double fisher(double theta) const { return fisher_bernoulli(theta); }

  friend bool operator==(const ModelFamily&, const ModelFamily&) = default;
};

/// The integral of sqrt(det I) over the parameter space, kept in log2 form
/// because it grows like pi^(2^k) for chains.
struct FisherIntegral {
  double log2_value = 0.0;
  double value() const { return std::exp2(log2_value); }
};

/// Generic path: integrate sqrt(I(theta)) over (0,1) with theta = sin^2(u),
/// which removes the 1/sqrt endpoint singularity of Bernoulli-like
/// families. I is evaluated on [eps, 1-eps].
inline double fisher_root_integral_quadrature(const std::function<double(double)>& fisher,
                                              double rel_tol = 1e-6, double eps = 1e-8) {
  auto integrand = [&](double u) {
    const double s = std::sin(u);
    const double c = std::cos(u);
    const double theta = std::clamp(s * s, eps, 1.0 - eps);
    return std::sqrt(std::abs(fisher(theta))) * 2.0 * s * c;
  };
  return detail::integrate_adaptive(integrand, 0.0, std::numbers::pi / 2.0, rel_tol).value;
}

/// Exact value for Bernoulli (pi) and chains of order k (pi^(2^k), one
/// Bernoulli factor per context).
inline FisherIntegral fisher_root_integral(const ModelFamily& family) {
  return {static_cast<double>(family.dimension()) * std::log2(std::numbers::pi)};
}

struct GaussianLocationModel {
  double sigma = 1.0;
  explicit GaussianLocationModel(double s) : sigma(s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::domain_error("GaussianLocationModel: sigma must be positive");
    }
  }
};

/// Density codelength of x under N(mu, sigma^2), at unit precision.
inline Bits gaussian_location_neg_loglik(std::span<const double> x, double mu, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::domain_error("gaussian_location_neg_loglik: sigma must be positive");
  }
  if (x.empty()) throw std::invalid_argument("gaussian_location_neg_loglik: empty sample");
  double sq = 0.0;
  for (double v : x) sq += (v - mu) * (v - mu);
  const double n = static_cast<double>(x.size());
  return Bits(kLog2E * sq / (2.0 * sigma * sigma) +
              0.5 * n * std::log2(2.0 * std::numbers::pi * sigma * sigma));
}

inline double sample_mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("sample_mean: empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

}  // namespace mdl

#endif  // MDL_MODELS_HPP
