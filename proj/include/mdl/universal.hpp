#ifndef MDL_UNIVERSAL_HPP
#define MDL_UNIVERSAL_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdl/codelen.hpp"
#include "mdl/models.hpp"
#include "mdl/oracle.hpp"

namespace mdl {

enum class CodeKind { NmlExact, NmlAsymptotic, Bayes, TwoPart, PlugIn, MetaTwoPart, MaxLikelihood };

inline std::string to_string(CodeKind k) {
  switch (k) {
    case CodeKind::NmlExact: return "nml-exact";
    case CodeKind::NmlAsymptotic: return "nml-asymptotic";
    case CodeKind::Bayes: return "bayes";
    case CodeKind::TwoPart: return "two-part";
    case CodeKind::PlugIn: return "plug-in";
    case CodeKind::MetaTwoPart: return "meta-two-part";
    case CodeKind::MaxLikelihood: return "ml";
  }
  return "unknown";
}

/// Codelength of one data set under one (model, code) pair. For codes that
/// decompose (NML, two-part) total = data_fit + complexity. For Bayes and
/// plug-in codes data_fit is the ML codelength and complexity is the
/// difference, i.e. the regret.
struct UniversalCodeReport {
  std::string model;
  CodeKind code = CodeKind::NmlExact;
  Bits data_fit;
  Bits complexity;
  Bits total;
  std::vector<std::string> flags;

  Bits regret() const { return total - data_fit; }
};

/// Beta(lambda, lambda) prior over each Bernoulli parameter.
class PriorSpec {
 public:
  enum class Kind { Uniform, Jeffreys, VirtualCount };

  static PriorSpec uniform() { return PriorSpec(Kind::Uniform, 1.0); }
  static PriorSpec jeffreys() { return PriorSpec(Kind::Jeffreys, 0.5); }
  static PriorSpec virtual_count(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw std::domain_error("PriorSpec: lambda must be positive");
    }
    return PriorSpec(Kind::VirtualCount, lambda);
  }

  Kind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  std::string name() const {
    switch (kind_) {
      case Kind::Uniform: return "uniform";
      case Kind::Jeffreys: return "jeffreys";
      case Kind::VirtualCount: return "lambda=" + std::to_string(lambda_);
    }
    return "?";
  }

 private:
  PriorSpec(Kind k, double l) : kind_(k), lambda_(l) {}
  Kind kind_;
  double lambda_;
};

namespace detail {

inline double log2_binomial(std::uint64_t n, std::uint64_t j) {
  const double nn = static_cast<double>(n);
  const double jj = static_cast<double>(j);
  return nats_to_bits(std::lgamma(nn + 1.0) - std::lgamma(jj + 1.0) - std::lgamma(nn - jj + 1.0));
}

inline double log2_beta(double a, double b) {
  return nats_to_bits(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

inline std::size_t ceil_sqrt(std::size_t n) {
  auto m = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (m * m < n) ++m;
  while (m > 1 && (m - 1) * (m - 1) >= n) --m;
  return std::max<std::size_t>(m, 1);
}

}  // namespace detail

/// COMP_n of the Bernoulli model: log2 sum_j C(n,j) (j/n)^j ((n-j)/n)^(n-j).
inline Bits comp_exact_bernoulli(std::uint64_t n) {
  if (n == 0) throw std::domain_error("comp_exact_bernoulli: n must be >= 1");
  std::vector<double> terms(n + 1);
  const double nn = static_cast<double>(n);
  for (std::uint64_t j = 0; j <= n; ++j) {
    const double jj = static_cast<double>(j);
    double t = detail::log2_binomial(n, j);
    if (j > 0) t += jj * std::log2(jj / nn);
    if (j < n) t += (nn - jj) * std::log2((nn - jj) / nn);
    terms[j] = t;
  }
  return Bits(logsumexp2(terms));
}

/// COMP_n of k-th order chains (start cost k bits), by enumeration.
inline Bits comp_exact_markov(std::size_t n, unsigned order,
                              std::size_t cap = oracle::kEnumerationCap, unsigned threads = 1) {
  if (n <= order) {
    throw std::domain_error("comp_exact_markov: need n > k (n=" + std::to_string(n) +
                            ", k=" + std::to_string(order) + ")");
  }
  return oracle::enumerate_family(ModelFamily::markov(order), n, threads, std::nullopt, cap).comp;
}

/// Stochastic complexity -log2 Pnml(x): ML codelength plus COMP_n.
inline UniversalCodeReport nml_codelength(const BinarySequence& x, const ModelFamily& family,
                                          Bits comp) {
  UniversalCodeReport r;
  r.model = family.id();
  r.code = CodeKind::NmlExact;
  r.data_fit = family.ml_neg_loglik(x);
  r.complexity = comp;
  r.total = r.data_fit + r.complexity;
  return r;
}

/// (k/2) log2(n / 2 pi) + log2 of the Fisher integral; the o(1) term is dropped.
inline Bits comp_asymptotic(std::size_t dimension, std::uint64_t n, FisherIntegral fisher) {
  if (dimension == 0 || n == 0) {
    throw std::domain_error("comp_asymptotic: dimension and n must be positive");
  }
  return Bits(0.5 * static_cast<double>(dimension) *
                  std::log2(static_cast<double>(n) / (2.0 * std::numbers::pi)) +
              fisher.log2_value);
}

inline Bits comp_asymptotic(std::size_t dimension, std::uint64_t n, double fisher_integral) {
  if (!(fisher_integral > 0.0)) {
    throw std::domain_error("comp_asymptotic: Fisher integral must be positive");
  }
  return comp_asymptotic(dimension, n, FisherIntegral{std::log2(fisher_integral)});
}

inline Bits comp_asymptotic(const ModelFamily& family, std::uint64_t n) {
  return comp_asymptotic(family.dimension(), n, fisher_root_integral(family));
}

/// Asymptotic NML report. Flags: always "asymptotic"; "boundary-ml" when
/// some visited context has its ML estimate on {0,1}.
inline UniversalCodeReport nml_asymptotic_codelength(const BinarySequence& x,
                                                     const ModelFamily& family) {
  const MarkovCounts mc = markov_counts(x, family.order);
  UniversalCodeReport r;
  r.model = family.id();
  r.code = CodeKind::NmlAsymptotic;
  r.data_fit = markov_ml_neg_loglik(mc, family.start_cost());
  r.complexity = comp_asymptotic(family, x.size());
  r.total = r.data_fit + r.complexity;
  r.flags.push_back("asymptotic");
  for (const auto& c : mc.counts) {
    if (c.n() > 0 && (c.n0 == 0 || c.n1 == 0)) {
      r.flags.push_back("boundary-ml");
      break;
    }
  }
  return r;
}

/// -log2 of the Beta(lambda, lambda) marginal of the counts.
inline Bits bayes_bernoulli(const BernoulliCounts& c, const PriorSpec& prior) {
  const double l = prior.lambda();
  return Bits(detail::log2_beta(l, l) -
              detail::log2_beta(static_cast<double>(c.n1) + l, static_cast<double>(c.n0) + l));
}

/// Start cost plus a Bayes mixture per context.
inline Bits bayes_markov(const MarkovCounts& c, const PriorSpec& prior) {
  Bits total(static_cast<double>(c.order));
  for (const auto& ctx : c.counts) total += bayes_bernoulli(ctx, prior);
  return total;
}

inline UniversalCodeReport bayes_report(const BinarySequence& x, unsigned order,
                                        const PriorSpec& prior) {
  const MarkovCounts mc = markov_counts(x, order);
  UniversalCodeReport r;
  r.model = ModelFamily::markov(order).id();
  r.code = CodeKind::Bayes;
  r.data_fit = markov_ml_neg_loglik(mc, Bits(order));
  r.total = bayes_markov(mc, prior);
  r.complexity = r.total - r.data_fit;
  r.flags.push_back("prior=" + prior.name());
  return r;
}

/// Per-symbol terms of the sequential plug-in code, start-up symbols first.
struct PluginTrace {
  Bits start;
  std::vector<Bits> steps;
  Bits total() const {
    Bits t = start;
    for (Bits s : steps) t += s;
    return t;
  }
};

/// Prequential plug-in code: each symbol after the first k is predicted by
/// (n1 + lambda) / (n + 2 lambda) over the earlier symbols in its context.
/// With lambda = 0 and no earlier symbols in a context the prediction is 1/2.
inline PluginTrace plugin_trace(const BinarySequence& x, unsigned order, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("plugin_codelength: lambda must be >= 0");
  }
  if (x.size() <= order) throw std::domain_error("plugin_codelength: need n > k");
  PluginTrace tr;
  tr.start = Bits(order);
  tr.steps.reserve(x.size() - order);
  std::vector<BernoulliCounts> counts(std::size_t{1} << order);
  const std::size_t mask = counts.size() - 1;
  std::size_t ctx = order ? context_at(x, order, order) : 0;
  for (std::size_t i = order; i < x.size(); ++i) {
    auto& c = counts[ctx];
    const double denom = static_cast<double>(c.n()) + 2.0 * lambda;
    const double p1 = denom > 0.0 ? (static_cast<double>(c.n1) + lambda) / denom : 0.5;
    tr.steps.push_back(bits_of_prob(x[i] ? p1 : 1.0 - p1));
    (x[i] ? c.n1 : c.n0)++;
    ctx = ((ctx << 1) | x[i]) & mask;
  }
  return tr;
}

inline Bits plugin_codelength(const BinarySequence& x, unsigned order, double lambda) {
  return plugin_trace(x, order, lambda).total();
}

inline UniversalCodeReport plugin_report(const BinarySequence& x, unsigned order, double lambda) {
  UniversalCodeReport r;
  r.model = ModelFamily::markov(order).id();
  r.code = CodeKind::PlugIn;
  r.data_fit = markov_ml_neg_loglik(markov_counts(x, order), Bits(order));
  r.total = plugin_codelength(x, order, lambda);
  r.complexity = r.total - r.data_fit;
  r.flags.push_back("lambda=" + std::to_string(lambda));
  return r;
}

/// Parameter discretization for two-part codes.
struct GridSpec {
  enum class Mode {
    /// One codeword per possible count: 2^k log2(n+1) bits, ML is representable.
    Crude,
    /// ceil(sqrt(n)) midpoints (2i-1)/(2m) per parameter.
    Refined,
  };
  Mode mode = Mode::Refined;
  /// Include the integer code for the order index (k+1) in the complexity.
  bool include_order_code = true;

  static GridSpec crude() { return {Mode::Crude, true}; }
  static GridSpec refined() { return {Mode::Refined, true}; }
};

inline std::vector<double> refined_grid(std::size_t n) {
  const std::size_t m = detail::ceil_sqrt(n);
  std::vector<double> g(m);
  for (std::size_t i = 0; i < m; ++i) {
    g[i] = static_cast<double>(2 * i + 1) / static_cast<double>(2 * m);
  }
  return g;
}

/// Two-part code for a k-th order chain.
inline UniversalCodeReport twopart_codelength(const BinarySequence& x, unsigned order,
                                              const GridSpec& grid) {
  const MarkovCounts mc = markov_counts(x, order);
  const auto params = static_cast<double>(mc.counts.size());
  UniversalCodeReport r;
  r.model = ModelFamily::markov(order).id();
  r.code = CodeKind::TwoPart;
  Bits complexity = grid.include_order_code ? integer_codelength(order + 1) : Bits(0.0);
  if (grid.mode == GridSpec::Mode::Crude) {
    complexity += params * uniform_codelength(static_cast<std::int64_t>(x.size()) + 1);
    r.data_fit = markov_ml_neg_loglik(mc, Bits(order));
    r.flags.push_back("grid=crude");
  } else {
    const auto g = refined_grid(x.size());
    complexity += params * uniform_codelength(static_cast<std::int64_t>(g.size()));
    Bits fit(static_cast<double>(order));
    for (const auto& ctx : mc.counts) {
      if (ctx.n() == 0) continue;
      Bits best = Bits::infinity();
      for (double theta : g) best = std::min(best, bernoulli_neg_loglik(ctx, theta));
      fit += best;
    }
    r.data_fit = fit;
    r.flags.push_back("grid=refined:m=" + std::to_string(g.size()));
  }
  r.complexity = complexity;
  r.total = r.data_fit + r.complexity;
  return r;
}

/// Bayes mixture whose prior is the one implied by the refined two-part
/// code: mass 1/m on each grid midpoint per context, same start and order
/// costs. Never longer than the matching two-part code.
inline Bits bayes_on_grid(const BinarySequence& x, unsigned order, bool include_order_code = true) {
  const MarkovCounts mc = markov_counts(x, order);
  const auto g = refined_grid(x.size());
  const double log2_m = std::log2(static_cast<double>(g.size()));
  Bits total(static_cast<double>(order));
  if (include_order_code) total += integer_codelength(order + 1);
  std::vector<double> terms(g.size());
  for (const auto& ctx : mc.counts) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      terms[i] = -bernoulli_neg_loglik(ctx, g[i]).value() - log2_m;
    }
    total += Bits(-logsumexp2(terms));
  }
  return total;
}

/// Conditional complexity of the Gaussian location family with the mean
/// restricted to [-K, K]: log2 K + 1/2 log2(n / 2 pi) - log2 sigma + 1.
inline Bits comp_conditional_gaussian(double K, std::uint64_t n, double sigma) {
  if (!(K > 0.0) || !(sigma > 0.0) || n == 0) {
    throw std::domain_error("comp_conditional_gaussian: K, sigma and n must be positive");
  }
  return Bits(std::log2(K) + 0.5 * std::log2(static_cast<double>(n) / (2.0 * std::numbers::pi)) -
              std::log2(sigma) + 1.0);
}

struct MetaTwoPartReport {
  UniversalCodeReport report;
  /// Chosen bound K = 2^j.
  double K = 2.0;
  unsigned j = 1;
  Bits regret;
};

/// Meta-universal code for the Gaussian location family: encode j with the
/// integer code, then the data with the conditional NML code for
/// K = 2^j >= max(|mean|, 2).
inline MetaTwoPartReport meta_twopart_gaussian(std::span<const double> x, double sigma) {
  const GaussianLocationModel model(sigma);
  const double mu = sample_mean(x);
  const Bits fit = gaussian_location_neg_loglik(x, mu, model.sigma);
  unsigned j = 1;
  while (std::exp2(static_cast<double>(j)) < std::abs(mu)) ++j;
  MetaTwoPartReport best;
  best.report.total = Bits::infinity();
  // Cost grows with j once K covers the mean; a few extra rungs confirm the minimum.
  for (unsigned jj = j; jj < j + 4; ++jj) {
    const double K = std::exp2(static_cast<double>(jj));
    const Bits complexity = integer_codelength(jj) + comp_conditional_gaussian(K, x.size(), sigma);
    if (fit + complexity < best.report.total) {
      best.K = K;
      best.j = jj;
      best.report.complexity = complexity;
      best.report.total = fit + complexity;
    }
  }
  best.report.model = "gaussian-location";
  best.report.code = CodeKind::MetaTwoPart;
  best.report.data_fit = fit;
  best.report.flags.push_back("K=" + std::to_string(static_cast<long long>(best.K)));
  best.regret = best.report.total - fit;
  return best;
}

}  // namespace mdl

#endif  // MDL_UNIVERSAL_HPP
