#ifndef MDL_ORACLE_HPP
#define MDL_ORACLE_HPP

// Brute-force and Monte-Carlo checks. Nothing here calls the closed forms
// in universal.hpp; every quantity is computed extensionally (enumeration,
// grid quadrature, sampling) so it can serve as the reference for them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "mdl/codelen.hpp"
#include "mdl/models.hpp"
#include "mdl/rng.hpp"

namespace mdl::oracle {

inline constexpr std::size_t kEnumerationCap = 20;

struct EnumerationRow {
  Bits ml_codelength;
  double nml_probability = 0.0;
  /// Bayes marginal by quadrature, when a prior was supplied.
  std::optional<double> bayes_marginal;
};

struct EnumerationResult {
  std::size_t n = 0;
  /// Row i is the sequence whose bits spell i, most significant first.
  std::vector<EnumerationRow> rows;
  Bits comp;
  double kraft = 0.0;
};

/// Prior over a Bernoulli parameter: Beta(lambda, lambda) density.
/// lambda = 1 is uniform, lambda = 1/2 is Jeffreys.
struct BetaPrior {
  double lambda = 1.0;
};

/// Marginal probability of counts under a Beta(lambda, lambda) prior by a
/// midpoint rule in u, theta = sin^2(u). The substitution turns the
/// density into a bounded integrand for lambda >= 1/2. The normalizer is
/// integrated on the same grid.
inline double bayes_marginal_quadrature(const BernoulliCounts& c, BetaPrior prior,
                                        std::size_t points = 10000) {
  if (!(prior.lambda >= 0.5) || !std::isfinite(prior.lambda)) {
    throw std::domain_error(
        "bayes_marginal_quadrature: prior density not representable on the grid (lambda < 1/2)");
  }
  const double h = (std::numbers::pi / 2.0) / static_cast<double>(points);
  const double a1 = static_cast<double>(c.n1);
  const double a0 = static_cast<double>(c.n0);
  const double e = 2.0 * prior.lambda - 1.0;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double u = (static_cast<double>(i) + 0.5) * h;
    const double s = std::sin(u);
    const double co = std::cos(u);
    const double w = std::pow(s, e) * std::pow(co, e);
    den += w;
    num += w * std::pow(s, 2.0 * a1) * std::pow(co, 2.0 * a0);
  }
  return num / den;
}

namespace detail {

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Visits all 2^n binary sequences, computing the ML codelength (with the
/// family's start cost), the normalized ML distribution and COMP_n.
/// Rows are filled per index and reduced serially, so the result does not
/// depend on `threads`.
inline EnumerationResult enumerate_family(const ModelFamily& family, std::size_t n,
                                          unsigned threads = 1,
                                          std::optional<BetaPrior> prior = std::nullopt,
                                          std::size_t cap = kEnumerationCap) {
  if (n == 0) throw std::domain_error("enumerate_family: n must be >= 1");
  if (n > cap) {
    throw std::domain_error("enumerate_family: n=" + std::to_string(n) +
                            " exceeds the enumeration cap of " + std::to_string(cap));
  }
  if (n <= family.order) throw std::domain_error("enumerate_family: need n > order");
  const std::size_t count = std::size_t{1} << n;
  EnumerationResult res;
  res.n = n;
  res.rows.resize(count);
  std::vector<double> log_ml(count);
  detail::parallel_for(count, threads, [&](std::size_t i) {
    const auto x = BinarySequence::from_index(i, n);
    const MarkovCounts mc = markov_counts(x, family.order);
    // ML likelihood evaluated directly as a product of frequencies.
    double logp = -family.start_cost().value();
    for (const auto& ctx : mc.counts) {
      const double m = static_cast<double>(ctx.n());
      if (ctx.n1) logp += static_cast<double>(ctx.n1) * std::log2(static_cast<double>(ctx.n1) / m);
      if (ctx.n0) logp += static_cast<double>(ctx.n0) * std::log2(static_cast<double>(ctx.n0) / m);
    }
    log_ml[i] = logp;
    res.rows[i].ml_codelength = Bits(-logp);
    if (prior) {
      double marg = std::exp2(-family.start_cost().value());
      for (const auto& ctx : mc.counts) marg *= bayes_marginal_quadrature(ctx, *prior);
      res.rows[i].bayes_marginal = marg;
    }
  });
  const double comp = logsumexp2(log_ml);
  res.comp = Bits(comp);
  double kraft = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    res.rows[i].nml_probability = std::exp2(log_ml[i] - comp);
    kraft += res.rows[i].nml_probability;
  }
  res.kraft = kraft;
  return res;
}

/// Per-sequence Bayes marginals for all 2^n sequences, by grid quadrature.
inline std::vector<double> enumerate_bayes(const ModelFamily& family, BetaPrior prior,
                                           std::size_t n) {
  if (family.order != 0) {
    throw std::domain_error("enumerate_bayes: only one-parameter families are supported");
  }
  if (n == 0 || n > 16) throw std::domain_error("enumerate_bayes: need 1 <= n <= 16");
  std::vector<double> out(std::size_t{1} << n);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = bayes_marginal_quadrature(bernoulli_counts(BinarySequence::from_index(i, n)), prior);
  }
  return out;
}

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Importance-sampling estimate of the integral over {x : mean(x) in [a,b]}
/// of the maximized Gaussian density P(x | mean(x)).
///
/// Proposal: mean uniform on [a,b], residual around the mean Gaussian with
/// scale 1.25 sigma in the n-1 directions orthogonal to (1,...,1). The
/// weight P(x | mean(x)) / q(x) is evaluated from the sampled x itself.
inline McEstimate mc_gaussian_interval_mass(double a, double b, double sigma, std::size_t n,
                                            std::size_t samples, std::uint64_t seed) {
  if (!(a < b)) throw std::domain_error("mc_gaussian_interval_mass: degenerate interval");
  if (!(sigma > 0.0)) throw std::domain_error("mc_gaussian_interval_mass: sigma must be positive");
  if (n < 1 || n > 3) throw std::domain_error("mc_gaussian_interval_mass: n must be 1, 2 or 3");
  if (samples < 2) throw std::domain_error("mc_gaussian_interval_mass: need samples >= 2");

  const double tau = 1.25 * sigma;
  const double nd = static_cast<double>(n);
  const double two_pi = 2.0 * std::numbers::pi;
  // log q(x) up to the residual term: uniform mean, sqrt(n) Jacobian, normal normalizer.
  const double log_q0 = -std::log(b - a) - 0.5 * std::log(nd) - 0.5 * (nd - 1.0) * std::log(two_pi * tau * tau);
  const double log_p0 = -0.5 * nd * std::log(two_pi * sigma * sigma);

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, tau);
  std::vector<double> x(n);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double centre = a + (b - a) * rng.uniform01();
    double zbar = 0.0;
    for (auto& v : x) {
      v = normal(rng);
      zbar += v;
    }
    zbar /= nd;
    for (auto& v : x) v = centre + (v - zbar);

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= nd;
    double w = 0.0;
    if (mean >= a && mean <= b) {
      double r2 = 0.0;
      for (double v : x) r2 += (v - mean) * (v - mean);
      const double log_p = log_p0 - r2 / (2.0 * sigma * sigma);
      const double log_q = log_q0 - r2 / (2.0 * tau * tau);
      w = std::exp(log_p - log_q);
    }
    sum += w;
    sum_sq += w * w;
  }
  const double m = static_cast<double>(samples);
  const double mean_w = sum / m;
  const double var = std::max(0.0, (sum_sq / m - mean_w * mean_w) * m / (m - 1.0));
  return {mean_w, std::sqrt(var / m)};
}

/// Fraction of trials in which code A (Bernoulli q_a) gives a strictly
/// shorter total length than code B (Bernoulli q_b) on n draws from
/// Bernoulli(p_star). Ties count for B.
inline double expected_regret_lln_check(double p_star, double q_a, double q_b, std::size_t n,
                                        std::size_t trials, std::uint64_t seed) {
  for (double q : {p_star, q_a, q_b}) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("expected_regret_lln_check: bad probability");
  }
  if (trials == 0 || n == 0) throw std::domain_error("expected_regret_lln_check: empty simulation");
  const double pa[2] = {1.0 - p_star, p_star};
  const double qa[2] = {1.0 - q_a, q_a};
  const double qb[2] = {1.0 - q_b, q_b};
  if (expected_codelength(pa, qa) > expected_codelength(pa, qb)) {
    throw std::domain_error("expected_regret_lln_check: code A must have the smaller expected length");
  }
  const Rng root(seed);
  std::size_t wins = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = root.split(t);
    BernoulliCounts c;
    for (std::size_t i = 0; i < n; ++i) (rng.bernoulli(p_star) ? c.n1 : c.n0)++;
    if (bernoulli_neg_loglik(c, q_a) < bernoulli_neg_loglik(c, q_b)) ++wins;
  }
  return static_cast<double>(wins) / static_cast<double>(trials);
}

/// Central second difference of the expected negative log-likelihood
/// E_theta[-ln P(X | t)] at t = theta.
inline double fisher_bernoulli_finite_difference(double theta, double h = 1e-4) {
  auto expected_nll = [theta](double t) {
    return -theta * std::log(t) - (1.0 - theta) * std::log(1.0 - t);
  };
  return (expected_nll(theta + h) - 2.0 * expected_nll(theta) + expected_nll(theta - h)) / (h * h);
}

}  // namespace mdl::oracle

#endif  // MDL_ORACLE_HPP
