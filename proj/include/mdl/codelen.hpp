#ifndef MDL_CODELEN_HPP
#define MDL_CODELEN_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>

namespace mdl {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A codelength in bits. Lengths are idealized (non-integer) and never
/// rounded up to whole bits. +infinity stands for an outcome that was
/// assigned probability zero.
///
/// Lengths derived from densities (Gaussian models) may be negative, so the
/// type itself does not enforce a sign.
class Bits {
 public:
  constexpr Bits() = default;
  constexpr explicit Bits(double v) : value_(v) {}

  constexpr double value() const { return value_; }
  bool is_infinite() const { return std::isinf(value_); }
  bool is_finite() const { return std::isfinite(value_); }

  /// Probability (or density) the length corresponds to, 2^-L.
  double probability() const { return std::exp2(-value_); }

  static constexpr Bits infinity() { return Bits(kInf); }

  constexpr Bits& operator+=(Bits o) {
    value_ += o.value_;
    return *this;
  }
  constexpr Bits& operator-=(Bits o) {
    value_ -= o.value_;
    return *this;
  }
  friend constexpr Bits operator+(Bits a, Bits b) { return Bits(a.value_ + b.value_); }
  friend constexpr Bits operator-(Bits a, Bits b) { return Bits(a.value_ - b.value_); }
  friend constexpr Bits operator*(double s, Bits b) { return Bits(s * b.value_); }
  friend constexpr Bits operator*(Bits b, double s) { return Bits(s * b.value_); }
  friend constexpr auto operator<=>(Bits a, Bits b) = default;

  friend std::ostream& operator<<(std::ostream& os, Bits b) { return os << b.value_ << " bits"; }

 private:
  double value_ = 0.0;
};

inline constexpr double kLog2E = std::numbers::log2e;

/// log2 of a value given in natural-log units.
inline double nats_to_bits(double nats) { return nats * kLog2E; }

/// -log2 p. p = 0 maps to +infinity.
inline Bits bits_of_prob(double p) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    throw std::domain_error("bits_of_prob: probability must lie in [0,1], got " +
                            std::to_string(p));
  }
  if (p == 0.0) return Bits::infinity();
  return Bits(-std::log2(p));
}

/// The standard prefix code for the positive integers: L(k) = 2 log k + 1.
inline Bits integer_codelength(std::int64_t k) {
  if (k <= 0) {
    throw std::domain_error("integer_codelength: k must be >= 1, got " + std::to_string(k));
  }
  return Bits(2.0 * std::log2(static_cast<double>(k)) + 1.0);
}

/// Integer code for an index too large for a machine word, given log2 of the index.
inline Bits integer_codelength_from_log2(double log2_k) {
  if (!(log2_k >= 0.0)) {
    throw std::domain_error("integer_codelength_from_log2: index must be >= 1");
  }
  return Bits(2.0 * log2_k + 1.0);
}

/// Fixed-length code over m outcomes.
inline Bits uniform_codelength(std::int64_t m) {
  if (m <= 0) {
    throw std::domain_error("uniform_codelength: m must be >= 1, got " + std::to_string(m));
  }
  return Bits(std::log2(static_cast<double>(m)));
}

/// Codelength function over a finite outcome space.
struct CodelengthTable {
  std::map<std::string, Bits> entries;
  /// Declared complete: the Kraft sum must be exactly one.
  bool complete = false;
};

/// Sum of 2^-L(z) over the table, accumulated in key order.
inline double kraft_sum(const CodelengthTable& table) {
  double s = 0.0;
  for (const auto& [_, len] : table.entries) s += len.probability();
  return s;
}

/// log2 of sum 2^t over the terms, computed with a max shift. Terms may be
/// -infinity. Summation runs in index order so the result is reproducible.
inline double logsumexp2(std::span<const double> terms) {
  if (terms.empty()) throw std::invalid_argument("logsumexp2: empty term list");
  double mx = -kInf;
  for (double t : terms) {
    if (std::isnan(t)) throw std::domain_error("logsumexp2: NaN term");
    mx = std::max(mx, t);
  }
  if (mx == -kInf) return -kInf;
  if (mx == kInf) return kInf;
  double s = 0.0;
  for (double t : terms) s += std::exp2(t - mx);
  return mx + std::log2(s);
}

/// E_p[-log2 q]. p must be a proper distribution; q may be defective.
inline Bits expected_codelength(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("expected_codelength: outcome spaces differ in size");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) throw std::domain_error("expected_codelength: negative mass");
    total += p[i];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::domain_error("expected_codelength: p does not sum to one");
  }
  double len = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;  // 0 log 0 = 0
    len += p[i] * bits_of_prob(std::min(q[i], 1.0)).value();
  }
  return Bits(len);
}

}  // namespace mdl

#endif  // MDL_CODELEN_HPP
