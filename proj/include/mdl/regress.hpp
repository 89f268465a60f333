#ifndef MDL_REGRESS_HPP
#define MDL_REGRESS_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mdl/codelen.hpp"
#include "mdl/select.hpp"
#include "mdl/universal.hpp"

namespace mdl {

struct RegressionPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Ordered (x, y) pairs; n >= 1, all values finite.
class RegressionData {
 public:
  explicit RegressionData(std::vector<RegressionPoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("RegressionData: no points");
    for (const auto& p : points_) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw std::invalid_argument("RegressionData: non-finite value");
      }
    }
  }

  std::size_t size() const { return points_.size(); }
  std::span<const RegressionPoint> points() const { return points_; }
  const RegressionPoint& operator[](std::size_t i) const { return points_[i]; }

  /// Largest |x|, at least 1; used to scale the monomial basis.
  double x_scale() const {
    double s = 1.0;
    for (const auto& p : points_) s = std::max(s, std::abs(p.x));
    return s;
  }

 private:
  std::vector<RegressionPoint> points_;
};

struct RegressionOptions {
  double variance_floor = 1e-6;
};

struct PolynomialHypothesis {
  unsigned degree = 0;
  /// alpha_0 .. alpha_k in the monomial basis.
  std::vector<double> coefficients;
  double sigma2 = 1.0;
  /// The ML variance fell below the floor and was clamped.
  bool floor_hit = false;

  double operator()(double x) const {
    double v = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) v = v * x + *it;
    return v;
  }
};

inline double residual_sum_of_squares(const RegressionData& data, const PolynomialHypothesis& h) {
  double rss = 0.0;
  for (const auto& p : data.points()) {
    const double r = p.y - h(p.x);
    rss += r * r;
  }
  return rss;
}

/// Least-squares polynomial fit by column-pivoted Householder QR on the
/// scaled monomial design.
inline PolynomialHypothesis polyfit_ls(const RegressionData& data, unsigned degree,
                                       const RegressionOptions& opts = {}) {
  const std::size_t n = data.size();
  const std::size_t p = degree + 1;
  if (n < degree + 2) {
    throw std::domain_error("polyfit_ls: degree " + std::to_string(degree) + " needs at least " +
                            std::to_string(degree + 2) + " points, got " + std::to_string(n));
  }
  const double scale = data.x_scale();
  Eigen::MatrixXd design(n, p);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = data[i].x / scale;
    double v = 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      design(i, j) = v;
      v *= t;
    }
    y(i) = data[i].y;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-12);
  if (static_cast<std::size_t>(qr.rank()) < p) {
    throw std::domain_error("polyfit_ls: rank-deficient design, rank " + std::to_string(qr.rank()) +
                            " < " + std::to_string(p) + " (too few distinct x values for degree " +
                            std::to_string(degree) + ")");
  }
  const Eigen::VectorXd beta = qr.solve(y);
  PolynomialHypothesis h;
  h.degree = degree;
  h.coefficients.resize(p);
  double sj = 1.0;
  for (std::size_t j = 0; j < p; ++j) {
    h.coefficients[j] = beta(static_cast<Eigen::Index>(j)) / sj;
    sj *= scale;
  }
  const double ml_var = residual_sum_of_squares(data, h) / static_cast<double>(n);
  h.floor_hit = ml_var < opts.variance_floor;
  h.sigma2 = std::max(ml_var, opts.variance_floor);
  return h;
}

/// Density codelength of the y values given x under h:
/// log2(e) RSS / (2 sigma^2) + (n/2) log2(2 pi sigma^2).
inline Bits regression_codelength(const RegressionData& data, const PolynomialHypothesis& h,
                                  const RegressionOptions& opts = {}) {
  if (!(h.sigma2 >= opts.variance_floor)) {
    throw std::domain_error("regression_codelength: sigma2 below the variance floor");
  }
  const double rss = residual_sum_of_squares(data, h);
  const double n = static_cast<double>(data.size());
  return Bits(kLog2E * rss / (2.0 * h.sigma2) +
              0.5 * n * std::log2(2.0 * std::numbers::pi * h.sigma2));
}

inline Bits gaussian_point_codelength(double residual, double sigma2) {
  return Bits(kLog2E * residual * residual / (2.0 * sigma2) +
              0.5 * std::log2(2.0 * std::numbers::pi * sigma2));
}

/// -log2 of the Student-t density with nu degrees of freedom and squared
/// scale s2, at the given residual.
inline Bits student_t_codelength(double residual, double s2, double nu) {
  const double ln_density = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                            0.5 * std::log(nu * std::numbers::pi * s2) -
                            0.5 * (nu + 1.0) * std::log1p(residual * residual / (nu * s2));
  return Bits(-kLog2E * ln_density);
}

namespace detail {

/// Least squares updated one row at a time with Givens rotations. Keeps the
/// triangular factor R, the rotated right-hand side and the residual sum of
/// squares, so each update and solve costs O(p^2).
class IncrementalLeastSquares {
 public:
  explicit IncrementalLeastSquares(std::size_t p) : p_(p), r_(p * p, 0.0), z_(p, 0.0) {}

  void add(std::vector<double> row, double b) {
    for (std::size_t j = 0; j < p_; ++j) {
      if (row[j] == 0.0) continue;
      double& rjj = r_[j * p_ + j];
      const double rad = std::hypot(rjj, row[j]);
      const double c = rjj / rad;
      const double s = row[j] / rad;
      rjj = rad;
      for (std::size_t l = j + 1; l < p_; ++l) {
        double& rjl = r_[j * p_ + l];
        const double t = c * rjl + s * row[l];
        row[l] = -s * rjl + c * row[l];
        rjl = t;
      }
      const double t = c * z_[j] + s * b;
      b = -s * z_[j] + c * b;
      z_[j] = t;
    }
    rss_ += b * b;
    ++rows_;
  }

  /// Coefficients, or nothing while R is (numerically) singular.
  std::optional<std::vector<double>> solve() const {
    double rmax = 0.0;
    for (std::size_t j = 0; j < p_; ++j) rmax = std::max(rmax, std::abs(r_[j * p_ + j]));
    if (rmax == 0.0) return std::nullopt;
    std::vector<double> beta(p_);
    for (std::size_t j = p_; j-- > 0;) {
      const double d = r_[j * p_ + j];
      if (std::abs(d) <= 1e-10 * rmax) return std::nullopt;
      double v = z_[j];
      for (std::size_t l = j + 1; l < p_; ++l) v -= r_[j * p_ + l] * beta[l];
      beta[j] = v / d;
    }
    return beta;
  }

  /// x' (R'R)^{-1} x, the leverage of a new design row. Call only after
  /// solve() succeeded.
  double leverage(const std::vector<double>& row) const {
    std::vector<double> w(p_);
    double h = 0.0;
    for (std::size_t j = 0; j < p_; ++j) {
      double v = row[j];
      for (std::size_t l = 0; l < j; ++l) v -= r_[l * p_ + j] * w[l];
      w[j] = v / r_[j * p_ + j];
      h += w[j] * w[j];
    }
    return h;
  }

  double rss() const { return rss_; }
  std::size_t rows() const { return rows_; }

 private:
  std::size_t p_;
  std::vector<double> r_;
  std::vector<double> z_;
  double rss_ = 0.0;
  std::size_t rows_ = 0;
};

inline std::vector<double> monomials(double t, std::size_t p) {
  std::vector<double> v(p);
  double m = 1.0;
  for (auto& e : v) {
    e = m;
    m *= t;
  }
  return v;
}

}  // namespace detail

enum class RegressionCode { TwoPart, PlugIn, Asymptotic, MaxLikelihood };

inline RegressionCode parse_regression_code(std::string_view s) {
  if (s == "two-part") return RegressionCode::TwoPart;
  if (s == "plugin" || s == "plug-in") return RegressionCode::PlugIn;
  if (s == "asymptotic") return RegressionCode::Asymptotic;
  if (s == "ml") return RegressionCode::MaxLikelihood;
  throw std::invalid_argument("unknown regression code '" + std::string(s) + "'");
}

inline std::string degree_id(unsigned k) { return "poly:" + std::to_string(k); }

/// Sequential plug-in code for degree k. The first k+2 outcomes, and any
/// outcome whose prefix does not yet identify the polynomial, are coded
/// under N(0, 1). Every later y_i is predicted by the least-squares fit to
/// the earlier i points and coded under a Student-t density centred there,
/// with nu = i - k - 1 degrees of freedom and squared scale
///   max(RSS / nu, floor) * (1 + h_i),
/// h_i the leverage of x_i. A Gaussian with the variance plugged in makes
/// the total hostage to the first few low-df variance estimates.
inline PluginTrace regression_plugin_trace(const RegressionData& data, unsigned degree,
                                           const RegressionOptions& opts = {},
                                           std::size_t* fallback_steps = nullptr) {
  const std::size_t p = degree + 1;
  const double scale = data.x_scale();
  detail::IncrementalLeastSquares ls(p);
  PluginTrace tr;
  tr.steps.reserve(data.size());
  std::size_t fallbacks = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double t = data[i].x / scale;
    std::optional<std::vector<double>> beta;
    if (i >= degree + 2) beta = ls.solve();
    if (beta) {
      double pred = 0.0;
      for (std::size_t j = p; j-- > 0;) pred = pred * t + (*beta)[j];
      const double nu = static_cast<double>(i - p);
      const double s2 = std::max(ls.rss() / nu, opts.variance_floor) *
                        (1.0 + ls.leverage(detail::monomials(t, p)));
      tr.steps.push_back(student_t_codelength(data[i].y - pred, s2, nu));
    } else {
      if (i >= degree + 2) ++fallbacks;
      tr.steps.push_back(gaussian_point_codelength(data[i].y, 1.0));
    }
    ls.add(detail::monomials(t, p), data[i].y);
  }
  if (fallback_steps) *fallback_steps = fallbacks;
  return tr;
}

/// Nearest of m midpoints on [-c, c].
inline double quantize_midpoint(double v, double c, std::size_t m) {
  const double width = 2.0 * c / static_cast<double>(m);
  auto i = static_cast<long long>(std::floor((v + c) / width));
  i = std::clamp<long long>(i, 0, static_cast<long long>(m) - 1);
  return -c + (static_cast<double>(i) + 0.5) * width;
}

/// Codelength of the y values under one degree with the chosen code. The
/// index code for the degree is not included; select_degree adds it.
inline UniversalCodeReport regression_report(const RegressionData& data, unsigned degree,
                                             RegressionCode code,
                                             const RegressionOptions& opts = {}) {
  UniversalCodeReport r;
  r.model = degree_id(degree);
  const PolynomialHypothesis ml = polyfit_ls(data, degree, opts);
  const Bits ml_fit = regression_codelength(data, ml, opts);
  if (ml.floor_hit) r.flags.push_back("variance-floor");
  const double n = static_cast<double>(data.size());
  switch (code) {
    case RegressionCode::MaxLikelihood:
      r.code = CodeKind::MaxLikelihood;
      r.data_fit = ml_fit;
      r.complexity = Bits(0.0);
      break;
    case RegressionCode::Asymptotic:
      r.code = CodeKind::NmlAsymptotic;
      r.data_fit = ml_fit;
      r.complexity = Bits(0.5 * (degree + 2.0) * std::log2(n / (2.0 * std::numbers::pi)));
      r.flags.push_back("approximation: dimension term only");
      break;
    case RegressionCode::PlugIn: {
      std::size_t fallbacks = 0;
      const PluginTrace tr = regression_plugin_trace(data, degree, opts, &fallbacks);
      r.code = CodeKind::PlugIn;
      r.data_fit = ml_fit;
      r.total = tr.total();
      r.complexity = r.total - r.data_fit;
      if (fallbacks) r.flags.push_back("plugin-fallback=" + std::to_string(fallbacks));
      return r;
    }
    case RegressionCode::TwoPart: {
      const std::size_t m = detail::ceil_sqrt(data.size());
      double ymax = 0.0;
      for (const auto& pt : data.points()) ymax = std::max(ymax, std::abs(pt.y));
      double xmax = 0.0;
      for (const auto& pt : data.points()) xmax = std::max(xmax, std::abs(pt.x));
      PolynomialHypothesis q = ml;
      for (unsigned j = 0; j <= degree; ++j) {
        const double c = std::max(2.0 * ymax / std::max(1.0, std::pow(xmax, j)), 1e-12);
        q.coefficients[j] = quantize_midpoint(ml.coefficients[j], c, m);
      }
      const double var = residual_sum_of_squares(data, q) / n;
      q.floor_hit = var < opts.variance_floor;
      q.sigma2 = std::max(var, opts.variance_floor);
      r.code = CodeKind::TwoPart;
      r.data_fit = regression_codelength(data, q, opts);
      // k+1 coefficients plus the variance, log2 m bits each.
      r.complexity = (degree + 2.0) * uniform_codelength(static_cast<std::int64_t>(m));
      r.flags.push_back("grid=m=" + std::to_string(m));
      break;
    }
  }
  r.total = r.data_fit + r.complexity;
  return r;
}

struct DegreeSelection {
  unsigned degree = 0;
  SelectionRanking ranking;
  std::vector<UniversalCodeReport> reports;
};

/// Degrees 0..max_degree ranked with the integer index code on k+1.
inline DegreeSelection select_degree(const RegressionData& data, unsigned max_degree,
                                     RegressionCode code, const RegressionOptions& opts = {}) {
  if (max_degree + 2 > data.size()) {
    throw std::domain_error("select_degree: max degree " + std::to_string(max_degree) +
                            " needs at least " + std::to_string(max_degree + 2) + " points");
  }
  DegreeSelection sel;
  for (unsigned k = 0; k <= max_degree; ++k) {
    try {
      sel.reports.push_back(regression_report(data, k, code, opts));
    } catch (const std::domain_error& e) {
      // Not computable for this degree (e.g. rank-deficient design): it loses.
      UniversalCodeReport r;
      r.model = degree_id(k);
      r.data_fit = r.complexity = r.total = Bits::infinity();
      r.flags.push_back(std::string("not computable: ") + e.what());
      sel.reports.push_back(std::move(r));
    }
  }
  sel.ranking = select_model(sel.reports, IndexCode::Integer);
  sel.degree = static_cast<unsigned>(sel.ranking.selected_index);
  return sel;
}

}  // namespace mdl

#endif  // MDL_REGRESS_HPP
