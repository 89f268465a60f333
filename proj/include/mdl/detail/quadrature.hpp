#ifndef MDL_DETAIL_QUADRATURE_HPP
#define MDL_DETAIL_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace mdl::detail {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

// Gauss-Kronrod 7/15 nodes and weights on [-1,1] (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
QuadratureResult gauss_kronrod15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kKronrodNodes[j];
    const double fsum = f(c - dx) + f(c + dx);
    kronrod += kKronrodWeights[j] * fsum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * fsum;
  }
  return {kronrod * h, std::abs((kronrod - gauss) * h), 1};
}

/// Globally adaptive bisection with a G7K15 rule. Nodes are interior, so
/// integrable endpoint singularities are never evaluated directly.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double rel_tol,
                                    int max_intervals = 2000) {
  struct Piece {
    double a, b;
    QuadratureResult r;
    bool operator<(const Piece& o) const { return r.error < o.r.error; }
  };
  std::priority_queue<Piece> pieces;
  Piece first{a, b, gauss_kronrod15(f, a, b)};
  double value = first.r.value;
  double error = first.r.error;
  pieces.push(first);
  int count = 1;
  while (error > rel_tol * std::abs(value) && count < max_intervals) {
    Piece worst = pieces.top();
    pieces.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Piece left{worst.a, mid, gauss_kronrod15(f, worst.a, mid)};
    Piece right{mid, worst.b, gauss_kronrod15(f, mid, worst.b)};
    value += left.r.value + right.r.value - worst.r.value;
    error += left.r.error + right.r.error - worst.r.error;
    pieces.push(left);
    pieces.push(right);
    ++count;
  }
  if (error > rel_tol * std::abs(value)) {
    throw std::runtime_error("integrate_adaptive: no convergence");
  }
  return {value, error, count};
}

}  // namespace mdl::detail

#endif  // MDL_DETAIL_QUADRATURE_HPP
