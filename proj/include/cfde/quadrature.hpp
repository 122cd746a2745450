#ifndef CFDE_QUADRATURE_HPP
#define CFDE_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "cfde/errors.hpp"

namespace cfde {

struct QuadratureOptions
{
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_intervals = 4000;
};

struct QuadratureResult
{
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
inline constexpr double gk15_nodes[8] = {
  0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
  0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
  0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
  0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
inline constexpr double gk15_kronrod_weights[8] = {
  0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
  0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
  0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
  0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
inline constexpr double gk15_gauss_weights[4] = {
  0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
  0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct QuadPanel
{
  double a;
  double b;
  double value;
  double error;

  bool operator<(const QuadPanel& other) const { return error < other.error; }
};

template<class F>
QuadPanel gk15(const F& f, double a, double b)
{
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double values[15];
  values[7] = f(center);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * gk15_nodes[i];
    values[i] = f(center - dx);
    values[14 - i] = f(center + dx);
  }

  double kronrod = gk15_kronrod_weights[7] * values[7];
  double gauss = gk15_gauss_weights[3] * values[7];
  double abs_sum = gk15_kronrod_weights[7] * std::abs(values[7]);
  for (int i = 0; i < 7; ++i) {
    const double pair = values[i] + values[14 - i];
    kronrod += gk15_kronrod_weights[i] * pair;
    abs_sum += gk15_kronrod_weights[i] * (std::abs(values[i]) + std::abs(values[14 - i]));
    if (i % 2 == 1)
      gauss += gk15_gauss_weights[i / 2] * pair;
  }

  const double mean = 0.5 * kronrod;
  double asc = gk15_kronrod_weights[7] * std::abs(values[7] - mean);
  for (int i = 0; i < 7; ++i)
    asc += gk15_kronrod_weights[i] * (std::abs(values[i] - mean) + std::abs(values[14 - i] - mean));

  kronrod *= half;
  gauss *= half;
  abs_sum *= std::abs(half);
  asc *= std::abs(half);

  // QUADPACK error scaling: the raw |K - G| grossly overstates the Kronrod
  // error on smooth panels, and the estimate never drops below roundoff.
  double err = std::abs(kronrod - gauss);
  if (asc != 0.0 && err != 0.0)
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * abs_sum, err);

  return { a, b, kronrod, err };
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod 7/15 quadrature of f over [a, b]. The
/// panel with the largest error estimate is bisected until the summed
/// estimate drops below max(abs_tol, rel_tol * |value|). Reversed limits
/// give the negated integral.
template<class F>
QuadratureResult integrate(const F& f, double a, double b, const QuadratureOptions& opts = {})
{
  if (a == b)
    return {};
  if (a > b) {
    auto r = integrate(f, b, a, opts);
    r.value = -r.value;
    return r;
  }

  std::priority_queue<detail::QuadPanel> panels;
  auto first = detail::gk15(f, a, b);
  double value = first.value;
  double error = first.error;
  panels.push(first);

  const double min_width = 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));

  while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
    if (!std::isfinite(value))
      throw QuadratureError("non-finite integrand value");
    if (static_cast<int>(panels.size()) >= opts.max_intervals)
      throw QuadratureError("tolerance not met within " + std::to_string(opts.max_intervals) +
                            " panels (error estimate " + std::to_string(error) + ")");

    const auto worst = panels.top();
    if (worst.b - worst.a <= min_width)
      throw QuadratureError("panel width underflow near t = " + std::to_string(worst.a));
    panels.pop();

    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::gk15(f, worst.a, mid);
    const auto right = detail::gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }

  if (!std::isfinite(value))
    throw QuadratureError("non-finite integrand value");

  // Re-sum to shed the drift of the incremental updates.
  QuadratureResult out;
  out.intervals = static_cast<int>(panels.size());
  while (!panels.empty()) {
    out.value += panels.top().value;
    out.error += panels.top().error;
    panels.pop();
  }
  return out;
}

} // namespace cfde

#endif // CFDE_QUADRATURE_HPP
