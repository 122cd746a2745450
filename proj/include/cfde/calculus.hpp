#ifndef CFDE_CALCULUS_HPP
#define CFDE_CALCULUS_HPP

// Conformable derivative T_a f(t) = lim_{eps->0} [f(t + eps t^(1-a)) - f(t)] / eps
// and integral I_a f(t) = int_lo^t x^(a-1) f(x) dx, for 0 < a <= 1 and t > 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfde/errors.hpp"
#include "cfde/expr.hpp"
#include "cfde/quadrature.hpp"

namespace cfde {

/// Fractional order in (0, 1].
class AlphaOrder
{
public:
  explicit AlphaOrder(double alpha) : alpha_(alpha)
  {
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw DomainError("alpha must lie in (0, 1], got " + std::to_string(alpha));
  }

  double value() const noexcept { return alpha_; }

  /// s = t^a / a, the variable in which T_a acts as d/ds.
  double to_s(double t) const { return std::pow(t, alpha_) / alpha_; }
  double from_s(double s) const { return std::pow(alpha_ * s, 1.0 / alpha_); }

  friend bool operator==(AlphaOrder, AlphaOrder) = default;

private:
  double alpha_;
};

/// A real function of t together with the closed interval it may be sampled on.
class RealFunction
{
public:
  RealFunction(std::function<double(double)> fn,
               double lo = 0.0,
               double hi = std::numeric_limits<double>::infinity())
    : fn_(std::move(fn))
    , lo_(lo)
    , hi_(hi)
  {}

  RealFunction(const Expr& e,
               double lo = 0.0,
               double hi = std::numeric_limits<double>::infinity())
    : RealFunction([e](double t) { return e.eval(t); }, lo, hi)
  {}

  double operator()(double t) const
  {
    if (!(t >= lo_ && t <= hi_))
      throw DomainError("t = " + std::to_string(t) + " outside function domain [" + std::to_string(lo_) + ", " +
                        std::to_string(hi_) + "]");
    const double v = fn_(t);
    if (!std::isfinite(v))
      throw DomainError("non-finite function value at t = " + std::to_string(t));
    return v;
  }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

private:
  std::function<double(double)> fn_;
  double lo_;
  double hi_;
};

struct DerivativeOptions
{
  /// Budget for the spread between successive extrapolated estimates,
  /// relative to max(1, |value|).
  double tolerance = 1e-6;
};

namespace detail {

inline void require_positive(double t)
{
  if (!(t > 0.0))
    throw DomainError("conformable derivative needs t > 0, got t = " + std::to_string(t));
}

inline double mixed_scale(double a, double b = 0.0)
{
  return std::max({ 1.0, std::abs(a), std::abs(b) });
}

/// f'(t) by central differences at h and h/2 combined by one Richardson step.
template<class F>
double central_derivative(const F& f, double t, double h)
{
  auto diff = [&](double step) {
    const volatile double up = t + step;
    const double exact = up - t;
    return (f(t + exact) - f(t - exact)) / (2.0 * exact);
  };
  const double coarse = diff(h);
  const double fine = diff(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

inline double reduction_step(double t)
{
  double h = 1e-4 * std::max(1.0, std::abs(t));
  // Keep the stencil on t > 0.
  return std::min(h, 0.25 * t);
}

} // namespace detail

/// T_a f(t) straight from the limit definition: forward quotients on the
/// ladder eps = 1e-2, 1e-3, ..., 1e-7, one Richardson pass, and the
/// extrapolant whose neighbour agrees best is returned.
inline double t_alpha_limit(const RealFunction& f, AlphaOrder alpha, double t, const DerivativeOptions& opts = {})
{
  detail::require_positive(t);
  const double scale = std::pow(t, 1.0 - alpha.value());
  const double ft = f(t);

  constexpr int rungs = 6;
  std::array<std::optional<double>, rungs> quotient{};
  double eps = 1e-2;
  for (int k = 0; k < rungs; ++k, eps *= 0.1) {
    const volatile double up = t + eps * scale;
    const double h = up - t;
    try {
      quotient[k] = (f(t + h) - ft) / h * scale;
    } catch (const DomainError&) {
      // rung leaves the domain of f; skip it
    }
  }

  // (10 D(eps/10) - D(eps)) / 9 cancels the O(eps) term.
  std::vector<double> extrapolated;
  for (int k = 0; k + 1 < rungs; ++k)
    if (quotient[k] && quotient[k + 1])
      extrapolated.push_back((10.0 * *quotient[k + 1] - *quotient[k]) / 9.0);

  if (extrapolated.size() < 2)
    throw ConvergenceError("too few usable rungs in the epsilon ladder at t = " + std::to_string(t));

  std::size_t best = 1;
  double best_spread = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < extrapolated.size(); ++k) {
    const double spread = std::abs(extrapolated[k] - extrapolated[k - 1]);
    if (spread < best_spread) {
      best_spread = spread;
      best = k;
    }
  }

  const double value = extrapolated[best];
  if (!(best_spread <= opts.tolerance * detail::mixed_scale(value)))
    throw ConvergenceError("epsilon ladder did not settle at t = " + std::to_string(t) +
                           " (spread " + std::to_string(best_spread) + ")");
  return value;
}

/// T_a f(t) = t^(1-a) f'(t) for differentiable f.
inline double t_alpha_reduction(const RealFunction& f, AlphaOrder alpha, double t)
{
  detail::require_positive(t);
  const double slope = detail::central_derivative(f, t, detail::reduction_step(t));
  return std::pow(t, 1.0 - alpha.value()) * slope;
}

/// The n-fold composition T_a ... T_a f at t.
///
/// Composition of T_a is d^n/ds^n in s = t^a/a, so the n-th derivative of
/// g(s) = f(t(s)) is taken on one central stencil (h and h/2, Richardson)
/// rather than by nesting n first-derivative stencils.
inline double iterated_t_alpha(const RealFunction& f,
                               AlphaOrder alpha,
                               int n,
                               double t,
                               const DerivativeOptions& opts = { 1e-5 })
{
  if (n < 1)
    throw PreconditionError("iteration count must be >= 1");
  detail::require_positive(t);
  if (n == 1)
    return t_alpha_reduction(f, alpha, t);

  const double s0 = alpha.to_s(t);
  auto g = [&](double s) { return f(alpha.from_s(s)); };

  std::vector<double> binom(n + 1, 1.0);
  for (int k = 1; k <= n; ++k)
    binom[k] = binom[k - 1] * (n - k + 1) / k;

  auto stencil = [&](double h) {
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      sum += sign * binom[k] * g(s0 + (0.5 * n - k) * h);
    }
    return sum / std::pow(h, n);
  };

  double h = 2.0 * std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (n + 4)) * std::max(1.0, std::abs(s0));
  h = std::min(h, s0 / n);

  const double d1 = stencil(h);
  const double d2 = stencil(0.5 * h);
  const double d3 = stencil(0.25 * h);
  const double coarse = (4.0 * d2 - d1) / 3.0;
  const double fine = (4.0 * d3 - d2) / 3.0;

  const double spread = std::abs(fine - coarse);
  if (!std::isfinite(fine) || spread > opts.tolerance * detail::mixed_scale(fine))
    throw ConvergenceError("order-" + std::to_string(n) + " stencil lost too many digits at t = " +
                           std::to_string(t) + " (spread " + std::to_string(spread) + ")");
  return fine;
}

/// Conformable integral int_a^t x^(alpha-1) f(x) dx.
///
/// Evaluated as (1/alpha) int_{a^alpha}^{t^alpha} f(u^(1/alpha)) du, which
/// removes the x^(alpha-1) endpoint singularity at 0.
inline double i_alpha(const RealFunction& f,
                      AlphaOrder alpha,
                      double a,
                      double t,
                      const QuadratureOptions& opts = {})
{
  if (a < 0.0)
    throw DomainError("lower limit must be >= 0, got " + std::to_string(a));
  if (t < a)
    throw DomainError("upper limit " + std::to_string(t) + " below lower limit " + std::to_string(a));
  if (t == a)
    return 0.0;

  const double al = alpha.value();
  if (al == 1.0)
    return integrate(f, a, t, opts).value;

  const double inv = 1.0 / al;
  auto integrand = [&](double u) { return f(std::pow(u, inv)); };
  return integrate(integrand, std::pow(a, al), std::pow(t, al), opts).value * inv;
}

/// Signed conformable integral: i_alpha for t >= a, its negation with the
/// limits swapped otherwise.
inline double i_alpha_signed(const RealFunction& f,
                             AlphaOrder alpha,
                             double a,
                             double t,
                             const QuadratureOptions& opts = {})
{
  return t >= a ? i_alpha(f, alpha, a, t, opts) : -i_alpha(f, alpha, t, a, opts);
}

// ---------------------------------------------------------------------------
// Identity verification

enum class Identity
{
  linearity,
  product,
  quotient,
  chain,
  parts,
  ftc_forward,
  ftc_backward,
};

inline std::string_view identity_name(Identity kind)
{
  switch (kind) {
    case Identity::linearity: return "linearity";
    case Identity::product: return "product";
    case Identity::quotient: return "quotient";
    case Identity::chain: return "chain";
    case Identity::parts: return "parts";
    case Identity::ftc_forward: return "ftc-forward";
    case Identity::ftc_backward: return "ftc-backward";
  }
  return "?";
}

inline Identity parse_identity(std::string_view name)
{
  for (auto kind : { Identity::linearity, Identity::product, Identity::quotient, Identity::chain, Identity::parts,
                     Identity::ftc_forward, Identity::ftc_backward })
    if (identity_name(kind) == name)
      return kind;
  throw PreconditionError("unknown identity '" + std::string(name) + "'");
}

enum class DerivativeMethod
{
  limit,
  reduction,
};

struct IdentityOptions
{
  double tolerance = 1e-6;
  /// Coefficients of a f + b g for the linearity check.
  double a = 2.0;
  double b = -3.0;
  /// Lower limit of the integral in the FTC checks.
  double lower_limit = 0.5;
  DerivativeMethod method = DerivativeMethod::reduction;
  /// The FTC and parts checks difference or integrate quadrature output, so
  /// they run the quadrature tighter than the library default.
  QuadratureOptions quadrature{ 1e-13, 1e-12, 20000 };
};

struct IdentitySample
{
  /// Sample point; the upper limit for `parts`.
  double t = 0.0;
  /// Lower limit for `parts`, NaN otherwise.
  double lower = std::numeric_limits<double>::quiet_NaN();
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  /// |lhs - rhs| / max(1, |lhs|, |rhs|).
  double rel_residual = 0.0;
  bool pass = false;
};

struct IdentityReport
{
  Identity kind = Identity::linearity;
  std::vector<IdentitySample> samples;
  double max_abs_residual = 0.0;
  double max_rel_residual = 0.0;
  bool pass = false;
};

/// Checks one calculus identity at each sample point. `g` is required for
/// every kind except ftc-forward and ftc-backward. For `parts`, consecutive
/// sample points are taken as [lower, upper] intervals.
inline IdentityReport verify_identity(Identity kind,
                                      const RealFunction& f,
                                      const std::optional<RealFunction>& g,
                                      AlphaOrder alpha,
                                      const std::vector<double>& samples,
                                      const IdentityOptions& opts = {})
{
  const bool needs_g = kind != Identity::ftc_forward && kind != Identity::ftc_backward;
  if (needs_g && !g)
    throw PreconditionError(std::string(identity_name(kind)) + " needs a second function g");
  if (kind == Identity::parts && samples.size() < 2)
    throw PreconditionError("parts needs at least two sample points");

  for (double t : samples)
    if (!(t > 0.0))
      throw DomainError("sample points must be > 0, got " + std::to_string(t));

  auto deriv = [&](const RealFunction& fn, double t) {
    return opts.method == DerivativeMethod::limit ? t_alpha_limit(fn, alpha, t) : t_alpha_reduction(fn, alpha, t);
  };

  IdentityReport report;
  report.kind = kind;

  auto record = [&](double t, double lhs, double rhs, double lower = std::numeric_limits<double>::quiet_NaN()) {
    IdentitySample s;
    s.t = t;
    s.lower = lower;
    s.lhs = lhs;
    s.rhs = rhs;
    s.abs_residual = std::abs(lhs - rhs);
    s.rel_residual = s.abs_residual / detail::mixed_scale(lhs, rhs);
    s.pass = std::isfinite(s.rel_residual) && s.rel_residual <= opts.tolerance;
    report.samples.push_back(s);
  };

  const double lo = opts.lower_limit;

  if (kind == Identity::parts) {
    const RealFunction& gg = *g;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      const double a = samples[i];
      const double b = samples[i + 1];
      RealFunction f_dg([&](double x) { return f(x) * deriv(gg, x); });
      RealFunction g_df([&](double x) { return gg(x) * deriv(f, x); });
      const double lhs = i_alpha_signed(f_dg, alpha, a, b, opts.quadrature);
      const double rhs = f(b) * gg(b) - f(a) * gg(a) - i_alpha_signed(g_df, alpha, a, b, opts.quadrature);
      record(b, lhs, rhs, a);
    }
  } else {
    for (double t : samples) {
      double lhs = 0.0;
      double rhs = 0.0;
      switch (kind) {
        case Identity::linearity: {
          const RealFunction& gg = *g;
          RealFunction combo([&](double x) { return opts.a * f(x) + opts.b * gg(x); });
          lhs = deriv(combo, t);
          rhs = opts.a * deriv(f, t) + opts.b * deriv(gg, t);
          break;
        }
        case Identity::product: {
          const RealFunction& gg = *g;
          RealFunction prod([&](double x) { return f(x) * gg(x); });
          lhs = deriv(prod, t);
          rhs = deriv(f, t) * gg(t) + f(t) * deriv(gg, t);
          break;
        }
        case Identity::quotient: {
          const RealFunction& gg = *g;
          const double gt = gg(t);
          if (gt == 0.0)
            throw DomainError("quotient identity needs g(t) != 0 at t = " + std::to_string(t));
          RealFunction quot([&](double x) { return f(x) / gg(x); });
          lhs = deriv(quot, t);
          rhs = (deriv(f, t) * gt - f(t) * deriv(gg, t)) / (gt * gt);
          break;
        }
        case Identity::chain: {
          const RealFunction& gg = *g;
          const double gt = gg(t);
          if (!(gt > 0.0))
            throw DomainError("chain identity needs g(t) > 0 at t = " + std::to_string(t));
          RealFunction comp([&](double x) { return f(gg(x)); });
          lhs = deriv(comp, t);
          rhs = deriv(f, gt) * deriv(gg, t) * std::pow(gt, alpha.value() - 1.0);
          break;
        }
        case Identity::ftc_forward: {
          if (t <= lo)
            throw DomainError("ftc-forward sample must exceed the lower limit " + std::to_string(lo));
          RealFunction integral([&](double x) { return i_alpha(f, alpha, lo, x, opts.quadrature); }, lo);
          lhs = deriv(integral, t);
          rhs = f(t);
          break;
        }
        case Identity::ftc_backward: {
          if (t < lo)
            throw DomainError("ftc-backward sample must not precede the lower limit " + std::to_string(lo));
          RealFunction df([&](double x) { return deriv(f, x); });
          lhs = i_alpha(df, alpha, lo, t, opts.quadrature);
          rhs = f(t) - f(lo);
          break;
        }
        case Identity::parts: break;
      }
      record(t, lhs, rhs);
    }
  }

  report.pass = !report.samples.empty();
  for (const auto& s : report.samples) {
    report.pass = report.pass && s.pass;
    if (!std::isfinite(s.rel_residual)) {
      report.max_abs_residual = std::numeric_limits<double>::infinity();
      report.max_rel_residual = std::numeric_limits<double>::infinity();
      continue;
    }
    report.max_abs_residual = std::max(report.max_abs_residual, s.abs_residual);
    report.max_rel_residual = std::max(report.max_rel_residual, s.rel_residual);
  }
  return report;
}

} // namespace cfde

#endif // CFDE_CALCULUS_HPP
