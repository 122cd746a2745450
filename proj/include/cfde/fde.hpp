#ifndef CFDE_FDE_HPP
#define CFDE_FDE_HPP

// Sequential linear conformable equations of order n*alpha,
//
//   T^n y + p_{n-1}(t) T^{n-1} y + ... + p_1(t) T y + p_0(t) y = q(t),
//
// reduced to the companion system T X = A(t) X + b(t) with
// X = [y, T y, ..., T^{n-1} y], and integrated as a classical ODE.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cfde/calculus.hpp"
#include "cfde/errors.hpp"
#include "cfde/expr.hpp"
#include "cfde/quadrature.hpp"
#include "cfde/trajectory.hpp"

namespace cfde {

struct Interval
{
  double lo = 0.0;
  double hi = 0.0;

  bool contains_open(double t) const noexcept { return t > lo && t < hi; }
  bool contains_closed(double t) const noexcept { return t >= lo && t <= hi; }
};

class SequentialFde
{
public:
  /// `p[k]` is the coefficient of T^k y (p[0] multiplies y itself). The order
  /// n is p.size(). Coefficients are probed across the domain at
  /// construction and a DomainError names the first that fails.
  SequentialFde(AlphaOrder alpha, std::vector<Expr> p, Expr q, Interval domain)
    : alpha_(alpha)
    , p_(std::move(p))
    , q_(std::move(q))
    , domain_(domain)
  {
    if (p_.empty())
      throw PreconditionError("order must be at least 1 (empty coefficient list)");
    if (!(domain_.lo > 0.0))
      throw DomainError("domain must start at a > 0, got a = " + std::to_string(domain_.lo));
    if (!(domain_.hi > domain_.lo) || !std::isfinite(domain_.hi))
      throw DomainError("domain must be a finite interval (a, b) with a < b");

    constexpr int probes = 17;
    for (int i = 1; i <= probes; ++i) {
      const double t = domain_.lo + (domain_.hi - domain_.lo) * i / (probes + 1);
      for (std::size_t k = 0; k < p_.size(); ++k)
        probe(p_[k], t, "p[" + std::to_string(k) + "]");
      probe(q_, t, "q");
    }
  }

  AlphaOrder alpha() const noexcept { return alpha_; }
  int order() const noexcept { return static_cast<int>(p_.size()); }
  const std::vector<Expr>& p() const noexcept { return p_; }
  const Expr& q() const noexcept { return q_; }
  Interval domain() const noexcept { return domain_; }
  bool homogeneous() const noexcept { return q_.is_zero(); }

  /// The same operator with q replaced by zero.
  SequentialFde homogeneous_part() const { return SequentialFde(alpha_, p_, Expr::constant(0.0), domain_); }

private:
  static void probe(const Expr& e, double t, const std::string& name)
  {
    try {
      (void)e.eval(t);
    } catch (const DomainError& err) {
      throw DomainError(name + " is not evaluable at t = " + std::to_string(t) + ": " + err.what());
    }
  }

  AlphaOrder alpha_;
  std::vector<Expr> p_;
  Expr q_;
  Interval domain_;
};

/// T^k y(t0) = gamma[k] for k = 0 .. n-1.
struct InitialCondition
{
  double t0 = 0.0;
  std::vector<double> gamma;
};

inline void validate(const SequentialFde& fde, const InitialCondition& ic)
{
  if (static_cast<int>(ic.gamma.size()) != fde.order())
    throw PreconditionError("initial data has " + std::to_string(ic.gamma.size()) + " values, order is " +
                            std::to_string(fde.order()));
  if (!fde.domain().contains_open(ic.t0))
    throw DomainError("t0 = " + std::to_string(ic.t0) + " outside the open domain");
}

struct CompanionSystem
{
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

/// A(t) has ones on the superdiagonal and last row -p_0(t) .. -p_{n-1}(t);
/// b(t) = q(t) e_n.
inline CompanionSystem companion_system(const SequentialFde& fde, double t)
{
  if (!fde.domain().contains_open(t))
    throw DomainError("t = " + std::to_string(t) + " outside the open domain");
  const int n = fde.order();
  CompanionSystem sys{ Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n) };
  for (int k = 0; k + 1 < n; ++k)
    sys.a(k, k + 1) = 1.0;
  for (int k = 0; k < n; ++k)
    sys.a(n - 1, k) = -fde.p()[k].eval(t);
#ifdef CFDE_FAULT_COMPANION_SIGN
  // Test fixture: deliberately wrong sign in the last row.
  sys.a.row(n - 1) *= -1.0;
#endif
  sys.b(n - 1) = fde.q().eval(t);
  return sys;
}

struct SolverOptions
{
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// First trial step as a fraction of the integration length.
  double initial_step_fraction = 1e-3;
  /// Absolute floor on |step|; roundoff sets a floor regardless.
  double min_step = 0.0;
  long max_steps = 1'000'000;
  IntegrationVariable variable = IntegrationVariable::s;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct Dopri5
{
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b(5th) - b(4th)
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  // Quartic term of the continuous extension. The extension minus the cubic
  // Hermite through both ends is theta^2 (1 - theta)^2 times this.
  static constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                          d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                          d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
};

/// Right-hand side of the companion system in the chosen variable.
class CompanionRhs
{
public:
  CompanionRhs(const SequentialFde& fde, IntegrationVariable variable) : fde_(fde), variable_(variable) {}

  double to_t(double x) const { return variable_ == IntegrationVariable::s ? fde_.alpha().from_s(x) : x; }
  double to_x(double t) const { return variable_ == IntegrationVariable::s ? fde_.alpha().to_s(t) : t; }

  Eigen::VectorXd operator()(double x, const Eigen::VectorXd& state) const
  {
    const double t = to_t(x);
    CompanionSystem sys;
    try {
      sys = companion_system(fde_, t);
    } catch (const DomainError& err) {
      throw DomainError(std::string("coefficient evaluation failed during integration: ") + err.what());
    }
    Eigen::VectorXd d = sys.a * state + sys.b;
    if (variable_ == IntegrationVariable::t)
      d *= std::pow(t, fde_.alpha().value() - 1.0);
    return d;
  }

private:
  const SequentialFde& fde_;
  IntegrationVariable variable_;
};

} // namespace detail

/// Integrates the IVP from ic.t0 to t_end (either direction) with adaptive
/// Dormand-Prince 5(4) steps. The returned grid is increasing in t whatever
/// the direction.
inline Trajectory solve_ivp(const SequentialFde& fde,
                            const InitialCondition& ic,
                            double t_end,
                            const SolverOptions& opts = {})
{
  validate(fde, ic);
  if (!fde.domain().contains_open(t_end))
    throw DomainError("t_end = " + std::to_string(t_end) + " outside the open domain");

  using D = detail::Dopri5;
  const detail::CompanionRhs rhs(fde, opts.variable);
  const int n = fde.order();

  double x = rhs.to_x(ic.t0);
  const double x_end = rhs.to_x(t_end);
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(ic.gamma.data(), n);
  Eigen::VectorXd k1 = rhs(x, y);

  std::vector<double> times{ ic.t0 };
  std::vector<Eigen::VectorXd> states{ y };
  std::vector<Eigen::VectorXd> slopes{ k1 };

  const double length = std::abs(x_end - x);
  const double direction = x_end >= x ? 1.0 : -1.0;
  double h = direction * std::max(opts.initial_step_fraction * length, std::numeric_limits<double>::min());
  constexpr double eps = std::numeric_limits<double>::epsilon();

  long steps = 0;
  while (direction * (x_end - x) > 0.0) {
    if (++steps > opts.max_steps)
      throw ConvergenceError("step budget of " + std::to_string(opts.max_steps) + " exhausted at t = " +
                             std::to_string(rhs.to_t(x)));

    const double floor = std::max(opts.min_step, 16.0 * eps * std::max(1.0, std::abs(x)));
    bool last = false;
    if (direction * (x + h - x_end) >= 0.0) {
      h = x_end - x;
      last = true;
    }
    if (std::abs(h) < floor && !last)
      throw StepUnderflowError("step size " + std::to_string(std::abs(h)) + " below minimum at t = " +
                               std::to_string(rhs.to_t(x)));

    const Eigen::VectorXd k2 = rhs(x + D::c2 * h, y + h * (D::a21 * k1));
    const Eigen::VectorXd k3 = rhs(x + D::c3 * h, y + h * (D::a31 * k1 + D::a32 * k2));
    const Eigen::VectorXd k4 = rhs(x + D::c4 * h, y + h * (D::a41 * k1 + D::a42 * k2 + D::a43 * k3));
    const Eigen::VectorXd k5 =
      rhs(x + D::c5 * h, y + h * (D::a51 * k1 + D::a52 * k2 + D::a53 * k3 + D::a54 * k4));
    const double x_new = last ? x_end : x + h;
    const Eigen::VectorXd k6 =
      rhs(x_new, y + h * (D::a61 * k1 + D::a62 * k2 + D::a63 * k3 + D::a64 * k4 + D::a65 * k5));
    const Eigen::VectorXd y_new = y + h * (D::b1 * k1 + D::b3 * k3 + D::b4 * k4 + D::b5 * k5 + D::b6 * k6);
    const Eigen::VectorXd k7 = rhs(x_new, y_new);

    const Eigen::VectorXd err = h * (D::e1 * k1 + D::e3 * k3 + D::e4 * k4 + D::e5 * k5 + D::e6 * k6 + D::e7 * k7);
    // Mid-step gap between the cubic Hermite dense output and the 4th-order
    // continuous extension; steps are accepted only if the interpolant is
    // as accurate as the nodes.
    const Eigen::VectorXd gap =
      (h / 16.0) * (D::d1 * k1 + D::d3 * k3 + D::d4 * k4 + D::d5 * k5 + D::d6 * k6 + D::d7 * k7);
    double step_norm = 0.0;
    double dense_norm = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      step_norm += (err[i] / sc) * (err[i] / sc);
      dense_norm += (gap[i] / sc) * (gap[i] / sc);
    }
    step_norm = std::sqrt(step_norm / n);
    dense_norm = std::sqrt(dense_norm / n);
    const double norm = std::max(step_norm, dense_norm);
    if (!std::isfinite(norm))
      throw StepUnderflowError("non-finite error estimate at t = " + std::to_string(rhs.to_t(x)));
    auto factor = [&] {
      if (norm == 0.0)
        return 5.0;
      return 0.9 * std::min(step_norm == 0.0 ? 5.0 : std::pow(step_norm, -0.2),
                            dense_norm == 0.0 ? 5.0 : std::pow(dense_norm, -0.25));
    };

    if (norm <= 1.0) {
      x = x_new;
      y = y_new;
      k1 = k7;
      times.push_back(last ? t_end : rhs.to_t(x));
      states.push_back(y);
      slopes.push_back(k1);
      h *= std::clamp(factor(), 1.0, 5.0);
    } else {
      h *= std::clamp(factor(), 0.2, 1.0);
    }
  }

  if (direction < 0.0) {
    std::reverse(times.begin(), times.end());
    std::reverse(states.begin(), states.end());
    std::reverse(slopes.begin(), slopes.end());
  }
  return Trajectory(fde.alpha(), opts.variable, std::move(times), std::move(states), std::move(slopes));
}

/// Solves outward from ic.t0 to both ends of `span` and joins the halves.
inline Trajectory solve_ivp_over(const SequentialFde& fde,
                                 const InitialCondition& ic,
                                 Interval span,
                                 const SolverOptions& opts = {})
{
  validate(fde, ic);
  if (!(span.lo <= ic.t0 && ic.t0 <= span.hi))
    throw DomainError("t0 = " + std::to_string(ic.t0) + " outside span [" + std::to_string(span.lo) + ", " +
                      std::to_string(span.hi) + "]");
  if (span.lo == ic.t0)
    return solve_ivp(fde, ic, span.hi, opts);
  if (span.hi == ic.t0)
    return solve_ivp(fde, ic, span.lo, opts);

  const Trajectory back = solve_ivp(fde, ic, span.lo, opts);
  const Trajectory ahead = solve_ivp(fde, ic, span.hi, opts);

  auto times = back.times();
  auto states = back.states();
  auto slopes = back.slopes();
  // back ends at t0 and ahead starts there; keep a single copy of that node.
  times.insert(times.end(), ahead.times().begin() + 1, ahead.times().end());
  states.insert(states.end(), ahead.states().begin() + 1, ahead.states().end());
  slopes.insert(slopes.end(), ahead.slopes().begin() + 1, ahead.slopes().end());
  return Trajectory(fde.alpha(), opts.variable, std::move(times), std::move(states), std::move(slopes));
}

/// First-order problem T y + p y = q, y(t0) = y0, by the integrating factor:
///   y(t) = e^{-mu(t)} [ y0 + int_{t0}^t e^{mu(x)} x^{alpha-1} q(x) dx ],
///   mu(t) = int_{t0}^t x^{alpha-1} p(x) dx.
inline double solve_first_order_closed_form(const Expr& p,
                                            const Expr& q,
                                            AlphaOrder alpha,
                                            double t0,
                                            double y0,
                                            double t,
                                            const QuadratureOptions& quad = { 1e-13, 1e-12, 20000 })
{
  if (!(t0 > 0.0) || !(t > 0.0))
    throw DomainError("closed form needs t0 > 0 and t > 0");
  if (t == t0)
    return y0;

  const RealFunction p_fn(p);
  auto mu = [&](double x) { return i_alpha_signed(p_fn, alpha, t0, x, quad); };

  double forced = 0.0;
  if (!q.is_zero()) {
    const RealFunction weighted([&](double x) { return std::exp(mu(x)) * q.eval(x); });
    forced = i_alpha_signed(weighted, alpha, t0, t, quad);
  }
  return std::exp(-mu(t)) * (y0 + forced);
}

struct EquationResidual
{
  /// T^n y + sum p_k T^k y - q at the probe point.
  double equation = 0.0;
  /// max_k |T(x_k) - x_{k+1}| over the chain of state components.
  double chain = 0.0;
  double q_value = 0.0;
};

/// Substitutes a trajectory back into the equation at t. Each level T^k y is
/// the conformable derivative of the dense output of level k-1, so both the
/// equation and the chain x_{k+1} = T x_k are checked.
inline EquationResidual equation_residual(const SequentialFde& fde, const Trajectory& traj, double t)
{
  const int n = fde.order();
  const Eigen::VectorXd x = traj.state_at(t);
  EquationResidual r;
  for (int k = 0; k + 1 < n; ++k) {
    const double d = t_alpha_reduction(traj.component_function(k), fde.alpha(), t);
    r.chain = std::max(r.chain, std::abs(d - x[k + 1]));
  }
  const double top = t_alpha_reduction(traj.component_function(n - 1), fde.alpha(), t);
  double lhs = top;
  for (int k = 0; k < n; ++k)
    lhs += fde.p()[k].eval(t) * x[k];
  r.q_value = fde.q().eval(t);
  r.equation = lhs - r.q_value;
  return r;
}

} // namespace cfde

#endif // CFDE_FDE_HPP
