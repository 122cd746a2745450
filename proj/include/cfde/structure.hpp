#ifndef CFDE_STRUCTURE_HPP
#define CFDE_STRUCTURE_HPP

#include <cmath>
#include <future>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cfde/calculus.hpp"
#include "cfde/errors.hpp"
#include "cfde/fde.hpp"
#include "cfde/trajectory.hpp"

namespace cfde {

/// alpha-Wronskian matrix at t: entry (k, j) is T^k y_j(t).
struct WronskianSample
{
  double t = 0.0;
  Eigen::MatrixXd matrix;
  double det = 0.0;
};

struct FundamentalSet
{
  SequentialFde fde;
  double t0 = 0.0;
  /// trajectories[j] starts from the j-th standard basis vector at t0.
  std::vector<Trajectory> trajectories;
  double w_at_t0 = 0.0;
};

/// Smallest-to-largest pivot magnitude below which a matrix counts as singular.
inline constexpr double singular_pivot_ratio = 1e-12;

namespace detail {

inline void require_square_set(std::span<const Trajectory> trajs)
{
  if (trajs.empty())
    throw PreconditionError("need at least one trajectory");
  const int n = trajs.front().order();
  if (static_cast<int>(trajs.size()) != n)
    throw PreconditionError("need " + std::to_string(n) + " trajectories for an order-" + std::to_string(n) +
                            " equation, got " + std::to_string(trajs.size()));
  for (const auto& tr : trajs)
    if (tr.order() != n)
      throw PreconditionError("trajectories disagree on the equation order");
}

} // namespace detail

/// Reads the Wronskian matrix straight from the trajectories' states; the
/// state vector already carries every iterated derivative.
inline WronskianSample wronskian_at(std::span<const Trajectory> trajs, double t)
{
  detail::require_square_set(trajs);
  const auto n = static_cast<Eigen::Index>(trajs.size());
  WronskianSample w;
  w.t = t;
  w.matrix.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    w.matrix.col(j) = trajs[j].state_at(t);
  w.det = w.matrix.partialPivLu().determinant();
  return w;
}

/// det W(t) as a function of t over the common range of the trajectories.
inline RealFunction wronskian_function(std::span<const Trajectory> trajs)
{
  detail::require_square_set(trajs);
  double lo = trajs.front().t_front();
  double hi = trajs.front().t_back();
  for (const auto& tr : trajs) {
    lo = std::max(lo, tr.t_front());
    hi = std::min(hi, tr.t_back());
  }
  std::vector<Trajectory> copy(trajs.begin(), trajs.end());
  return RealFunction([copy = std::move(copy)](double t) { return wronskian_at(copy, t).det; }, lo, hi);
}

/// Abel's identity: W(t) = W(t0) exp(-int_{t0}^t x^(alpha-1) p_{n-1}(x) dx).
inline double abel_predict(const SequentialFde& fde,
                           double w0,
                           double t0,
                           double t,
                           const QuadratureOptions& quad = { 1e-13, 1e-12, 20000 })
{
  const auto dom = fde.domain();
  if (!dom.contains_open(t0) || !dom.contains_open(t))
    throw DomainError("abel_predict needs t0 and t inside the open domain");
  if (t == t0)
    return w0;
  const RealFunction top(fde.p().back());
  return w0 * std::exp(-i_alpha_signed(top, fde.alpha(), t0, t, quad));
}

/// Solves the n canonical problems T^k y(t0) = delta_jk over `span`.
inline FundamentalSet build_fundamental_set(const SequentialFde& fde,
                                            double t0,
                                            Interval span,
                                            const SolverOptions& opts = {},
                                            bool parallel = true)
{
  if (!fde.homogeneous())
    throw PreconditionError("fundamental sets are built for homogeneous equations (q must be 0)");
  const auto dom = fde.domain();
  if (!dom.contains_open(span.lo) || !dom.contains_open(span.hi) || span.lo > span.hi)
    throw DomainError("span must lie inside the open domain");
  if (!span.contains_closed(t0))
    throw DomainError("t0 = " + std::to_string(t0) + " outside span");

  const int n = fde.order();
  auto solve_one = [&fde, t0, span, &opts, n](int j) {
    InitialCondition ic{ t0, std::vector<double>(n, 0.0) };
    ic.gamma[j] = 1.0;
    return solve_ivp_over(fde, ic, span, opts);
  };

  std::vector<Trajectory> trajs;
  trajs.reserve(n);
  if (parallel && n > 1) {
    std::vector<std::future<Trajectory>> jobs;
    for (int j = 0; j < n; ++j)
      jobs.push_back(std::async(std::launch::async, solve_one, j));
    for (auto& job : jobs)
      trajs.push_back(job.get());
  } else {
    for (int j = 0; j < n; ++j)
      trajs.push_back(solve_one(j));
  }

  const double w0 = wronskian_at(trajs, t0).det;
  if (std::abs(w0 - 1.0) > 1e-6)
    throw FundamentalityError("Wronskian at t0 is " + std::to_string(w0) + ", expected 1");
  return FundamentalSet{ fde, t0, std::move(trajs), w0 };
}

struct FundamentalityCheck
{
  bool fundamental = false;
  /// det divided by the product of each row's largest magnitude.
  double scaled_det = 0.0;
  WronskianSample sample;
};

/// Nonzero Wronskian at a single probe point settles fundamentality; Abel's
/// identity rules out a zero elsewhere.
inline FundamentalityCheck is_fundamental(std::span<const Trajectory> trajs, double t_probe, double threshold = 1e-10)
{
  FundamentalityCheck check;
  check.sample = wronskian_at(trajs, t_probe);
  double row_scale = 1.0;
  for (Eigen::Index k = 0; k < check.sample.matrix.rows(); ++k)
    row_scale *= check.sample.matrix.row(k).cwiseAbs().maxCoeff();
  check.scaled_det = row_scale > 0.0 ? check.sample.det / row_scale : 0.0;
  check.fundamental = std::abs(check.scaled_det) > threshold;
  return check;
}

/// Wronskian at several points, for diagnostics.
inline std::vector<WronskianSample> wronskian_scan(std::span<const Trajectory> trajs, std::span<const double> points)
{
  std::vector<WronskianSample> out;
  out.reserve(points.size());
  for (double t : points)
    out.push_back(wronskian_at(trajs, t));
  return out;
}

/// Coefficients c with sum_j c_j T^k y_j(t0) = gamma_k, by pivoted LU.
inline std::vector<double> fit_coefficients(std::span<const Trajectory> trajs, const InitialCondition& target)
{
  const auto w = wronskian_at(trajs, target.t0);
  const auto n = w.matrix.rows();
  if (static_cast<Eigen::Index>(target.gamma.size()) != n)
    throw PreconditionError("target has " + std::to_string(target.gamma.size()) + " values, expected " +
                            std::to_string(n));

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(w.matrix);
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double largest = pivots.maxCoeff();
  if (!(largest > 0.0) || pivots.minCoeff() < singular_pivot_ratio * largest)
    throw SingularSystemError("Wronskian matrix at t0 = " + std::to_string(target.t0) +
                              " is numerically singular; the set is not fundamental");

  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(target.gamma.data(), n);
  const Eigen::VectorXd c = lu.solve(rhs);
  return { c.data(), c.data() + c.size() };
}

inline std::vector<double> fit_coefficients(const FundamentalSet& set, const InitialCondition& target)
{
  return fit_coefficients(set.trajectories, target);
}

/// sum_j c_j y_j(t), plus y_p(t) when a particular solution is given.
inline double general_solution(const FundamentalSet& set,
                               std::span<const double> c,
                               const Trajectory* particular,
                               double t)
{
  if (c.size() != set.trajectories.size())
    throw PreconditionError("need one coefficient per basis solution");
  double y = particular ? particular->value_at(t) : 0.0;
  for (std::size_t j = 0; j < c.size(); ++j)
    y += c[j] * set.trajectories[j].value_at(t);
  return y;
}

struct NonhomogeneousSolution
{
  /// y_p + sum c_j y_j as one trajectory.
  Trajectory assembled;
  FundamentalSet set;
  /// Solution with zero initial data at t0.
  Trajectory particular;
  std::vector<double> c;
};

/// Builds the solution of a forced problem from a particular solution and a
/// fundamental set of the homogeneous part.
inline NonhomogeneousSolution solve_nonhomogeneous(const SequentialFde& fde,
                                                   const InitialCondition& ic,
                                                   Interval span,
                                                   const SolverOptions& opts = {})
{
  if (fde.homogeneous())
    throw PreconditionError("q is zero; use the homogeneous path (build_fundamental_set + fit_coefficients)");
  validate(fde, ic);

  const int n = fde.order();
  Trajectory particular = solve_ivp_over(fde, InitialCondition{ ic.t0, std::vector<double>(n, 0.0) }, span, opts);
  FundamentalSet set = build_fundamental_set(fde.homogeneous_part(), ic.t0, span, opts);

  // The particular solution's data at t0 is zero, so the target is gamma itself.
  InitialCondition target = ic;
  const Eigen::VectorXd yp0 = particular.state_at(ic.t0);
  for (int k = 0; k < n; ++k)
    target.gamma[k] -= yp0[k];
  std::vector<double> c = fit_coefficients(set, target);

  std::vector<Trajectory> parts = set.trajectories;
  parts.push_back(particular);
  std::vector<double> weights = c;
  weights.push_back(1.0);
  Trajectory assembled = Trajectory::combine(parts, weights);

  return { std::move(assembled), std::move(set), std::move(particular), std::move(c) };
}

} // namespace cfde

#endif // CFDE_STRUCTURE_HPP
