#ifndef CFDE_TRAJECTORY_HPP
#define CFDE_TRAJECTORY_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cfde/calculus.hpp"
#include "cfde/errors.hpp"

namespace cfde {

/// Independent variable the solver stepped in.
enum class IntegrationVariable
{
  /// s = t^alpha / alpha, where T_alpha is d/ds.
  s,
  /// t itself, with the t^(alpha-1) factor kept in the right-hand side.
  t,
};

/// Solution of a companion system on an increasing grid of node times.
///
/// Node i carries the state X = [y, T y, ..., T^(n-1) y] and its derivative
/// with respect to the integration variable; between nodes the state is a
/// cubic Hermite interpolant in that variable.
class Trajectory
{
public:
  Trajectory(AlphaOrder alpha,
             IntegrationVariable variable,
             std::vector<double> times,
             std::vector<Eigen::VectorXd> states,
             std::vector<Eigen::VectorXd> slopes)
    : alpha_(alpha)
    , variable_(variable)
    , times_(std::move(times))
    , states_(std::move(states))
    , slopes_(std::move(slopes))
  {
    if (times_.empty() || times_.size() != states_.size() || times_.size() != slopes_.size())
      throw PreconditionError("trajectory needs matching, non-empty node arrays");
    for (std::size_t i = 1; i < times_.size(); ++i)
      if (!(times_[i] > times_[i - 1]))
        throw PreconditionError("trajectory grid must be strictly increasing");
    const auto n = states_.front().size();
    for (std::size_t i = 0; i < states_.size(); ++i)
      if (states_[i].size() != n || slopes_[i].size() != n)
        throw PreconditionError("trajectory states must share one dimension");
    abscissae_.reserve(times_.size());
    for (double t : times_)
      abscissae_.push_back(to_x(t));
  }

  AlphaOrder alpha() const noexcept { return alpha_; }
  IntegrationVariable variable() const noexcept { return variable_; }
  int order() const noexcept { return static_cast<int>(states_.front().size()); }
  std::size_t size() const noexcept { return times_.size(); }

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<Eigen::VectorXd>& states() const noexcept { return states_; }
  const std::vector<Eigen::VectorXd>& slopes() const noexcept { return slopes_; }

  double t_front() const noexcept { return times_.front(); }
  double t_back() const noexcept { return times_.back(); }
  bool covers(double t) const noexcept { return t >= t_front() && t <= t_back(); }

  /// Full state at t. Node times return the stored state unchanged.
  Eigen::VectorXd state_at(double t) const
  {
    const auto [i, theta, width] = locate(t);
    if (theta == 0.0)
      return states_[i];
    if (theta == 1.0)
      return states_[i + 1];
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + theta;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * states_[i] + (h10 * width) * slopes_[i] + h01 * states_[i + 1] + (h11 * width) * slopes_[i + 1];
  }

  /// Derivative of the interpolant with respect to the integration variable.
  Eigen::VectorXd slope_at(double t) const
  {
    const auto [i, theta, width] = locate(t);
    if (theta == 0.0)
      return slopes_[i];
    if (theta == 1.0)
      return slopes_[i + 1];
    const double t2 = theta * theta;
    const double d00 = 6 * t2 - 6 * theta;
    const double d10 = 3 * t2 - 4 * theta + 1;
    const double d01 = -6 * t2 + 6 * theta;
    const double d11 = 3 * t2 - 2 * theta;
    return (d00 / width) * states_[i] + d10 * slopes_[i] + (d01 / width) * states_[i + 1] + d11 * slopes_[i + 1];
  }

  /// k-th state component, i.e. T_alpha^k y(t).
  double component_at(int k, double t) const { return state_at(t)[k]; }
  double value_at(double t) const { return component_at(0, t); }

  /// Dense output of one component as a RealFunction on [t_front, t_back].
  RealFunction component_function(int k) const
  {
    if (k < 0 || k >= order())
      throw PreconditionError("state component " + std::to_string(k) + " out of range");
    return RealFunction([self = *this, k](double t) { return self.component_at(k, t); }, t_front(), t_back());
  }

  /// The same trajectory with every state multiplied by `factor`.
  Trajectory scaled(double factor) const
  {
    auto states = states_;
    auto slopes = slopes_;
    for (auto& s : states)
      s *= factor;
    for (auto& s : slopes)
      s *= factor;
    return Trajectory(alpha_, variable_, times_, std::move(states), std::move(slopes));
  }

  /// Node-exact linear combination sum_j coeffs[j] * parts[j] on the common
  /// time range. The result's grid is the union of the inputs' grids, so each
  /// of its Hermite pieces is the exact sum of the inputs' pieces.
  static Trajectory combine(std::span<const Trajectory> parts, std::span<const double> coeffs)
  {
    if (parts.empty() || parts.size() != coeffs.size())
      throw PreconditionError("combine needs one coefficient per trajectory");
    const auto& head = parts.front();
    double lo = head.t_front();
    double hi = head.t_back();
    for (const auto& p : parts) {
      if (!(p.alpha() == head.alpha()) || p.variable() != head.variable() || p.order() != head.order())
        throw PreconditionError("combined trajectories must share alpha, variable and order");
      lo = std::max(lo, p.t_front());
      hi = std::min(hi, p.t_back());
    }
    if (lo > hi)
      throw DomainError("trajectories have no common time range");

    std::vector<double> grid;
    for (const auto& p : parts)
      for (double t : p.times())
        if (t >= lo && t <= hi)
          grid.push_back(t);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<Eigen::VectorXd> states(grid.size(), Eigen::VectorXd::Zero(head.order()));
    std::vector<Eigen::VectorXd> slopes(grid.size(), Eigen::VectorXd::Zero(head.order()));
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = 0; j < parts.size(); ++j) {
        states[i] += coeffs[j] * parts[j].state_at(grid[i]);
        slopes[i] += coeffs[j] * parts[j].slope_at(grid[i]);
      }
    return Trajectory(head.alpha(), head.variable(), std::move(grid), std::move(states), std::move(slopes));
  }

private:
  double to_x(double t) const { return variable_ == IntegrationVariable::s ? alpha_.to_s(t) : t; }

  struct Location
  {
    std::size_t index;
    double theta;
    double width;
  };

  Location locate(double t) const
  {
    if (!covers(t))
      throw DomainError("t = " + std::to_string(t) + " outside trajectory range [" + std::to_string(t_front()) +
                        ", " + std::to_string(t_back()) + "]");
    if (times_.size() == 1)
      return { 0, 0.0, 0.0 };
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t i = (it == times_.begin()) ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
    if (i + 1 >= times_.size())
      i = times_.size() - 2;
    if (t == times_[i])
      return { i, 0.0, abscissae_[i + 1] - abscissae_[i] };
    if (t == times_[i + 1])
      return { i, 1.0, abscissae_[i + 1] - abscissae_[i] };
    const double width = abscissae_[i + 1] - abscissae_[i];
    const double theta = std::clamp((to_x(t) - abscissae_[i]) / width, 0.0, 1.0);
    return { i, theta, width };
  }

  AlphaOrder alpha_;
  IntegrationVariable variable_;
  std::vector<double> times_;
  std::vector<double> abscissae_;
  std::vector<Eigen::VectorXd> states_;
  std::vector<Eigen::VectorXd> slopes_;
};

} // namespace cfde

#endif // CFDE_TRAJECTORY_HPP
