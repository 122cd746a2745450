// Solves T^2 y + y = 0 with alpha = 1/2 and compares against cos(2 sqrt(t) - 2),
// then checks the Wronskian of the canonical pair against Abel's formula.

#include <cmath>
#include <cstdio>

#include "cfde/cfde.hpp"

int main()
{
  using namespace cfde;

  const SequentialFde fde(AlphaOrder(0.5), { Expr::parse("1"), Expr::parse("0") }, Expr::parse("0"), { 0.5, 10.0 });
  const Trajectory y = solve_ivp(fde, { 1.0, { 1.0, 0.0 } }, 9.0);

  std::printf("%6s %20s %20s\n", "t", "y(t)", "cos(2 sqrt t - 2)");
  for (double t = 1.0; t <= 9.0; t += 2.0)
    std::printf("%6.2f %20.15f %20.15f\n", t, y.value_at(t), std::cos(2.0 * std::sqrt(t) - 2.0));

  const FundamentalSet set = build_fundamental_set(fde, 1.0, { 1.0, 9.0 });
  std::printf("\nW(5) = %.15f, Abel predicts %.15f\n", wronskian_at(set.trajectories, 5.0).det,
              abel_predict(fde, set.w_at_t0, set.t0, 5.0));

  std::printf("T_0.5 of t^2 at 4: %.12f\n", t_alpha_reduction(RealFunction(Expr::parse("t^2")), AlphaOrder(0.5), 4.0));
  std::printf("I_0.5 of 1 on [0, 4]: %.12f\n", i_alpha(RealFunction(Expr::parse("1")), AlphaOrder(0.5), 0.0, 4.0));
}
