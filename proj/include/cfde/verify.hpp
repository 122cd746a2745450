#ifndef CFDE_VERIFY_HPP
#define CFDE_VERIFY_HPP

// Seeded randomized property suites. Each property reports the worst
// residual it saw against its tolerance.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "cfde/calculus.hpp"
#include "cfde/fde.hpp"
#include "cfde/structure.hpp"

namespace cfde::verify {

struct PropertyResult
{
  std::string suite;
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// Failure context (the exception text, or the worst case).
  std::string detail;
};

namespace detail {

/// Tracks the worst residual of one property. Residuals are already
/// normalised by whatever scale the property uses.
class Tracker
{
public:
  Tracker(std::string suite, std::string name, double tolerance)
  {
    result_.suite = std::move(suite);
    result_.name = std::move(name);
    result_.tolerance = tolerance;
  }

  void observe(double residual, const std::string& where = {})
  {
    if (!std::isfinite(residual))
      residual = std::numeric_limits<double>::infinity();
    if (residual >= result_.max_residual || !seen_) {
      result_.max_residual = residual;
      result_.detail = where;
    }
    seen_ = true;
  }

  /// Boolean checks count as residual 0 (holds) or infinity (violated).
  void require(bool holds, const std::string& where = {})
  {
    observe(holds ? 0.0 : std::numeric_limits<double>::infinity(), where);
  }

  PropertyResult finish()
  {
    result_.pass = seen_ && result_.max_residual <= result_.tolerance;
    return result_;
  }

  PropertyResult fail(const std::string& why)
  {
    result_.pass = false;
    result_.max_residual = std::numeric_limits<double>::infinity();
    result_.detail = why;
    return result_;
  }

private:
  PropertyResult result_;
  bool seen_ = false;
};

inline PropertyResult run_property(const std::string& suite,
                                   const std::string& name,
                                   double tolerance,
                                   const std::function<void(Tracker&)>& body)
{
  Tracker tracker(suite, name, tolerance);
  try {
    body(tracker);
  } catch (const std::exception& err) {
    return tracker.fail(err.what());
  }
  return tracker.finish();
}

inline double rel(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

inline std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline SequentialFde make_fde(double alpha, const std::vector<std::string>& p, const std::string& q, Interval dom)
{
  std::vector<Expr> coeffs;
  for (const auto& s : p)
    coeffs.push_back(Expr::parse(s));
  return SequentialFde(AlphaOrder(alpha), std::move(coeffs), Expr::parse(q), dom);
}

inline std::string num(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "(%.17g)", v);
  return buf;
}

/// Smooth bounded coefficient c0 + c1 cos(w t).
inline std::string random_coefficient(std::mt19937_64& rng, double base, double wobble)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return num(base * u(rng)) + " + " + num(wobble * u(rng)) + "*cos(" + num(1.0 + 0.5 * u(rng)) + "*t)";
}

inline SequentialFde random_homogeneous(std::mt19937_64& rng, int n, double alpha)
{
  std::vector<std::string> p;
  for (int k = 0; k < n; ++k)
    p.push_back(random_coefficient(rng, 0.8, 0.4));
  return make_fde(alpha, p, "0", { 0.5, 5.0 });
}

struct CorpusFunction
{
  const char* text;
};

// Smooth functions on t >= 0.5 used by the identity properties.
inline const std::vector<const char*>& function_corpus()
{
  static const std::vector<const char*> corpus = {
    "t^2",          "sin(t)",         "exp(t/4)",          "ln(t)",         "1/(1 + t)",
    "t^0.5*cos(t)", "t^3 - 2*t + 1",  "exp(-t)*sin(2*t)",  "sqrt(1 + t^2)", "cos(t)/(2 + sin(t))",
  };
  return corpus;
}

} // namespace detail

// ---------------------------------------------------------------------------

inline std::vector<PropertyResult> calculus_suite(std::uint64_t seed)
{
  using namespace detail;
  const std::string suite = "calculus";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> t_dist(0.5, 10.0);
  std::vector<PropertyResult> out;

  out.push_back(run_property(suite, "derivative-oracle-table", 1e-6, [&](Tracker& tr) {
    struct Entry
    {
      std::string name;
      std::function<double(double, double)> f;
      std::function<double(double, double)> df;
    };
    std::vector<Entry> table;
    for (double p : { -1.0, 0.5, 2.0, 3.0 })
      table.push_back({ "t^" + fmt(p), [p](double, double t) { return std::pow(t, p); },
                        [p](double a, double t) { return p * std::pow(t, p - a); } });
    table.push_back({ "sin(t^a/a)", [](double a, double t) { return std::sin(std::pow(t, a) / a); },
                      [](double a, double t) { return std::cos(std::pow(t, a) / a); } });
    table.push_back({ "cos(t^a/a)", [](double a, double t) { return std::cos(std::pow(t, a) / a); },
                      [](double a, double t) { return -std::sin(std::pow(t, a) / a); } });
    table.push_back({ "exp(t^a/a)", [](double a, double t) { return std::exp(std::pow(t, a) / a); },
                      [](double a, double t) { return std::exp(std::pow(t, a) / a); } });
    for (double a : { 0.3, 0.5, 0.8 })
      for (int k = 0; k < 10; ++k) {
        const double t = t_dist(rng);
        for (const auto& e : table) {
          const RealFunction f([&](double x) { return e.f(a, x); });
          const double want = e.df(a, t);
          const std::string where = e.name + " alpha=" + fmt(a) + " t=" + fmt(t);
          tr.observe(rel(t_alpha_limit(f, AlphaOrder(a), t), want), "limit " + where);
          tr.observe(rel(t_alpha_reduction(f, AlphaOrder(a), t), want), "reduction " + where);
        }
      }
  }));

  out.push_back(run_property(suite, "limit-vs-reduction", 1e-6, [&](Tracker& tr) {
    std::uniform_real_distribution<double> a_dist(0.1, 1.0);
    for (const char* text : function_corpus())
      for (int k = 0; k < 10; ++k) {
        const AlphaOrder a(a_dist(rng));
        const double t = t_dist(rng);
        const RealFunction f(Expr::parse(text));
        const double red = t_alpha_reduction(f, a, t);
        const double lim = t_alpha_limit(f, a, t);
        tr.observe(std::abs(lim - red) / (1.0 + std::abs(red)), std::string(text) + " t=" + fmt(t));
      }
  }));

  // Linearity, product, quotient and chain over random (f, g, alpha, t).
  const auto& corpus = function_corpus();
  std::uniform_int_distribution<std::size_t> pick(0, corpus.size() - 1);
  std::uniform_real_distribution<double> a_dist(0.2, 1.0);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_real_distribution<double> small_t(0.5, 5.0);
  for (Identity kind : { Identity::linearity, Identity::product, Identity::quotient, Identity::chain }) {
    out.push_back(run_property(suite, std::string("identity-") + std::string(identity_name(kind)), 1e-6, [&](Tracker& tr) {
      for (int k = 0; k < 50; ++k) {
        const char* f_text = corpus[pick(rng)];
        std::string g_text = corpus[pick(rng)];
        // chain and quotient need g(t) > 0 at the sample
        if (kind == Identity::chain || kind == Identity::quotient)
          g_text = "2 + " + g_text + "/(1 + abs(" + g_text + "))";
        IdentityOptions opts;
        opts.a = coef(rng);
        opts.b = coef(rng);
        const AlphaOrder a(a_dist(rng));
        const double t = small_t(rng);
        const auto report =
          verify_identity(kind, RealFunction(Expr::parse(f_text)), RealFunction(Expr::parse(g_text)), a, { t }, opts);
        tr.observe(report.max_rel_residual, std::string(f_text) + " / " + g_text + " t=" + fmt(t));
      }
    }));
  }

  out.push_back(run_property(suite, "identity-parts", 1e-6, [&](Tracker& tr) {
    const auto fixed = verify_identity(Identity::parts, RealFunction(Expr::parse("t")), RealFunction(Expr::parse("sin(t)")),
                                       AlphaOrder(0.5), { 1.0, 3.0 });
    tr.observe(fixed.max_abs_residual, "f=t g=sin(t) on [1,3]");
    for (int k = 0; k < 10; ++k) {
      const char* f_text = corpus[pick(rng)];
      const char* g_text = corpus[pick(rng)];
      const double lo = small_t(rng);
      const double hi = lo + 0.5 + small_t(rng);
      const auto r = verify_identity(Identity::parts, RealFunction(Expr::parse(f_text)),
                                     RealFunction(Expr::parse(g_text)), AlphaOrder(a_dist(rng)), { lo, hi });
      tr.observe(r.max_rel_residual, std::string(f_text) + " / " + g_text);
    }
  }));

  for (Identity kind : { Identity::ftc_forward, Identity::ftc_backward }) {
    out.push_back(run_property(suite, std::string(identity_name(kind)), 1e-5, [&](Tracker& tr) {
      for (const char* text : corpus)
        for (double a : { 0.3, 0.6, 0.9 }) {
          IdentityOptions opts;
          opts.lower_limit = 0.5;
          opts.tolerance = 1e-5;
          const double t = 0.75 + 4.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
          const auto r = verify_identity(kind, RealFunction(Expr::parse(text)), std::nullopt, AlphaOrder(a), { t }, opts);
          tr.observe(r.max_rel_residual, std::string(text) + " alpha=" + fmt(a) + " t=" + fmt(t));
        }
    }));
  }

  return out;
}

// ---------------------------------------------------------------------------

inline std::vector<PropertyResult> solver_suite(std::uint64_t seed)
{
  using namespace detail;
  const std::string suite = "solver";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<PropertyResult> out;

  out.push_back(run_property(suite, "first-order-closed-form", 1e-6, [&](Tracker& tr) {
    const double alphas[] = { 0.3, 0.5, 0.8, 1.0 };
    for (int k = 0; k < 20; ++k) {
      const double alpha = alphas[k % 4];
      const std::string p = random_coefficient(rng, 1.0, 0.5);
      const std::string q = num(u(rng)) + "*t + " + num(u(rng));
      const auto fde = make_fde(alpha, { p }, q, { 0.5, 6.0 });
      const double y0 = u(rng);
      const auto traj = solve_ivp(fde, { 1.0, { y0 } }, 5.0);
      for (double t : { 1.5, 2.3, 3.1, 4.2, 5.0 }) {
        const double want = solve_first_order_closed_form(fde.p()[0], fde.q(), fde.alpha(), 1.0, y0, t);
        tr.observe(std::abs(traj.value_at(t) - want) / (1.0 + std::abs(want)), "problem " + std::to_string(k));
      }
    }
  }));

  out.push_back(run_property(suite, "decay-instance", 1e-7, [&](Tracker& tr) {
    const auto fde = make_fde(0.5, { "1" }, "0", { 0.5, 10.0 });
    tr.observe(std::abs(solve_ivp(fde, { 1.0, { 1.0 } }, 4.0).value_at(4.0) - std::exp(-2.0)));
  }));

  out.push_back(run_property(suite, "oscillator-oracle", 1e-6, [&](Tracker& tr) {
    const auto fde = make_fde(0.5, { "1", "0" }, "0", { 0.5, 10.0 });
    const auto traj = solve_ivp(fde, { 1.0, { 1.0, 0.0 } }, 9.0);
    for (int i = 0; i <= 400; ++i) {
      const double t = 1.0 + 8.0 * i / 400.0;
      tr.observe(std::abs(traj.value_at(t) - std::cos(2.0 * std::sqrt(t) - 2.0)), "t=" + fmt(t));
    }
  }));

  out.push_back(run_property(suite, "equation-residual", 1e-4, [&](Tracker& tr) {
    for (int n : { 1, 2, 3 })
      for (double alpha : { 0.4, 0.8 }) {
        std::vector<std::string> p;
        for (int k = 0; k < n; ++k)
          p.push_back(random_coefficient(rng, 0.8, 0.4));
        const auto fde = make_fde(alpha, p, random_coefficient(rng, 1.0, 1.0), { 0.5, 5.0 });
        std::vector<double> init;
        for (int k = 0; k < n; ++k)
          init.push_back(u(rng));
        const auto traj = solve_ivp(fde, { 1.0, init }, 4.0);
        for (int i = 1; i <= 10; ++i) {
          const double t = 1.0 + 3.0 * i / 11.0;
          const auto r = equation_residual(fde, traj, t);
          tr.observe(std::abs(r.equation) / (1.0 + std::abs(r.q_value)), "n=" + std::to_string(n) + " t=" + fmt(t));
          tr.observe(r.chain, "chain n=" + std::to_string(n) + " t=" + fmt(t));
        }
      }
  }));

  out.push_back(run_property(suite, "uniqueness-probe", 1e-7, [&](Tracker& tr) {
    for (int k = 0; k < 4; ++k) {
      const auto fde = make_fde(0.6, { random_coefficient(rng, 1.0, 0.5), random_coefficient(rng, 0.5, 0.3) },
                                random_coefficient(rng, 1.0, 0.5), { 0.5, 5.0 });
      const InitialCondition ic{ 1.0, { u(rng), u(rng) } };
      const auto a = solve_ivp(fde, ic, 4.5, SolverOptions{ 1e-9, 1e-12 });
      const auto b = solve_ivp(fde, ic, 4.5, SolverOptions{ 1e-10, 1e-13 });
      tr.observe(std::abs(a.value_at(4.5) - b.value_at(4.5)), "problem " + std::to_string(k));
    }
  }));

  out.push_back(run_property(suite, "classical-reduction", 1e-7, [&](Tracker& tr) {
    struct Case
    {
      std::vector<std::string> p;
      std::string q;
      std::vector<double> init;
      std::function<double(double)> exact;
    };
    const std::vector<Case> corpus = {
      { { "1", "0" }, "0", { 1, 0 }, [](double t) { return std::cos(t - 1); } },
      { { "-1", "0" }, "0", { 1, 0 }, [](double t) { return std::cosh(t - 1); } },
      { { "-1" }, "0", { 1 }, [](double t) { return std::exp(t - 1); } },
      { { "2*t" }, "0", { 1 }, [](double t) { return std::exp(1 - t * t); } },
      { { "2", "3" }, "0", { 0, 1 }, [](double t) { return std::exp(1 - t) - std::exp(2 - 2 * t); } },
      { { "-1/t^2", "1/t" }, "0", { 1, 1 }, [](double t) { return t; } },
      { { "-1/t^2", "1/t" }, "0", { 1, -1 }, [](double t) { return 1 / t; } },
      { { "0", "0", "0" }, "6", { 0, 0, 0 }, [](double t) { return std::pow(t - 1, 3); } },
      { { "1", "0" }, "1", { 0, 0 }, [](double t) { return 1 - std::cos(t - 1); } },
      { { "4", "0", "0", "0" }, "0", { 1, 0, 0, 0 },
        [](double t) { return std::cos(t - 1) * std::cosh(t - 1); } },
    };
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto& c = corpus[i];
      const auto fde = make_fde(1.0, c.p, c.q, { 0.5, 5.0 });
      const auto traj = solve_ivp(fde, { 1.0, c.init }, 4.0);
      for (double t : { 1.3, 2.0, 2.9, 3.6, 4.0 })
        tr.observe(rel(traj.value_at(t), c.exact(t)), "case " + std::to_string(i) + " t=" + fmt(t));
    }
  }));

  out.push_back(run_property(suite, "superposition", 1e-4, [&](Tracker& tr) {
    const auto fde = random_homogeneous(rng, 2, 0.6);
    const auto y1 = solve_ivp(fde, { 1.0, { u(rng), u(rng) } }, 4.0);
    const auto y2 = solve_ivp(fde, { 1.0, { u(rng), u(rng) } }, 4.0);
    const std::vector<Trajectory> parts = { y1, y2 };
    const std::vector<double> c = { 3.0 * u(rng), 3.0 * u(rng) };
    const auto combo = Trajectory::combine(parts, c);
    for (int i = 1; i <= 10; ++i) {
      const double t = 1.0 + 3.0 * i / 11.0;
      tr.observe(std::abs(equation_residual(fde, combo, t).equation), "t=" + fmt(t));
    }
  }));

  return out;
}

// ---------------------------------------------------------------------------

inline std::vector<PropertyResult> structure_suite(std::uint64_t seed)
{
  using namespace detail;
  const std::string suite = "structure";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<PropertyResult> out;

  struct Built
  {
    SequentialFde fde;
    FundamentalSet set;
  };
  std::vector<Built> problems;
  std::string build_error;
  try {
    for (int n : { 2, 3, 4 })
      for (double alpha : { 0.4, 0.7, 1.0 }) {
        auto fde = random_homogeneous(rng, n, alpha);
        auto set = build_fundamental_set(fde, 1.5, { 1.0, 4.0 });
        problems.push_back({ std::move(fde), std::move(set) });
      }
  } catch (const std::exception& err) {
    build_error = err.what();
  }
  auto label = [](const Built& b) {
    return "n=" + std::to_string(b.fde.order()) + " alpha=" + fmt(b.fde.alpha().value());
  };
  auto guarded = [&](const std::string& name, double tol, const std::function<void(Tracker&)>& body) {
    if (!build_error.empty()) {
      Tracker tr(suite, name, tol);
      return tr.fail("fundamental set construction failed: " + build_error);
    }
    return run_property(suite, name, tol, body);
  };

  out.push_back(guarded("canonical-wronskian", 1e-9, [&](Tracker& tr) {
    for (const auto& b : problems)
      tr.observe(std::abs(wronskian_at(b.set.trajectories, b.set.t0).det - 1.0), label(b));
  }));

  out.push_back(guarded("abel-identity", 1e-6, [&](Tracker& tr) {
    for (const auto& b : problems)
      for (int i = 0; i <= 9; ++i) {
        const double t = 1.0 + 3.0 * i / 9.0;
        const double w = wronskian_at(b.set.trajectories, t).det;
        const double predicted = abel_predict(b.fde, b.set.w_at_t0, b.set.t0, t);
        tr.observe(std::abs(w - predicted) / (1.0 + std::abs(predicted)), label(b) + " t=" + fmt(t));
      }
  }));

  out.push_back(guarded("wronskian-non-vanishing", 0.0, [&](Tracker& tr) {
    for (const auto& b : problems) {
      const double first = wronskian_at(b.set.trajectories, 1.0).det;
      for (int i = 0; i <= 60; ++i) {
        const double t = 1.0 + 3.0 * i / 60.0;
        const double w = wronskian_at(b.set.trajectories, t).det;
        tr.require(w != 0.0 && std::signbit(w) == std::signbit(first), label(b) + " t=" + fmt(t));
      }
    }
  }));

  out.push_back(guarded("trace-form", 1e-4, [&](Tracker& tr) {
    for (const auto& b : problems) {
      const RealFunction w = wronskian_function(b.set.trajectories);
      const RealFunction log_w([&w](double t) { return std::log(std::abs(w(t))); }, 1.0, 4.0);
      for (double t : { 1.3, 2.0, 2.8, 3.6 }) {
        const double slope = t_alpha_reduction(log_w, b.fde.alpha(), t);
        tr.observe(std::abs(slope + b.fde.p().back().eval(t)), label(b) + " t=" + fmt(t));
      }
    }
  }));

  out.push_back(guarded("independence-round-trip", 1e-6, [&](Tracker& tr) {
    for (const auto& b : problems) {
      InitialCondition target{ 2.5, {} };
      for (int k = 0; k < b.fde.order(); ++k)
        target.gamma.push_back(2.0 * u(rng));
      const auto c = fit_coefficients(b.set, target);
      const auto direct = solve_ivp_over(b.fde, target, { 1.0, 4.0 });
      for (double t : { 1.0, 1.8, 2.5, 3.3, 4.0 }) {
        const double want = direct.value_at(t);
        tr.observe(std::abs(general_solution(b.set, c, nullptr, t) - want) / (1.0 + std::abs(want)),
                   label(b) + " t=" + fmt(t));
      }
    }
  }));

  out.push_back(guarded("dependent-set-detection", 0.0, [&](Tracker& tr) {
    for (const auto& b : problems) {
      const int n = b.fde.order();
      std::vector<Trajectory> members = b.set.trajectories;
      std::vector<double> w;
      for (int j = 0; j + 1 < n; ++j)
        w.push_back(u(rng));
      const std::vector<Trajectory> others(members.begin(), members.end() - 1);
      members.back() = Trajectory::combine(others, w);
      tr.require(!is_fundamental(members, 2.0).fundamental, "is_fundamental " + label(b));
      bool rejected = false;
      try {
        (void)fit_coefficients(members, { 2.0, std::vector<double>(n, 1.0) });
      } catch (const SingularSystemError&) {
        rejected = true;
      }
      tr.require(rejected, "fit_coefficients " + label(b));
    }
  }));

  out.push_back(run_property(suite, "nonhomogeneous-structure", 1e-6, [&](Tracker& tr) {
    for (int n : { 1, 2, 3 }) {
      std::vector<std::string> p;
      for (int k = 0; k < n; ++k)
        p.push_back(random_coefficient(rng, 0.8, 0.4));
      const auto fde = make_fde(0.7, p, random_coefficient(rng, 1.0, 1.0), { 0.5, 5.0 });
      InitialCondition ic{ 2.0, {} };
      for (int k = 0; k < n; ++k)
        ic.gamma.push_back(u(rng));
      const auto sol = solve_nonhomogeneous(fde, ic, { 1.0, 4.0 });
      const auto direct = solve_ivp_over(fde, ic, { 1.0, 4.0 });
      for (int i = 0; i <= 30; ++i) {
        const double t = 1.0 + 3.0 * i / 30.0;
        const double want = direct.value_at(t);
        tr.observe(std::abs(sol.assembled.value_at(t) - want) / (1.0 + std::abs(want)),
                   "n=" + std::to_string(n) + " t=" + fmt(t));
      }
    }
    // T^2 y + y = 1 with zero data at t0 = 1 is 1 - cos(2 sqrt t - 2).
    const auto forced = make_fde(0.5, { "1", "0" }, "1", { 0.5, 10.0 });
    const auto sol = solve_nonhomogeneous(forced, { 1.0, { 0.0, 0.0 } }, { 1.0, 9.0 });
    for (int i = 0; i <= 80; ++i) {
      const double t = 1.0 + 8.0 * i / 80.0;
      tr.observe(std::abs(sol.assembled.value_at(t) - (1.0 - std::cos(2.0 * std::sqrt(t) - 2.0))),
                 "constant forcing t=" + fmt(t));
    }
  }));

  out.push_back(run_property(suite, "homogeneous-remainder", 1e-4, [&](Tracker& tr) {
    const auto fde = make_fde(0.6, { random_coefficient(rng, 0.8, 0.4), random_coefficient(rng, 0.8, 0.4) },
                              random_coefficient(rng, 1.0, 1.0), { 0.5, 5.0 });
    const auto sol = solve_nonhomogeneous(fde, { 2.0, { u(rng), u(rng) } }, { 1.0, 4.0 });
    const std::vector<Trajectory> parts = { sol.assembled, sol.particular };
    const std::vector<double> w = { 1.0, -1.0 };
    const auto remainder = Trajectory::combine(parts, w);
    const auto homogeneous = fde.homogeneous_part();
    for (int i = 1; i <= 10; ++i) {
      const double t = 1.0 + 3.0 * i / 11.0;
      tr.observe(std::abs(equation_residual(homogeneous, remainder, t).equation), "t=" + fmt(t));
    }
  }));

  return out;
}

inline std::vector<PropertyResult> run_suite(const std::string& name, std::uint64_t seed)
{
  std::vector<PropertyResult> out;
  auto append = [&](std::vector<PropertyResult> more) { out.insert(out.end(), more.begin(), more.end()); };
  if (name == "calculus" || name == "all")
    append(calculus_suite(seed));
  if (name == "solver" || name == "all")
    append(solver_suite(seed));
  if (name == "structure" || name == "all")
    append(structure_suite(seed));
  if (out.empty())
    throw PreconditionError("unknown suite '" + name + "' (expected calculus, solver, structure or all)");
  return out;
}

} // namespace cfde::verify

#endif // CFDE_VERIFY_HPP
