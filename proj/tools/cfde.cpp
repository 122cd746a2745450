// cfde: command line front end for the conformable calculus library.
//
// Exit codes: 0 ok, 1 verification failure, 2 input error, 3 numerical failure.
// CFDE_RTOL, if set, replaces the default solver relative tolerance
// (absolute tolerance follows at 1e-3 times it). Problem-file tolerances win.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfde/cfde.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_input = 2;
constexpr int exit_numerical = 3;

/// Raised for anything the caller supplied wrongly.
struct InputFailure : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

template<class F>
auto as_input(F&& body) -> decltype(body())
{
  try {
    return body();
  } catch (const cfde::Error& err) {
    throw InputFailure(err.what());
  }
}

struct Settings
{
  cfde::SolverOptions solver;
};

Settings read_settings()
{
  Settings s;
  if (const char* raw = std::getenv("CFDE_RTOL"); raw && *raw) {
    char* end = nullptr;
    const double v = std::strtod(raw, &end);
    if (end == raw || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
      throw InputFailure(std::string("CFDE_RTOL must be a positive number, got '") + raw + "'");
    s.solver.rel_tol = v;
    s.solver.abs_tol = 1e-3 * v;
  }
  return s;
}

void write_outputs(const std::vector<std::pair<fs::path, std::string>>& files)
{
  std::vector<fs::path> done;
  try {
    for (const auto& [path, text] : files) {
      cfde::write_file_atomic(path, text);
      done.push_back(path);
    }
  } catch (const cfde::Error& err) {
    for (const auto& p : done) {
      std::error_code ignored;
      fs::remove(p, ignored);
    }
    throw InputFailure(err.what());
  }
}

std::vector<double> parse_grid(const std::string& text)
{
  double lo = 0, hi = 0;
  int n = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &lo, &hi, &n, &tail) != 3 || n < 1 || !(hi >= lo))
    throw InputFailure("--grid expects lo:hi:n with lo <= hi and n >= 1, got '" + text + "'");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  if (n > 1)
    out.back() = hi;
  return out;
}

// --- deriv ---------------------------------------------------------------

struct DerivArgs
{
  std::string expr;
  double alpha = 0;
  std::vector<double> at;
  std::string grid;
  std::string method = "limit";
};

int cmd_deriv(const DerivArgs& a)
{
  std::vector<double> points = a.grid.empty() ? a.at : parse_grid(a.grid);
  if (points.empty())
    throw InputFailure("give --at or --grid");
  const auto [alpha, f] = as_input([&] {
    cfde::AlphaOrder al(a.alpha);
    cfde::RealFunction fn(cfde::Expr::parse(a.expr));
    for (double t : points) {
      if (!(t > 0.0))
        throw cfde::DomainError("points must be > 0, got " + cfde::format_number(t));
      (void)fn(t);
    }
    return std::pair{ al, fn };
  });
  cfde::CsvTable table({ "t", "T_alpha_f" });
  for (double t : points) {
    double v = 0.0;
    try {
      v = a.method == "limit" ? cfde::t_alpha_limit(f, alpha, t) : cfde::t_alpha_reduction(f, alpha, t);
    } catch (const cfde::DomainError& err) {
      throw InputFailure(std::string("f is not defined near t = ") + cfde::format_number(t) + ": " + err.what());
    }
    table.add_row({ t, v });
  }
  std::cout << table.str();
  return exit_ok;
}

// --- integ ---------------------------------------------------------------

struct IntegArgs
{
  std::string expr;
  double alpha = 0;
  double from = 0;
  double to = 0;
};

int cmd_integ(const IntegArgs& a)
{
  const auto [alpha, f] = as_input([&] {
    cfde::AlphaOrder al(a.alpha);
    if (a.from < 0.0 || a.to < a.from)
      throw cfde::DomainError("need 0 <= --from <= --to");
    return std::pair{ al, cfde::RealFunction(cfde::Expr::parse(a.expr)) };
  });
  double v = 0.0;
  try {
    v = cfde::i_alpha(f, alpha, a.from, a.to);
  } catch (const cfde::DomainError& err) {
    throw InputFailure(err.what());
  }
  std::cout << cfde::format_number(v) << '\n';
  return exit_ok;
}

// --- solve ---------------------------------------------------------------

struct OutputArgs
{
  std::string problem;
  std::string out;
  int nodes = 200;
  bool raw = false;
};

struct SolveArgs : OutputArgs
{
  bool parts = false;
};

std::vector<double> state_row(double t, const Eigen::VectorXd& state)
{
  std::vector<double> row{ t };
  row.insert(row.end(), state.data(), state.data() + state.size());
  return row;
}

int cmd_solve(const SolveArgs& a, const Settings& settings)
{
  const cfde::Problem prob = as_input([&] {
    if (!a.raw && a.nodes < 2)
      throw cfde::PreconditionError("--nodes must be at least 2");
    return cfde::load_problem_file(a.problem, settings.solver);
  });
  const int n = prob.fde.order();

  const cfde::Trajectory traj = cfde::solve_ivp_over(prob.fde, prob.ic, prob.span, prob.solver);
  const auto nodes = cfde::output_nodes(traj, prob.span, a.nodes, a.raw);

  auto header = cfde::state_header(n);
  std::optional<cfde::FundamentalSet> set;
  std::optional<cfde::Trajectory> particular;
  std::vector<double> c;
  if (a.parts) {
    if (prob.fde.homogeneous()) {
      set = cfde::build_fundamental_set(prob.fde, prob.ic.t0, prob.span, prob.solver);
      c = cfde::fit_coefficients(*set, prob.ic);
    } else {
      auto sol = cfde::solve_nonhomogeneous(prob.fde, prob.ic, prob.span, prob.solver);
      set = std::move(sol.set);
      particular = std::move(sol.particular);
      c = std::move(sol.c);
    }
    for (int j = 1; j <= n; ++j)
      header.push_back("y_" + std::to_string(j));
    if (particular)
      header.emplace_back("y_p");
  }

  cfde::CsvTable table(header);
  for (double t : nodes) {
    auto row = state_row(t, traj.state_at(t));
    if (set) {
      for (const auto& y : set->trajectories)
        row.push_back(y.value_at(t));
      if (particular)
        row.push_back(particular->value_at(t));
    }
    table.add_row(row);
  }

  std::vector<std::pair<fs::path, std::string>> files{ { a.out, table.str() } };
  if (set) {
    nlohmann::json side;
    side["t0"] = prob.ic.t0;
    side["c"] = c;
    side["w_at_t0"] = set->w_at_t0;
    std::vector<std::string> basis;
    for (int j = 1; j <= n; ++j)
      basis.push_back("y_" + std::to_string(j));
    side["basis_columns"] = basis;
    side["particular_column"] = particular ? nlohmann::json("y_p") : nlohmann::json(nullptr);
    fs::path side_path = a.out;
    side_path.replace_extension(".parts.json");
    files.emplace_back(side_path, side.dump(2) + "\n");
  }
  write_outputs(files);
  return exit_ok;
}

// --- fundset -------------------------------------------------------------

int cmd_fundset(const OutputArgs& a, const Settings& settings)
{
  const cfde::Problem prob = as_input([&] {
    if (!a.raw && a.nodes < 2)
      throw cfde::PreconditionError("--nodes must be at least 2");
    auto p = cfde::load_problem_file(a.problem, settings.solver);
    if (!p.fde.homogeneous())
      throw cfde::FieldError("q", "fundset needs a homogeneous problem (q = 0)");
    return p;
  });

  const auto set = cfde::build_fundamental_set(prob.fde, prob.ic.t0, prob.span, prob.solver);
  std::vector<double> nodes;
  if (a.raw) {
    std::set<double> all;
    for (const auto& y : set.trajectories)
      for (double t : cfde::output_nodes(y, prob.span, 0, true))
        all.insert(t);
    nodes.assign(all.begin(), all.end());
  } else {
    nodes = cfde::output_nodes(set.trajectories.front(), prob.span, a.nodes, false);
  }

  std::vector<std::pair<fs::path, std::string>> files;
  const fs::path dir = a.out;
  for (std::size_t j = 0; j < set.trajectories.size(); ++j) {
    cfde::CsvTable table(cfde::state_header(prob.fde.order()));
    for (double t : nodes)
      table.add_row(state_row(t, set.trajectories[j].state_at(t)));
    files.emplace_back(dir / ("solution_" + std::to_string(j + 1) + ".csv"), table.str());
  }
  cfde::CsvTable w_table({ "t", "W_alpha", "abel_prediction", "rel_error" });
  for (double t : nodes) {
    const double w = cfde::wronskian_at(set.trajectories, t).det;
    const double abel = cfde::abel_predict(prob.fde, set.w_at_t0, set.t0, t);
    w_table.add_row({ t, w, abel, std::abs(w - abel) / std::abs(abel) });
  }
  files.emplace_back(dir / "wronskian.csv", w_table.str());

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw InputFailure("cannot create " + dir.string() + ": " + ec.message());
  write_outputs(files);
  return exit_ok;
}

// --- verify --------------------------------------------------------------

struct VerifyArgs
{
  std::string suite = "all";
  std::uint64_t seed = 42;
};

int cmd_verify(const VerifyArgs& a)
{
  const auto results = cfde::verify::run_suite(a.suite, a.seed);
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s  %-10s %-28s max_residual=%-12.4g tol=%.1g", r.pass ? "PASS" : "FAIL", r.suite.c_str(),
                r.name.c_str(), r.max_residual, r.tolerance);
    if (!r.pass) {
      ++failed;
      if (!r.detail.empty())
        std::printf("  [%s]", r.detail.c_str());
    }
    std::printf("\n");
  }
  std::printf("%zu/%zu properties passed (seed %llu)\n", results.size() - failed, results.size(),
              static_cast<unsigned long long>(a.seed));
  return failed ? exit_verify_failed : exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
  Settings settings;
  try {
    settings = read_settings();
  } catch (const InputFailure& err) {
    std::cerr << "cfde: " << err.what() << '\n';
    return exit_input;
  }

  CLI::App app{ "Conformable fractional calculus and sequential linear conformable FDEs" };
  app.require_subcommand(1);

  DerivArgs deriv;
  auto* deriv_cmd = app.add_subcommand("deriv", "T_alpha f at points");
  deriv_cmd->add_option("--expr", deriv.expr, "f(t)")->required();
  deriv_cmd->add_option("--alpha", deriv.alpha, "order in (0, 1]")->required();
  auto* at_opt = deriv_cmd->add_option("--at", deriv.at, "evaluation points (t > 0)");
  auto* grid_opt = deriv_cmd->add_option("--grid", deriv.grid, "lo:hi:n uniform points");
  at_opt->excludes(grid_opt);
  deriv_cmd->add_option("--method", deriv.method)->check(CLI::IsMember({ "limit", "reduction" }));

  IntegArgs integ;
  auto* integ_cmd = app.add_subcommand("integ", "I_alpha f from a to t");
  integ_cmd->add_option("--expr", integ.expr, "f(t)")->required();
  integ_cmd->add_option("--alpha", integ.alpha, "order in (0, 1]")->required();
  integ_cmd->add_option("--from", integ.from, "lower limit a >= 0")->required();
  integ_cmd->add_option("--to", integ.to, "upper limit t >= a")->required();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "solve an initial value problem");
  solve_cmd->add_option("problem", solve.problem, "problem JSON")->required();
  solve_cmd->add_option("--out", solve.out, "trajectory CSV")->required();
  solve_cmd->add_flag("--parts", solve.parts, "add fundamental-set columns and a .parts.json sidecar");
  solve_cmd->add_option("--nodes", solve.nodes, "uniform output nodes")->capture_default_str();
  solve_cmd->add_flag("--raw", solve.raw, "write the adaptive solver nodes instead");

  OutputArgs fundset;
  auto* fundset_cmd = app.add_subcommand("fundset", "canonical fundamental set and Wronskian");
  fundset_cmd->add_option("problem", fundset.problem, "problem JSON (q must be 0)")->required();
  fundset_cmd->add_option("--out", fundset.out, "output directory")->required();
  fundset_cmd->add_option("--nodes", fundset.nodes, "uniform output nodes")->capture_default_str();
  fundset_cmd->add_flag("--raw", fundset.raw, "write the adaptive solver nodes instead");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "seeded property suites");
  verify_cmd->add_option("--suite", verify.suite)
    ->check(CLI::IsMember({ "calculus", "solver", "structure", "all" }))
    ->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? exit_ok : exit_input;
  }

  try {
    if (*deriv_cmd)
      return cmd_deriv(deriv);
    if (*integ_cmd)
      return cmd_integ(integ);
    if (*solve_cmd)
      return cmd_solve(solve, settings);
    if (*fundset_cmd)
      return cmd_fundset(fundset, settings);
    return cmd_verify(verify);
  } catch (const InputFailure& err) {
    std::cerr << "cfde: " << err.what() << '\n';
    return exit_input;
  } catch (const std::exception& err) {
    std::cerr << "cfde: numerical failure: " << err.what() << '\n';
    return exit_numerical;
  }
}
