#ifndef CFDE_PROBLEM_HPP
#define CFDE_PROBLEM_HPP

// Problem files (JSON) and plain-text outputs.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfde/errors.hpp"
#include "cfde/fde.hpp"

namespace cfde {

/// Problem-file field failed to validate. `field()` is a path such as
/// "init" or "p[1]".
class FieldError : public Error
{
public:
  FieldError(std::string field, const std::string& message)
    : Error(field + ": " + message), field_(std::move(field))
  {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

struct Problem
{
  SequentialFde fde;
  InitialCondition ic;
  Interval span;
  SolverOptions solver;
};

namespace detail {

using nlohmann::json;

inline const json& field(const json& doc, const char* name)
{
  auto it = doc.find(name);
  if (it == doc.end())
    throw FieldError(name, "missing");
  return *it;
}

inline double real_field(const json& v, const std::string& path)
{
  if (!v.is_number())
    throw FieldError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x))
    throw FieldError(path, "must be finite");
  return x;
}

inline std::vector<double> real_list(const json& v, const std::string& path)
{
  if (!v.is_array())
    throw FieldError(path, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(real_field(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline Interval pair_field(const json& v, const std::string& path)
{
  const auto xs = real_list(v, path);
  if (xs.size() != 2)
    throw FieldError(path, "expected [lo, hi]");
  return { xs[0], xs[1] };
}

inline Expr expr_field(const json& v, const std::string& path)
{
  if (v.is_number())
    return Expr::parse(v.dump());
  if (!v.is_string())
    throw FieldError(path, "expected an expression string");
  try {
    return Expr::parse(v.get<std::string>());
  } catch (const ParseError& err) {
    throw FieldError(path, err.what());
  }
}

} // namespace detail

/// Validates a parsed document into a Problem. Tolerances absent from the
/// file fall back to `defaults`.
inline Problem load_problem(const nlohmann::json& doc, const SolverOptions& defaults = {})
{
  using namespace detail;
  if (!doc.is_object())
    throw FieldError("$", "problem file must be a JSON object");

  const double alpha_value = real_field(field(doc, "alpha"), "alpha");
  if (!(alpha_value > 0.0 && alpha_value <= 1.0))
    throw FieldError("alpha", "must lie in (0, 1]");

  const json& order_json = field(doc, "order");
  if (!order_json.is_number_integer() || order_json.get<long>() < 1)
    throw FieldError("order", "expected a positive integer");
  const auto order = order_json.get<long>();

  const json& p_json = field(doc, "p");
  if (!p_json.is_array())
    throw FieldError("p", "expected a list of expression strings");
  if (static_cast<long>(p_json.size()) != order)
    throw FieldError("p", "has " + std::to_string(p_json.size()) + " entries, order is " + std::to_string(order));
  std::vector<Expr> p;
  for (std::size_t k = 0; k < p_json.size(); ++k)
    p.push_back(expr_field(p_json[k], "p[" + std::to_string(k) + "]"));
  Expr q = expr_field(field(doc, "q"), "q");

  const Interval domain = pair_field(field(doc, "domain"), "domain");
  if (!(domain.lo > 0.0 && domain.hi > domain.lo))
    throw FieldError("domain", "need 0 < a < b");

  const double t0 = real_field(field(doc, "t0"), "t0");
  if (!domain.contains_open(t0))
    throw FieldError("t0", "must lie strictly inside domain");

  const auto init = real_list(field(doc, "init"), "init");
  if (static_cast<long>(init.size()) != order)
    throw FieldError("init", "has " + std::to_string(init.size()) + " values, order is " + std::to_string(order));

  const Interval span = pair_field(field(doc, "span"), "span");
  if (!(span.lo < span.hi))
    throw FieldError("span", "need t_lo < t_hi");
  if (!domain.contains_open(span.lo) || !domain.contains_open(span.hi))
    throw FieldError("span", "must lie strictly inside domain");
  if (!span.contains_closed(t0))
    throw FieldError("span", "must contain t0");

  SolverOptions solver = defaults;
  if (auto it = doc.find("tolerances"); it != doc.end()) {
    if (!it->is_object())
      throw FieldError("tolerances", "expected {rel, abs}");
    if (it->contains("rel"))
      solver.rel_tol = real_field((*it)["rel"], "tolerances.rel");
    if (it->contains("abs"))
      solver.abs_tol = real_field((*it)["abs"], "tolerances.abs");
    if (!(solver.rel_tol > 0.0))
      throw FieldError("tolerances.rel", "must be positive");
    if (!(solver.abs_tol > 0.0))
      throw FieldError("tolerances.abs", "must be positive");
  }

  try {
    SequentialFde fde(AlphaOrder(alpha_value), std::move(p), std::move(q), domain);
    return { std::move(fde), InitialCondition{ t0, init }, span, solver };
  } catch (const DomainError& err) {
    // coefficient probe failures name their coefficient ("p[k]" or "q")
    const std::string what = err.what();
    const auto space = what.find(' ');
    throw FieldError(space == std::string::npos ? "p" : what.substr(0, space), what.substr(space + 1));
  }
}

inline Problem load_problem_file(const std::filesystem::path& path, const SolverOptions& defaults = {})
{
  std::ifstream in(path);
  if (!in)
    throw FieldError("$", "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& err) {
    throw FieldError("$", std::string("invalid JSON: ") + err.what());
  }
  return load_problem(doc, defaults);
}

/// 17 significant digits; reads back to the same double.
inline std::string format_number(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Header "t,y,Ty,T^2y,..." for an order-n state.
inline std::vector<std::string> state_header(int n)
{
  std::vector<std::string> out{ "t", "y" };
  if (n > 1)
    out.emplace_back("Ty");
  for (int k = 2; k < n; ++k)
    out.push_back("T^" + std::to_string(k) + "y");
  return out;
}

/// Plain CSV table with a header row; numbers at 17 significant digits.
class CsvTable
{
public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<double>& row)
  {
    if (row.size() != header_.size())
      throw PreconditionError("row width does not match the header");
    rows_.push_back(row);
  }

  std::size_t rows() const { return rows_.size(); }

  std::string str() const
  {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i)
      out += (i ? "," : "") + header_[i];
    out += '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out += (i ? "," : "") + format_number(row[i]);
      out += '\n';
    }
    return out;
  }

private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

/// Writes a sibling temporary, then renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents)
{
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error("write failed for " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

/// Output nodes: the adaptive nodes when `raw`, otherwise `count` uniform
/// points across [lo, hi].
inline std::vector<double> output_nodes(const Trajectory& traj, Interval span, int count, bool raw)
{
  if (raw) {
    std::vector<double> out;
    for (double t : traj.times())
      if (span.contains_closed(t))
        out.push_back(t);
    return out;
  }
  if (count < 2)
    throw PreconditionError("need at least 2 output nodes");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i)
    out[i] = span.lo + (span.hi - span.lo) * i / (count - 1);
  out.back() = span.hi;
  return out;
}

} // namespace cfde

#endif // CFDE_PROBLEM_HPP
