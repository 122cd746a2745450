#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "cfde/expr.hpp"

using cfde::Expr;

TEST(ExprParse, PrecedenceShapes)
{
  EXPECT_EQ(Expr::parse("2*t + 1").to_string(), "(+ (* 2 t) 1)");
  EXPECT_EQ(Expr::parse("sin(t)^2").to_string(), "(^ (sin t) 2)");
  EXPECT_EQ(Expr::parse("-t^2").to_string(), "(neg (^ t 2))");
  EXPECT_EQ(Expr::parse("2^3^2").to_string(), "(^ 2 (^ 3 2))");
  EXPECT_EQ(Expr::parse("t - 1 - 2").to_string(), "(- (- t 1) 2)");
  EXPECT_EQ(Expr::parse("t / 2 * 3").to_string(), "(* (/ t 2) 3)");
  EXPECT_EQ(Expr::parse("2^-1").to_string(), "(^ 2 (neg 1))");
  EXPECT_EQ(Expr::parse("pow(t, 3)").to_string(), "(^ t 3)");
}

TEST(ExprParse, Literals)
{
  EXPECT_DOUBLE_EQ(Expr::parse("1.5e3").eval(0.0), 1500.0);
  EXPECT_DOUBLE_EQ(Expr::parse("2.5E-1").eval(0.0), 0.25);
  EXPECT_DOUBLE_EQ(Expr::parse(".5").eval(0.0), 0.5);
  EXPECT_DOUBLE_EQ(Expr::parse("pi").eval(0.0), std::numbers::pi);
  EXPECT_DOUBLE_EQ(Expr::parse("e").eval(0.0), std::numbers::e);
  EXPECT_DOUBLE_EQ(Expr::parse("2*e").eval(0.0), 2.0 * std::numbers::e);
}

TEST(ExprParse, DanglingOperatorOffset)
{
  try {
    (void)Expr::parse("2*");
    FAIL() << "expected ParseError";
  } catch (const cfde::ParseError& err) {
    EXPECT_EQ(err.offset(), 2u);
  }
}

struct Malformed
{
  const char* text;
  std::size_t offset;
};

TEST(ExprParse, RejectsMalformedWithPosition)
{
  const std::vector<Malformed> corpus = {
    { "2*", 2 },       { "(t+1", 4 },      { "t+1)", 3 },    { "foo(t)", 0 },   { "2t", 1 },
    { "sin t", 4 },    { "t + * 2", 4 },   { "", 0 },        { "   ", 3 },      { "pow(t)", 5 },
    { "x + 1", 0 },    { "sin(t", 5 },     { "3 +", 3 },     { ")", 0 },        { "t^", 2 },
    { "2e", 1 },       { "1..2", 2 },      { "exp()", 4 },   { "t $ 2", 2 },    { "((t)", 4 },
  };
  for (const auto& m : corpus) {
    try {
      (void)Expr::parse(m.text);
      ADD_FAILURE() << "accepted malformed '" << m.text << "'";
    } catch (const cfde::ParseError& err) {
      EXPECT_EQ(err.offset(), m.offset) << "for '" << m.text << "': " << err.what();
    }
  }
}

TEST(ExprEval, Basics)
{
  EXPECT_EQ(Expr::parse("t^2").eval(3.0), 9.0);
  EXPECT_NEAR(Expr::parse("exp(2*sqrt(t))").eval(1.0), 7.3890560989306502, 1e-14);
  EXPECT_EQ(Expr::parse("abs(t - 5)").eval(2.0), 3.0);
}

TEST(ExprEval, DomainErrors)
{
  EXPECT_THROW((void)Expr::parse("ln(t)").eval(0.0), cfde::DomainError);
  EXPECT_THROW((void)Expr::parse("ln(t)").eval(-1.0), cfde::DomainError);
  EXPECT_THROW((void)Expr::parse("1/t").eval(0.0), cfde::DomainError);
  EXPECT_THROW((void)Expr::parse("t^-1").eval(0.0), cfde::DomainError);
  EXPECT_THROW((void)Expr::parse("sqrt(t)").eval(-4.0), cfde::DomainError);
  EXPECT_THROW((void)Expr::parse("exp(t)").eval(1e4), cfde::DomainError);
  EXPECT_THROW((void)Expr::parse("t^0.5").eval(-4.0), cfde::DomainError);
}

// Each corpus entry pairs the text with the same computation written in C++,
// operation for operation, so results must agree bit for bit.
TEST(ExprEval, CorpusMatchesDirectArithmetic)
{
  using F = double (*)(double);
  struct Case
  {
    const char* text;
    F direct;
  };
  const std::vector<Case> corpus = {
    { "t^2", [](double t) { return std::pow(t, 2.0); } },
    { "2*t + 1", [](double t) { return 2.0 * t + 1.0; } },
    { "sin(t)^2", [](double t) { return std::pow(std::sin(t), 2.0); } },
    { "exp(2*sqrt(t))", [](double t) { return std::exp(2.0 * std::sqrt(t)); } },
    { "ln(t) / t", [](double t) { return std::log(t) / t; } },
    { "cos(3*t) - t", [](double t) { return std::cos(3.0 * t) - t; } },
    { "tan(t/10)", [](double t) { return std::tan(t / 10.0); } },
    { "-t^3 + 4", [](double t) { return -std::pow(t, 3.0) + 4.0; } },
    { "abs(t - 2.5)", [](double t) { return std::abs(t - 2.5); } },
    { "pow(t, 1.5)", [](double t) { return std::pow(t, 1.5); } },
    { "1/(1 + t^2)", [](double t) { return 1.0 / (1.0 + std::pow(t, 2.0)); } },
    { "exp(-t) * sin(t)", [](double t) { return std::exp(-t) * std::sin(t); } },
    { "t^0.5 * ln(1 + t)", [](double t) { return std::pow(t, 0.5) * std::log(1.0 + t); } },
    { "pi * t", [](double t) { return std::numbers::pi * t; } },
    { "e^t", [](double t) { return std::pow(std::numbers::e, t); } },
    { "(t - 1)*(t + 1)", [](double t) { return (t - 1.0) * (t + 1.0); } },
    { "2^t^0.5", [](double t) { return std::pow(2.0, std::pow(t, 0.5)); } },
    { "sqrt(abs(sin(t)))", [](double t) { return std::sqrt(std::abs(std::sin(t))); } },
    { "3.5e-2 * t - 7", [](double t) { return 3.5e-2 * t - 7.0; } },
    { "cos(t)/(2 + sin(t))", [](double t) { return std::cos(t) / (2.0 + std::sin(t)); } },
  };
  const std::vector<double> points = { 0.1, 0.5, 1.0, 1.5, 2.0, 3.0, 4.25, 5.0, 7.5, 10.0 };

  for (const auto& c : corpus) {
    const Expr e = Expr::parse(c.text);
    for (double t : points) {
      const double first = e.eval(t);
      EXPECT_EQ(first, c.direct(t)) << c.text << " at t = " << t;
      EXPECT_EQ(first, e.eval(t)) << "repeat evaluation differs for " << c.text;
    }
  }
}

TEST(ExprValue, CopiesShareAndZeroDetection)
{
  const Expr a = Expr::parse("t + 1");
  const Expr b = a;
  EXPECT_EQ(a.eval(2.0), b.eval(2.0));
  EXPECT_EQ(a.source(), "t + 1");
  EXPECT_TRUE(Expr::parse("0").is_zero());
  EXPECT_TRUE(Expr().is_zero());
  EXPECT_FALSE(Expr::parse("0*t").is_zero());
}
