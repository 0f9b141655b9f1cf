#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "minkcurve/expr.hpp"

namespace mc = minkcurve;

namespace {

// Random expression trees for fuzzing; literals stay non-negative (negative
// values enter through unary minus, as in the grammar).
mc::ExprPtr fuzz_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : 11);
  std::uniform_real_distribution<double> lit(0.0, 4.0);
  switch (pick(rng)) {
    case 0:
    case 1: return mc::Expr::make_var();
    case 2: return mc::Expr::make_number(lit(rng));
    case 3: return (rng() & 1) ? mc::Expr::make_const(mc::ExprKind::ConstPi)
                               : mc::Expr::make_const(mc::ExprKind::ConstE);
    case 4: return mc::Expr::make_unary(fuzz_expr(rng, depth - 1));
    case 5:
      return mc::Expr::make_binary(mc::ExprKind::Add, fuzz_expr(rng, depth - 1),
                                   fuzz_expr(rng, depth - 1));
    case 6:
      return mc::Expr::make_binary(mc::ExprKind::Sub, fuzz_expr(rng, depth - 1),
                                   fuzz_expr(rng, depth - 1));
    case 7:
      return mc::Expr::make_binary(mc::ExprKind::Mul, fuzz_expr(rng, depth - 1),
                                   fuzz_expr(rng, depth - 1));
    case 8:
      return mc::Expr::make_binary(mc::ExprKind::Div, fuzz_expr(rng, depth - 1),
                                   fuzz_expr(rng, depth - 1));
    case 9: {
      std::uniform_int_distribution<int> e(0, 4);
      return mc::Expr::make_binary(mc::ExprKind::Pow, fuzz_expr(rng, depth - 1),
                                   mc::Expr::make_number(e(rng)));
    }
    case 10: {
      static const char* fns[] = {"sin", "cos", "sinh", "cosh", "tanh", "exp"};
      std::uniform_int_distribution<int> f(0, 5);
      return mc::Expr::make_call(fns[f(rng)], fuzz_expr(rng, depth - 1));
    }
    default: {
      static const char* fns[] = {"log", "sqrt", "abs"};
      std::uniform_int_distribution<int> f(0, 2);
      return mc::Expr::make_call(fns[f(rng)], fuzz_expr(rng, depth - 1));
    }
  }
}

long parse_error_offset(const std::string& text) {
  try {
    mc::parse(text);
  } catch (const mc::Error& e) {
    return e.offset();
  }
  return -2;
}

}  // namespace

TEST(Expr, GoldenCorpus) {
  // input -> canonical printed form; pins precedence and associativity
  const std::vector<std::pair<std::string, std::string>> corpus = {
      {"s^2 - 1", "s^2-1"},
      {"(s^4 - s^2 - 1)/(s^2 - 1)", "(s^4-s^2-1)/(s^2-1)"},
      {"1 + 2*s", "1+2*s"},
      {"(1 + 2)*s", "(1+2)*s"},
      {"-s^2", "-s^2"},
      {"(-s)^2", "(-s)^2"},
      {"2^3^2", "2^3^2"},
      {"(2^3)^2", "(2^3)^2"},
      {"s^-2", "s^-2"},
      {"1 - 2 - 3", "1-2-3"},
      {"1 - (2 - 3)", "1-(2-3)"},
      {"1/2/3", "1/2/3"},
      {"1/(2/3)", "1/(2/3)"},
      {"2*s + 3*s^2", "2*s+3*s^2"},
      {"sin(cos(s))", "sin(cos(s))"},
      {"sqrt(abs(s))", "sqrt(abs(s))"},
      {"-sin(s)", "-sin(s)"},
      {"-(s + 1)", "-(s+1)"},
      {"s*-s", "s*-s"},
      {"pi*s + e", "pi*s+e"},
      {"2e3 + s", "2000+s"},
      {"1.5e-2*s", "0.014999999999999999*s"},
      {"cosh(s)^2 - sinh(s)^2", "cosh(s)^2-sinh(s)^2"},
      {"s/2 + s^2/2", "s/2+s^2/2"},
  };
  for (const auto& [input, want] : corpus) {
    const auto ast = mc::parse(input);
    EXPECT_EQ(mc::print(ast), want) << "input: " << input;
    // canonical form re-parses to the same structure
    EXPECT_TRUE(mc::structurally_equal(ast, mc::parse(mc::print(ast)))) << "input: " << input;
  }
}

TEST(Expr, PrecedenceStructure) {
  // ^ binds tighter than unary minus: -s^2 == -(s^2)
  const auto e = mc::parse("-s^2");
  ASSERT_EQ(e->kind, mc::ExprKind::Neg);
  EXPECT_EQ(e->a->kind, mc::ExprKind::Pow);
  // * binds tighter than +
  const auto f = mc::parse("1+2*3");
  ASSERT_EQ(f->kind, mc::ExprKind::Add);
  EXPECT_EQ(f->b->kind, mc::ExprKind::Mul);
  // ^ is right-associative
  const auto g = mc::parse("s^2^3");
  ASSERT_EQ(g->kind, mc::ExprKind::Pow);
  EXPECT_EQ(g->b->kind, mc::ExprKind::Pow);
}

TEST(Expr, ParseErrors) {
  EXPECT_EQ(parse_error_offset("sin("), 4);
  EXPECT_EQ(parse_error_offset(""), 0);
  EXPECT_EQ(parse_error_offset("1 + * 2"), 4);
  EXPECT_EQ(parse_error_offset("(s"), 2);
  EXPECT_EQ(parse_error_offset("s )"), 2);
  EXPECT_EQ(parse_error_offset("x + 1"), 0);
  try {
    mc::parse("foo(s)");
    FAIL() << "expected UnknownFunction";
  } catch (const mc::Error& e) {
    EXPECT_EQ(e.code(), mc::ErrorCode::UnknownFunction);
    EXPECT_EQ(e.offset(), 0);
  }
}

TEST(Expr, EvalBasics) {
  EXPECT_DOUBLE_EQ(mc::eval(mc::parse("s^2 - 1"), 3.0), 8.0);
  EXPECT_DOUBLE_EQ(mc::eval(mc::parse("pi"), 0.0), 3.14159265358979323846);
  EXPECT_DOUBLE_EQ(mc::eval(mc::parse("e"), 0.0), 2.71828182845904523536);
  EXPECT_DOUBLE_EQ(mc::eval(mc::parse("2^-2"), 0.0), 0.25);
  EXPECT_DOUBLE_EQ(mc::eval(mc::parse("(-1.5)^3"), 0.0), -3.375);
  EXPECT_NEAR(mc::eval(mc::parse("2^0.5"), 0.0), std::sqrt(2.0), 1e-15);
}

TEST(Expr, JetExamples) {
  const mc::Jet a = mc::eval_jet(mc::parse("s^2"), 3.0, 2);
  EXPECT_DOUBLE_EQ(a.deriv(0), 9.0);
  EXPECT_DOUBLE_EQ(a.deriv(1), 6.0);
  EXPECT_DOUBLE_EQ(a.deriv(2), 2.0);

  const mc::Jet b = mc::eval_jet(mc::parse("sinh(s)"), 0.0, 3);
  EXPECT_DOUBLE_EQ(b.deriv(0), 0.0);
  EXPECT_DOUBLE_EQ(b.deriv(1), 1.0);
  EXPECT_DOUBLE_EQ(b.deriv(2), 0.0);
  EXPECT_DOUBLE_EQ(b.deriv(3), 1.0);
}

TEST(Expr, JetOfExampleCausalCurvature) {
  // theta of the catalog's L1 example near its zero: value ~0, slope != 0,
  // checked against a central finite difference
  const auto theta = mc::parse("(s^4 - s^2 - 1)/(s^2 - 1)");
  const double s0 = -std::sqrt((1.0 + std::sqrt(5.0)) / 2.0);
  const mc::Jet j = mc::eval_jet(theta, s0, 1);
  EXPECT_NEAR(j.deriv(0), 0.0, 1e-12);
  const double h = 1e-5;
  const double fd = (mc::eval(theta, s0 + h) - mc::eval(theta, s0 - h)) / (2 * h);
  EXPECT_NE(j.deriv(1), 0.0);
  EXPECT_NEAR(j.deriv(1), fd, 1e-6 * std::abs(fd));
}

TEST(Expr, PrintParseRoundTrip1000) {
  std::mt19937_64 rng(2024);
  int done = 0;
  while (done < 1000) {
    const auto e = fuzz_expr(rng, 4);
    const std::string text = mc::print(e);
    const auto back = mc::parse(text);
    ASSERT_TRUE(mc::structurally_equal(e, back)) << "printed: " << text;
    ++done;
  }
}

TEST(Expr, JetsMatchFiniteDifferences) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> pt(-2.0, 2.0);
  int done = 0;
  while (done < 100) {
    const auto e = fuzz_expr(rng, 3);
    const double s = pt(rng);
    const double h = 1e-5;
    double f0, fp, fm, d1, d2;
    try {
      const mc::Jet j = mc::eval_jet(e, s, 2);
      f0 = j.value();
      d1 = j.deriv(1);
      d2 = j.deriv(2);
      fp = mc::eval(e, s + h);
      fm = mc::eval(e, s - h);
    } catch (const mc::Error&) {
      continue;  // domain fault: resample
    }
    if (!std::isfinite(f0) || !std::isfinite(fp) || !std::isfinite(fm) || !std::isfinite(d1) ||
        !std::isfinite(d2))
      continue;
    // keep the comparison well-conditioned
    if (std::abs(f0) > 1e3 || std::abs(d1) > 1e3 || std::abs(d2) > 1e3) continue;
    const double fd1 = (fp - fm) / (2 * h);
    const double fd2 = (fp - 2 * f0 + fm) / (h * h);
    EXPECT_NEAR(d1, fd1, 1e-6 * std::max(1.0, std::abs(fd1)))
        << "expr: " << mc::print(e) << " at s=" << s;
    EXPECT_NEAR(d2, fd2, 1e-4 * std::max(1.0, std::abs(fd2)))
        << "expr: " << mc::print(e) << " at s=" << s;
    ++done;
  }
}

TEST(Expr, JetLeibnizRule) {
  // (f g)^(k) = sum C(k,j) f^(j) g^(k-j) for random jets
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int order = 5;
    mc::Jet f(order), g(order);
    for (int k = 0; k <= order; ++k) {
      f.deriv(k) = u(rng);
      g.deriv(k) = u(rng);
    }
    const mc::Jet p = f * g;
    double binom[6][6] = {};
    for (int n = 0; n <= 5; ++n) {
      binom[n][0] = 1;
      for (int k = 1; k <= n; ++k)
        binom[n][k] = binom[n - 1][k - 1] + (k <= n - 1 ? binom[n - 1][k] : 0);
    }
    for (int k = 0; k <= order; ++k) {
      double want = 0;
      for (int j = 0; j <= k; ++j) want += binom[k][j] * f.deriv(j) * g.deriv(k - j);
      EXPECT_NEAR(p.deriv(k), want, 1e-10 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST(Expr, JetCompositionFaaDiBruno) {
  // exp(sin(s)) via jets against the closed-form derivative tower
  const auto e = mc::parse("exp(sin(s))");
  const double s = 0.7;
  const mc::Jet j = mc::eval_jet(e, s, 3);
  const double si = std::sin(s), co = std::cos(s), f = std::exp(si);
  EXPECT_NEAR(j.deriv(0), f, 1e-12);
  EXPECT_NEAR(j.deriv(1), f * co, 1e-12);
  EXPECT_NEAR(j.deriv(2), f * (co * co - si), 1e-11);
  EXPECT_NEAR(j.deriv(3), f * (co * co * co - 3 * si * co - co), 1e-11);
}

TEST(Expr, DomainErrors) {
  EXPECT_THROW(mc::eval(mc::parse("log(0-1)"), 0.0), mc::Error);
  EXPECT_THROW(mc::eval(mc::parse("1/s"), 0.0), mc::Error);
  EXPECT_THROW(mc::eval_jet(mc::parse("sqrt(s)"), -1.0, 0), mc::Error);
  EXPECT_THROW(mc::eval_jet(mc::parse("sqrt(s)"), 0.0, 1), mc::Error);
  EXPECT_THROW(mc::eval_jet(mc::parse("s^0.5"), -2.0, 1), mc::Error);
  // abs: fine at 0 for order 0, NonSmooth for order >= 1
  EXPECT_DOUBLE_EQ(mc::eval(mc::parse("abs(s)"), 0.0), 0.0);
  try {
    mc::eval_jet(mc::parse("abs(s)"), 0.0, 1);
    FAIL() << "expected NonSmooth";
  } catch (const mc::Error& e) {
    EXPECT_EQ(e.code(), mc::ErrorCode::NonSmooth);
  }
  // away from 0 abs differentiates as sign(s)
  EXPECT_DOUBLE_EQ(mc::eval_jet(mc::parse("abs(s)"), -2.0, 1).deriv(1), -1.0);
}

TEST(Expr, IntegerPowerIsExactForNegativeBases) {
  const mc::Jet j = mc::eval_jet(mc::parse("s^3"), -2.0, 1);
  EXPECT_DOUBLE_EQ(j.value(), -8.0);
  EXPECT_DOUBLE_EQ(j.deriv(1), 12.0);
}
