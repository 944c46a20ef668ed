#include "oracle.hpp"

#include <covrel/expression.hpp>

#include <doctest.h>

#include <array>
#include <random>

using covrel::Expression;
using covrel::Interval;

namespace {

Interval eval(const std::string& text, std::map<std::string, Interval> constants = {})
{
    return covrel::evaluate_constant(text, constants);
}

} // namespace

TEST_CASE("constants")
{
    CHECK(oracle::contains(eval("1/10"), oracle::Rational(1, 10)));
    CHECK(eval("2 + 3*4") == Interval(14.0));
    CHECK(eval("(2 + 3)*4") == Interval(20.0));
    CHECK(eval("-2^2") == Interval(-4.0));
    CHECK(eval("2^10") == Interval(1024.0));
    CHECK(eval("power(-2, 3)") == Interval(-8.0));
    CHECK(eval("pow(3, 2)") == Interval(9.0));
    CHECK(eval("sqr(-3)") == Interval(9.0));
    CHECK(eval("abs(-3)") == Interval(3.0));
    CHECK(eval("pi") == Interval::pi());
    CHECK(oracle::contains(eval("pi/3"), oracle::pi() / 3));
    CHECK(oracle::contains(eval("1.2"), oracle::Rational(12, 10)));
    CHECK(oracle::contains(eval("2.5e-1"), oracle::Rational(1, 4)));
    CHECK(eval("c*2", {{"c", Interval(1, 2)}}) == Interval(2, 4));
    CHECK(covrel::contains(eval("sin(pi)"), 0.0));
    CHECK(covrel::contains(eval("cos(pi)"), -1.0));
    CHECK(oracle::contains(eval("wrap(7)"), oracle::Big(7) - 2 * oracle::pi()));
    CHECK(oracle::contains(eval("mod2pi(7)"), oracle::Big(7) - 2 * oracle::pi()));
}

TEST_CASE("interval values")
{
    CHECK(covrel::parse_interval_value("[0, 1]") == Interval(0, 1));
    CHECK(covrel::parse_interval_value(" [ -1/2 , 1/2 ] ") == Interval(-0.5, 0.5));
    CHECK(covrel::parse_interval_value("3") == Interval(3.0));
    CHECK_THROWS_AS(covrel::parse_interval_value("[1, 0]"), std::invalid_argument);
    CHECK_THROWS_AS(covrel::parse_interval_value("[1, 2"), std::invalid_argument);
}

TEST_CASE("parse errors")
{
    CHECK_THROWS_AS(Expression::parse("1 +"), covrel::ParseError);
    CHECK_THROWS_AS(Expression::parse("(1"), covrel::ParseError);
    CHECK_THROWS_AS(Expression::parse("1 2"), covrel::ParseError);
    CHECK_THROWS_AS(Expression::parse("2^x"), covrel::ParseError);
    CHECK_THROWS_AS(Expression::parse("2^1.5"), covrel::ParseError);
    CHECK_THROWS_AS(Expression::parse("foo(1)"), covrel::ParseError);
    CHECK_THROWS_AS(Expression::parse("sin(1, 2, 3)"), covrel::ParseError);
    CHECK_THROWS_AS(Expression::parse("#"), covrel::ParseError);
    try {
        (void)Expression::parse("1 + * 2");
        FAIL("no exception");
    } catch (const covrel::ParseError& e) {
        CHECK(e.position() == 4);
    }
    CHECK_THROWS_AS(eval("x + 1"), covrel::ParseError);
    CHECK_THROWS_AS(eval("1/0"), covrel::IntervalError);
}

TEST_CASE("names and slots")
{
    const auto e = Expression::parse("a*x + sin(theta) - pi");
    const auto names = e.names();
    CHECK(names == std::vector<std::string>{"a", "x", "theta"});
    CHECK(!e.compiled());

    const std::array<std::string, 2> slots{"theta", "x"};
    const auto c = e.compile(slots, {{"a", Interval(2.0)}});
    CHECK(c.compiled());
    const std::array<Interval, 2> args{Interval(0.0), Interval(3.0)};
    const Interval v = c.eval(args);
    CHECK(oracle::contains(v, oracle::Big(6) - oracle::pi()));
    CHECK_THROWS_AS(e.compile(slots, {}), covrel::ParseError);
}

TEST_CASE("matches the hand-written formula")
{
    const std::array<std::string, 3> slots{"theta", "x", "y"};
    const auto e = Expression::parse("-8*x/5 + 4*power(x,3) + x*y/2").compile(slots, {});
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng), y = u(rng);
        const std::array<Interval, 3> args{Interval(0.0), Interval(x), Interval(y)};
        const oracle::Big bx(x), by(y);
        CHECK(oracle::contains(e.eval(args), -8 * bx / 5 + 4 * bx * bx * bx + bx * by / 2));
    }
}

TEST_CASE("deep expressions")
{
    std::string text = "1";
    for (int i = 0; i < 60; ++i) text = "(" + text + "+1)";
    CHECK(eval(text) == Interval(61.0));
    std::string wide = "0";
    for (int i = 0; i < 40; ++i) wide = "1+(" + wide + ")";
    CHECK(eval(wide) == Interval(40.0));

    // Not foldable, so the evaluation stack really gets 40 deep.
    std::string deep = "x";
    for (int i = 0; i < 40; ++i) deep = "x+(" + deep + ")";
    const std::array<std::string, 1> slots{"x"};
    const std::array<Interval, 1> args{Interval(0.5)};
    CHECK(Expression::parse(deep).compile(slots, {}).eval(args) == Interval(20.5));
}
