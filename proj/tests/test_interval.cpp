#include "oracle.hpp"

#include <covrel/interval.hpp>

#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

using covrel::Interval;
using oracle::Big;
using oracle::Rational;

namespace {

double ulp(double v) { return std::nextafter(std::fabs(v), INFINITY) - std::fabs(v); }

constexpr int kTrials = 20000;

// Draws kTrials pairs of intervals and points inside them and counts the
// exact values that fall outside the interval result.
int binary_violations(const std::function<Interval(Interval, Interval)>& op,
                      const std::function<Big(Big, Big)>& exact, bool nonzero_rhs, unsigned seed)
{
    std::mt19937_64 rng(seed);
    int bad = 0;
    for (int i = 0; i < kTrials; ++i) {
        const Interval a = oracle::random_interval(rng);
        Interval b = oracle::random_interval(rng);
        if (nonzero_rhs && covrel::contains(b, 0.0)) b = b.lo() > -1e-3 ? b + 1.0 : Interval(b.lo(), -1e-3);
        const Interval r = op(a, b);
        for (int j = 0; j < 4; ++j) {
            const double p = oracle::random_point(rng, a);
            const double q = oracle::random_point(rng, b);
            if (!oracle::contains(r, exact(Big(p), Big(q)))) ++bad;
        }
    }
    return bad;
}

} // namespace

TEST_CASE("construction")
{
    CHECK(Interval().lo() == 0.0);
    CHECK(Interval(2.0).is_degenerate());
    CHECK_THROWS_AS(Interval(2.0, 1.0), covrel::IntervalError);
    CHECK_THROWS_AS(Interval(std::numeric_limits<double>::infinity()), covrel::IntervalError);
    CHECK_THROWS_AS(Interval(0.0, std::nan("")), covrel::IntervalError);
    CHECK(!std::signbit(Interval(-0.0).lo()));
}

TEST_CASE("arithmetic examples")
{
    CHECK(Interval(1, 2) + Interval(3, 4) == Interval(4, 6));
    CHECK(Interval(-1, 2) * Interval(3, 4) == Interval(-4, 8));
    CHECK(Interval(1, 2) - Interval(3, 4) == Interval(-3, -1));
    CHECK(-Interval(1, 2) == Interval(-2, -1));

    const Interval third = Interval(1.0) / Interval(3.0);
    CHECK(oracle::contains(third, Rational(1, 3)));
    CHECK(third.hi() - third.lo() <= 2 * ulp(1.0 / 3.0));
    CHECK(third.lo() < third.hi());

    CHECK(Interval(1.0) / Interval(4.0) == Interval(0.25));
    CHECK_THROWS_WITH_AS(Interval(1.0) / Interval(-1, 1), "division by interval containing zero",
                         covrel::IntervalError);
    CHECK_THROWS_AS(Interval(1.0) / Interval(0.0), covrel::IntervalError);
    CHECK_THROWS_AS(Interval(1e308) * Interval(10.0), covrel::IntervalError);
}

TEST_CASE("exact operations stay degenerate")
{
    CHECK((Interval(0.5) + Interval(0.25)).is_degenerate());
    CHECK((Interval(3.0) * Interval(7.0)).is_degenerate());
    CHECK((Interval(1.5) / Interval(0.5)).is_degenerate());
    const Interval s = Interval(0.1) + Interval(0.2);
    CHECK(!s.is_degenerate());
    CHECK(oracle::contains(s, Rational(0.1) + Rational(0.2)));
}

TEST_CASE("power")
{
    CHECK(covrel::power(Interval(-1, 1), 2) == Interval(0, 1));
    CHECK(covrel::power(Interval(-1, 1), 3) == Interval(-1, 1));
    CHECK(covrel::power(Interval(2.0), 3) == Interval(8.0));
    CHECK(covrel::power(Interval(-2, 1), 2) == Interval(0, 4));
    CHECK(covrel::power(Interval(-3, -2), 2) == Interval(4, 9));
    CHECK(covrel::power(Interval(-3, -2), 3) == Interval(-27, -8));
    CHECK(covrel::power(Interval(-5, 5), 0) == Interval(1.0));
    CHECK(covrel::sqr(Interval(-1, 2)) == Interval(0, 4));
    CHECK(covrel::abs(Interval(-3, 2)) == Interval(0, 3));
    CHECK(covrel::abs(Interval(-3, -2)) == Interval(2, 3));
}

TEST_CASE("sin and cos")
{
    const Interval s0 = covrel::sin(Interval(0.0));
    CHECK(covrel::contains(s0, 0.0));
    CHECK(s0.hi() - s0.lo() <= 2 * std::numeric_limits<double>::denorm_min());

    const Interval half = covrel::sin(Interval(0.0, Interval::pi().hi()));
    CHECK(covrel::subset(Interval(0, 1), half));
    CHECK(half.hi() == 1.0);
    CHECK(half.lo() >= -1e-15);

    CHECK(covrel::cos(Interval(0.0)) == Interval(1.0));
    CHECK(covrel::cos(Interval(0.0, Interval::two_pi().hi())) == Interval(-1, 1));
    CHECK(covrel::sin(Interval(-100, 100)) == Interval(-1, 1));
    const Interval c = covrel::cos(Interval(3, 3.3));
    CHECK(c.lo() == -1.0);
    CHECK(c.hi() < -0.98);
}

TEST_CASE("sin of random points contains the oracle value")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-50.0, 50.0);
    int bad = 0;
    for (int i = 0; i < 100000; ++i) {
        const double x = dist(rng);
        if (!oracle::contains(covrel::sin(Interval(x)), boost::multiprecision::sin(Big(x)))) ++bad;
    }
    CHECK(bad == 0);
}

TEST_CASE("decimal literals")
{
    const Interval r = Interval::from_decimal("1.2");
    CHECK(oracle::contains(r, Rational(12, 10)));
    CHECK(r.lo() < r.hi());
    CHECK(r.hi() == std::nextafter(r.lo(), 2.0));
    CHECK(Interval::from_decimal("0.25") == Interval(0.25));
    CHECK(Interval::from_decimal("-3e-2").hi() < 0.0);
    CHECK(oracle::contains(Interval::from_decimal("-3e-2"), Rational(-3, 100)));
    CHECK_THROWS_AS(Interval::from_decimal("1.2x"), std::invalid_argument);
    CHECK_THROWS_AS(Interval::from_decimal(""), std::invalid_argument);
}

TEST_CASE("pi enclosure")
{
    CHECK(oracle::contains(Interval::pi(), oracle::pi()));
    CHECK(oracle::contains(Interval::two_pi(), 2 * oracle::pi()));
    CHECK(oracle::contains(Interval::half_pi(), oracle::pi() / 2));
    CHECK(Interval::pi().hi() == std::nextafter(Interval::pi().lo(), 4.0));
}

TEST_CASE("part")
{
    CHECK(covrel::part(Interval(1, 2), 4, 0) == Interval(1.0, 1.25));
    CHECK(covrel::part(Interval(1, 2), 4, 3) == Interval(1.75, 2.0));
    CHECK_THROWS_AS(covrel::part(Interval(1, 2), 4, 4), std::out_of_range);
    CHECK_THROWS_AS(covrel::part(Interval(1, 2), 0, 0), std::invalid_argument);

    for (std::size_t n : {1u, 3u, 7u, 10u, 100u}) {
        for (const Interval x : {Interval(0, 1), Interval(-1.2, 1.2), Interval(0, Interval::two_pi().hi())}) {
            CHECK(covrel::part(x, n, 0).lo() == x.lo());
            CHECK(covrel::part(x, n, n - 1).hi() == x.hi());
            for (std::size_t k = 0; k < n; ++k) {
                const Interval p = covrel::part(x, n, k);
                CHECK(covrel::subset(p, x));
                if (k + 1 < n) CHECK(p.hi() >= covrel::part(x, n, k + 1).lo());
            }
        }
    }
}

TEST_CASE("predicates")
{
    CHECK(covrel::certainly_less(Interval(1, 2), Interval(3, 4)));
    CHECK(!covrel::certainly_less(Interval(1, 3), Interval(3, 4)));
    CHECK(covrel::certainly_greater(Interval(3, 4), Interval(1, 2)));
    CHECK(covrel::subset_interior(Interval(-1, 1), Interval::from_decimal("-1.2") + Interval(0.0, 2.4)));
    CHECK(covrel::subset_interior(Interval(-1, 1), Interval(-1.2, 1.2)));
    CHECK(!covrel::subset_interior(Interval(-1, 1), Interval(-1, 1.2)));
    CHECK(covrel::subset(Interval(-1, 1), Interval(-1, 1.2)));
    CHECK(covrel::contains(Interval(-1, 1), 1.0));
    CHECK(!covrel::contains(Interval(-1, 1), 1.5));
    CHECK(covrel::intersects(Interval(0, 1), Interval(1, 2)));
    CHECK(Interval(1, 3).width() == 2.0);
    CHECK(Interval(1, 3).midpoint() == 2.0);
    CHECK(Interval(-5, 3).mag() == 5.0);
    CHECK(*covrel::intersect(Interval(0, 2), Interval(1, 3)) == Interval(1, 2));
    CHECK(!covrel::intersect(Interval(0, 1), Interval(2, 3)));
    CHECK(covrel::hull(Interval(0, 1), Interval(2, 3)) == Interval(0, 3));

    std::mt19937_64 rng(5);
    for (int i = 0; i < 10000; ++i) {
        const Interval a = oracle::random_interval(rng, 2);
        const Interval b = oracle::random_interval(rng, 2);
        if (covrel::certainly_less(a, b)) CHECK(!covrel::intersects(a, b));
        if (covrel::subset_interior(a, b)) CHECK(covrel::subset(a, b));
    }
}

TEST_CASE("width is an upper bound")
{
    const Interval a(-1e-300, 1.0);
    CHECK(a.width() >= 1.0);
    const Interval b(0.1, 0.3);
    CHECK(Rational(b.width()) >= Rational(b.hi()) - Rational(b.lo()));
}

TEST_CASE("printing round-trips")
{
    const Interval third = Interval(1.0) / Interval(3.0);
    std::ostringstream os;
    os << third;
    CHECK(os.str() == covrel::to_string(third));
    CHECK(std::stod(covrel::format_double(third.lo())) == third.lo());
    CHECK(covrel::format_double(0.1) == "0.1");
}

TEST_CASE("randomized containment of + - * /")
{
    using B = const Interval&;
    CHECK(binary_violations([](B a, B b) { return a + b; }, [](Big p, Big q) { return p + q; }, false, 1) == 0);
    CHECK(binary_violations([](B a, B b) { return a - b; }, [](Big p, Big q) { return p - q; }, false, 2) == 0);
    CHECK(binary_violations([](B a, B b) { return a * b; }, [](Big p, Big q) { return p * q; }, false, 3) == 0);
    CHECK(binary_violations([](B a, B b) { return a / b; }, [](Big p, Big q) { return p / q; }, true, 4) == 0);
}

TEST_CASE("randomized containment of power, sin, cos")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<unsigned> exponent(0, 7);
    std::uniform_real_distribution<double> angle(-20.0, 20.0);
    std::uniform_real_distribution<double> span(0.0, 4.0);
    int bad = 0;
    for (int i = 0; i < kTrials; ++i) {
        const Interval a = oracle::random_interval(rng, 3);
        const unsigned n = exponent(rng);
        const Interval r = covrel::power(a, n);
        const double t0 = angle(rng);
        const Interval th(t0, t0 + span(rng));
        const Interval s = covrel::sin(th);
        const Interval c = covrel::cos(th);
        for (int j = 0; j < 4; ++j) {
            const double p = oracle::random_point(rng, a);
            if (!oracle::contains(r, boost::multiprecision::pow(Big(p), static_cast<int>(n)))) ++bad;
            const double t = oracle::random_point(rng, th);
            if (!oracle::contains(s, boost::multiprecision::sin(Big(t)))) ++bad;
            if (!oracle::contains(c, boost::multiprecision::cos(Big(t)))) ++bad;
        }
    }
    CHECK(bad == 0);
}

TEST_CASE("inclusion monotonicity")
{
    std::mt19937_64 rng(9);
    int bad = 0;
    for (int i = 0; i < kTrials; ++i) {
        const Interval a = oracle::random_interval(rng, 4);
        Interval b = oracle::random_interval(rng, 4);
        const Interval sa = oracle::random_subinterval(rng, a);
        const Interval sb = oracle::random_subinterval(rng, b);
        bad += !covrel::subset(sa + sb, a + b);
        bad += !covrel::subset(sa - sb, a - b);
        bad += !covrel::subset(sa * sb, a * b);
        if (!covrel::contains(b, 0.0)) bad += !covrel::subset(sa / sb, a / b);
        bad += !covrel::subset(covrel::power(sa, 3), covrel::power(a, 3));
        bad += !covrel::subset(covrel::power(sa, 4), covrel::power(a, 4));
        bad += !covrel::subset(covrel::sin(sa), covrel::sin(a));
        bad += !covrel::subset(covrel::cos(sa), covrel::cos(a));
    }
    CHECK(bad == 0);
}

TEST_CASE("directed rounding helpers bracket the exact result")
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> d(-1e3, 1e3);
    for (int i = 0; i < 2000; ++i) {
        const double a = d(rng), b = d(rng);
        const Rational ra(a), rb(b);
        CHECK(Rational(covrel::rounding::add_down(a, b)) <= ra + rb);
        CHECK(Rational(covrel::rounding::add_up(a, b)) >= ra + rb);
        CHECK(Rational(covrel::rounding::mul_down(a, b)) <= ra * rb);
        CHECK(Rational(covrel::rounding::mul_up(a, b)) >= ra * rb);
        CHECK(Rational(covrel::rounding::div_down(a, b)) <= ra / rb);
        CHECK(Rational(covrel::rounding::div_up(a, b)) >= ra / rb);
        CHECK(std::nextafter(covrel::rounding::add_down(a, b), INFINITY) >= covrel::rounding::add_up(a, b));
    }
}
