#pragma once

// Extended-precision reference values for the test suites.

#include <covrel/interval.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <random>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;
using Rational = boost::multiprecision::cpp_rational;

inline Big big(double v) { return Big(v); }

inline bool contains(const covrel::Interval& a, const Big& v) { return big(a.lo()) <= v && v <= big(a.hi()); }

inline bool contains(const covrel::Interval& a, const Rational& v)
{
    return Rational(a.lo()) <= v && v <= Rational(a.hi());
}

inline Big pi() { return boost::multiprecision::atan(Big(1)) * 4; }

/// Random interval with endpoints of magnitude about 2^-20 .. 2^20.
inline covrel::Interval random_interval(std::mt19937_64& rng, int max_exp = 20)
{
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_int_distribution<int> ex(-max_exp, max_exp);
    std::uniform_int_distribution<int> coin(0, 7);
    const double a = std::ldexp(unit(rng), ex(rng));
    if (coin(rng) == 0) return covrel::Interval(a);
    const double b = coin(rng) < 4 ? a + std::ldexp(std::fabs(unit(rng)), ex(rng)) : std::ldexp(unit(rng), ex(rng));
    return covrel::Interval(std::fmin(a, b), std::fmax(a, b));
}

/// A double inside the interval; endpoints are drawn with positive
/// probability.
inline double random_point(std::mt19937_64& rng, const covrel::Interval& a)
{
    std::uniform_int_distribution<int> pick(0, 9);
    const int k = pick(rng);
    if (k == 0) return a.lo();
    if (k == 1) return a.hi();
    std::uniform_real_distribution<double> t(0.0, 1.0);
    const double p = a.lo() + t(rng) * (a.hi() - a.lo());
    return std::fmin(std::fmax(p, a.lo()), a.hi());
}

/// A random sub-interval of a.
inline covrel::Interval random_subinterval(std::mt19937_64& rng, const covrel::Interval& a)
{
    const double p = random_point(rng, a);
    const double q = random_point(rng, a);
    return covrel::Interval(std::fmin(p, q), std::fmax(p, q));
}

/// Images of the reference systems in 50 digits. theta is returned
/// unreduced.
struct Image {
    Big theta, x, y;
};

inline Image cap_homotopy(Big t, Big x, Big y, Big alpha, Big linear = Big(-8) / 5)
{
    using boost::multiprecision::cos;
    using boost::multiprecision::sin;
    const Big mu = Big(1) / 10;
    const Big rest = 1 - alpha;
    return {3 * t + rest * x * y * sin(t), alpha * 2 * x + rest * (4 * x * x * x + linear * x + x * y / 2),
            rest * (mu * y + 2 * sin(t) / 5 + x * cos(t))};
}

inline Image toy_homotopy(Big t, Big x, Big y, Big alpha, Big beta, int k = 3)
{
    const Big mu = Big(1) / 10;
    const Big x0 = 4 * x, x1 = -3 * x + 5 * x * x * x;
    const Big y0 = mu * y, y1 = boost::multiprecision::sin(t) / 2 + mu * y;
    const Big rest = 1 - alpha;
    return {k * t, rest * ((1 - beta) * x0 + beta * x1) + alpha * 2 * x, rest * ((1 - beta) * y0 + beta * y1)};
}

inline Image linear_homotopy(Big t, Big x, Big y, Big alpha, Big a, Big b)
{
    return {t, a * x, (1 - alpha) * b * y};
}

} // namespace oracle
