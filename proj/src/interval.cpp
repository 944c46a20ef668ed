#include "covrel/interval.hpp"

#include <algorithm>
#include <cerrno>
#include <cfenv>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <string>

namespace covrel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this magnitude an fma residual may be rounded, so the exact-error
// test is replaced by an unconditional one-step widening.
constexpr double kTiny = 0x1p-960;

double down(double v) { return std::nextafter(v, -kInf); }
double up(double v) { return std::nextafter(v, kInf); }

double finite_or_throw(double v, const char* what)
{
    if (!std::isfinite(v)) {
        throw IntervalError(std::string("interval overflow in ") + what);
    }
    return v;
}

// Exact error of s = fl(a + b): a + b == s + err.
double two_sum_error(double a, double b, double s)
{
    const double bb = s - a;
    return (a - (s - bb)) + (b - bb);
}

// True when a k*2pi + offset point may lie in [lo, hi].
bool may_contain_periodic(double lo, double hi, const Interval& offset)
{
    const Interval period = Interval::two_pi();
    const Interval t_lo = (Interval(lo) - offset) / period;
    const Interval t_hi = (Interval(hi) - offset) / period;
    return std::floor(t_hi.hi()) >= std::ceil(t_lo.lo());
}

// Two-ulp padded enclosure of a library sin/cos value.
Interval pad_unit(double v)
{
    double lo = down(down(v));
    double hi = up(up(v));
    return Interval(std::max(lo, -1.0), std::min(hi, 1.0));
}

bool strtod_honours_rounding()
{
    static const bool honoured = [] {
        const int saved = std::fegetround();
        std::fesetround(FE_DOWNWARD);
        const double lo = std::strtod("0.1", nullptr);
        std::fesetround(FE_UPWARD);
        const double hi = std::strtod("0.1", nullptr);
        std::fesetround(saved);
        return lo < hi;
    }();
    return honoured;
}

double pow_down_nonneg(double v, unsigned n)
{
    double r = 1.0;
    for (unsigned i = 0; i < n; ++i) r = rounding::mul_down(r, v);
    return r;
}

double pow_up_nonneg(double v, unsigned n)
{
    double r = 1.0;
    for (unsigned i = 0; i < n; ++i) r = rounding::mul_up(r, v);
    return r;
}

} // namespace

namespace rounding {

double add_down(double a, double b)
{
    const double s = finite_or_throw(a + b, "addition");
    return two_sum_error(a, b, s) < 0.0 ? down(s) : s;
}

double add_up(double a, double b)
{
    const double s = finite_or_throw(a + b, "addition");
    return two_sum_error(a, b, s) > 0.0 ? up(s) : s;
}

double mul_down(double a, double b)
{
    if (a == 0.0 || b == 0.0) return 0.0;
    const double p = finite_or_throw(a * b, "multiplication");
    if (std::fabs(p) < kTiny) return down(p);
    return std::fma(a, b, -p) < 0.0 ? down(p) : p;
}

double mul_up(double a, double b)
{
    if (a == 0.0 || b == 0.0) return 0.0;
    const double p = finite_or_throw(a * b, "multiplication");
    if (std::fabs(p) < kTiny) return up(p);
    return std::fma(a, b, -p) > 0.0 ? up(p) : p;
}

// a / b - q == r / b with r = a - q*b exact outside the underflow range.
double div_down(double a, double b)
{
    if (a == 0.0) return 0.0;
    const double q = finite_or_throw(a / b, "division");
    if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return down(q);
    const double r = std::fma(-q, b, a);
    if (r == 0.0) return q;
    return ((r < 0.0) != (b < 0.0)) ? down(q) : q;
}

double div_up(double a, double b)
{
    if (a == 0.0) return 0.0;
    const double q = finite_or_throw(a / b, "division");
    if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return up(q);
    const double r = std::fma(-q, b, a);
    if (r == 0.0) return q;
    return ((r < 0.0) == (b < 0.0)) ? up(q) : q;
}

} // namespace rounding

Interval::Interval(double v) : Interval(v, v) {}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi)
{
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw IntervalError("interval endpoints must be finite");
    }
    if (lo > hi) {
        throw IntervalError("interval lower bound exceeds upper bound");
    }
    // Normalise -0.0 so that equal intervals compare and print identically.
    if (lo_ == 0.0) lo_ = 0.0;
    if (hi_ == 0.0) hi_ = 0.0;
}

Interval Interval::from_decimal(std::string_view text)
{
    const std::string buf(text);
    if (buf.empty()) throw std::invalid_argument("empty numeric literal");

    auto parse = [&buf](int mode) {
        const int saved = std::fegetround();
        std::fesetround(mode);
        errno = 0;
        char* end = nullptr;
        const double v = std::strtod(buf.c_str(), &end);
        const int err = errno;
        std::fesetround(saved);
        if (end != buf.c_str() + buf.size() || buf.find_first_of("xXnNiI") != std::string::npos) {
            throw std::invalid_argument("malformed numeric literal '" + buf + "'");
        }
        if (err == ERANGE && !std::isfinite(v)) {
            throw IntervalError("numeric literal out of range '" + buf + "'");
        }
        return v;
    };
    const double lo = parse(FE_DOWNWARD);
    const double hi = parse(FE_UPWARD);
    if (lo == hi && !strtod_honours_rounding()) {
        // Only the nearest value is known; the true value is within half a step.
        return Interval(down(lo), up(hi));
    }
    return Interval(lo, hi);
}

Interval Interval::pi() noexcept
{
    // 0x1.921fb54442d18p+1 is the double just below pi.
    constexpr double pi_lo = 0x1.921fb54442d18p+1;
    constexpr double pi_hi = 0x1.921fb54442d19p+1;
    Interval r;
    r.lo_ = pi_lo;
    r.hi_ = pi_hi;
    return r;
}

Interval Interval::two_pi() noexcept
{
    Interval r = pi();
    r.lo_ *= 2.0;
    r.hi_ *= 2.0;
    return r;
}

Interval Interval::half_pi() noexcept
{
    Interval r = pi();
    r.lo_ *= 0.5;
    r.hi_ *= 0.5;
    return r;
}

double Interval::width() const noexcept
{
    const double w = hi_ - lo_;
    if (!std::isfinite(w)) return kInf;
    return two_sum_error(hi_, -lo_, w) > 0.0 ? up(w) : w;
}

double Interval::midpoint() const noexcept
{
    const double m = 0.5 * lo_ + 0.5 * hi_;
    return std::clamp(m, lo_, hi_);
}

double Interval::mag() const noexcept { return std::max(std::fabs(lo_), std::fabs(hi_)); }

Interval& Interval::operator+=(const Interval& rhs) { return *this = *this + rhs; }
Interval& Interval::operator-=(const Interval& rhs) { return *this = *this - rhs; }
Interval& Interval::operator*=(const Interval& rhs) { return *this = *this * rhs; }
Interval& Interval::operator/=(const Interval& rhs) { return *this = *this / rhs; }

Interval operator-(const Interval& a) noexcept
{
    // Negation is exact, endpoints stay finite and ordered.
    return Interval(-a.hi(), -a.lo());
}

Interval operator+(const Interval& a, const Interval& b)
{
    return Interval(rounding::add_down(a.lo(), b.lo()), rounding::add_up(a.hi(), b.hi()));
}

Interval operator-(const Interval& a, const Interval& b)
{
    return Interval(rounding::add_down(a.lo(), -b.hi()), rounding::add_up(a.hi(), -b.lo()));
}

Interval operator*(const Interval& a, const Interval& b)
{
    const double lo = std::min({rounding::mul_down(a.lo(), b.lo()), rounding::mul_down(a.lo(), b.hi()),
                                rounding::mul_down(a.hi(), b.lo()), rounding::mul_down(a.hi(), b.hi())});
    const double hi = std::max({rounding::mul_up(a.lo(), b.lo()), rounding::mul_up(a.lo(), b.hi()),
                                rounding::mul_up(a.hi(), b.lo()), rounding::mul_up(a.hi(), b.hi())});
    return Interval(lo, hi);
}

Interval operator/(const Interval& a, const Interval& b)
{
    if (b.lo() <= 0.0 && b.hi() >= 0.0) {
        throw IntervalError("division by interval containing zero");
    }
    const double lo = std::min({rounding::div_down(a.lo(), b.lo()), rounding::div_down(a.lo(), b.hi()),
                                rounding::div_down(a.hi(), b.lo()), rounding::div_down(a.hi(), b.hi())});
    const double hi = std::max({rounding::div_up(a.lo(), b.lo()), rounding::div_up(a.lo(), b.hi()),
                                rounding::div_up(a.hi(), b.lo()), rounding::div_up(a.hi(), b.hi())});
    return Interval(lo, hi);
}

Interval operator+(const Interval& a, double b) { return a + Interval(b); }
Interval operator-(const Interval& a, double b) { return a - Interval(b); }
Interval operator*(const Interval& a, double b) { return a * Interval(b); }
Interval operator/(const Interval& a, double b) { return a / Interval(b); }
Interval operator+(double a, const Interval& b) { return Interval(a) + b; }
Interval operator-(double a, const Interval& b) { return Interval(a) - b; }
Interval operator*(double a, const Interval& b) { return Interval(a) * b; }
Interval operator/(double a, const Interval& b) { return Interval(a) / b; }

Interval power(const Interval& a, unsigned n)
{
    if (n == 0) return Interval(1.0);
    const double lo = a.lo();
    const double hi = a.hi();
    if (n % 2 == 0) {
        if (lo >= 0.0) return Interval(pow_down_nonneg(lo, n), pow_up_nonneg(hi, n));
        if (hi <= 0.0) return Interval(pow_down_nonneg(-hi, n), pow_up_nonneg(-lo, n));
        return Interval(0.0, pow_up_nonneg(std::max(-lo, hi), n));
    }
    const double rlo = lo >= 0.0 ? pow_down_nonneg(lo, n) : -pow_up_nonneg(-lo, n);
    const double rhi = hi >= 0.0 ? pow_up_nonneg(hi, n) : -pow_down_nonneg(-hi, n);
    return Interval(rlo, rhi);
}

Interval sqr(const Interval& a) { return power(a, 2); }

Interval abs(const Interval& a)
{
    if (a.lo() >= 0.0) return a;
    if (a.hi() <= 0.0) return -a;
    return Interval(0.0, a.mag());
}

Interval sin(const Interval& a)
{
    if (a.is_degenerate() && a.lo() == 0.0) return Interval(0.0);
    if (!std::isfinite(a.hi() - a.lo()) || a.hi() - a.lo() >= 7.0) return Interval(-1.0, 1.0);
    Interval r = hull(pad_unit(std::sin(a.lo())), pad_unit(std::sin(a.hi())));
    const Interval half_pi = Interval::half_pi();
    if (may_contain_periodic(a.lo(), a.hi(), half_pi)) r = Interval(r.lo(), 1.0);
    if (may_contain_periodic(a.lo(), a.hi(), -half_pi)) r = Interval(-1.0, r.hi());
    return r;
}

Interval cos(const Interval& a)
{
    if (a.is_degenerate() && a.lo() == 0.0) return Interval(1.0);
    if (!std::isfinite(a.hi() - a.lo()) || a.hi() - a.lo() >= 7.0) return Interval(-1.0, 1.0);
    Interval r = hull(pad_unit(std::cos(a.lo())), pad_unit(std::cos(a.hi())));
    if (may_contain_periodic(a.lo(), a.hi(), Interval(0.0))) r = Interval(r.lo(), 1.0);
    if (may_contain_periodic(a.lo(), a.hi(), Interval::pi())) r = Interval(-1.0, r.hi());
    return r;
}

Interval part(const Interval& x, std::size_t n, std::size_t k)
{
    if (n == 0) throw std::invalid_argument("part: number of pieces must be positive");
    if (k >= n) {
        throw std::out_of_range("part: index " + std::to_string(k) + " out of range for " +
                                std::to_string(n) + " pieces");
    }
    const Interval lo(x.lo());
    const Interval span = Interval(x.hi()) - lo;
    const Interval count(static_cast<double>(n));
    auto boundary = [&](std::size_t i) {
        if (i == 0) return lo;
        if (i == n) return Interval(x.hi());
        return lo + Interval(static_cast<double>(i)) * span / count;
    };
    const double plo = std::max(boundary(k).lo(), x.lo());
    const double phi = std::min(boundary(k + 1).hi(), x.hi());
    return Interval(plo, phi);
}

std::pair<Interval, Interval> bisect(const Interval& x)
{
    const double m = x.midpoint();
    return {Interval(x.lo(), m), Interval(m, x.hi())};
}

Interval hull(const Interval& a, const Interval& b) noexcept
{
    return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) noexcept
{
    if (!intersects(a, b)) return std::nullopt;
    return Interval(std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

bool certainly_less(const Interval& a, const Interval& b) noexcept { return a.hi() < b.lo(); }
bool certainly_greater(const Interval& a, const Interval& b) noexcept { return a.lo() > b.hi(); }
bool subset(const Interval& a, const Interval& b) noexcept { return b.lo() <= a.lo() && a.hi() <= b.hi(); }
bool subset_interior(const Interval& a, const Interval& b) noexcept
{
    return b.lo() < a.lo() && a.hi() < b.hi();
}
bool contains(const Interval& a, double p) noexcept { return a.lo() <= p && p <= a.hi(); }
bool intersects(const Interval& a, const Interval& b) noexcept
{
    return a.lo() <= b.hi() && b.lo() <= a.hi();
}

std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string to_string(const Interval& a)
{
    return "[" + format_double(a.lo()) + ", " + format_double(a.hi()) + "]";
}

std::ostream& operator<<(std::ostream& os, const Interval& a) { return os << to_string(a); }

} // namespace covrel
