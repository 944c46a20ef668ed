#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace covrel {

/// Raised for operations whose result cannot be enclosed by a finite
/// interval (division by an interval containing zero, overflow, bad bounds).
class IntervalError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Closed interval [lo, hi] of doubles with finite endpoints.
///
/// Every arithmetic operation returns the tightest double interval that
/// contains the exact real result. Directed rounding is done without
/// touching the FPU rounding mode: each endpoint is computed in
/// round-to-nearest and the rounding error is recovered exactly with an
/// error-free transformation (TwoSum for +/-, fma residuals for * and /).
/// The endpoint is then moved one step with nextafter only when the sign of
/// the error says the nearest result lies on the wrong side. In the
/// underflow range, where the residual is no longer exact, the endpoint is
/// always widened by one step.
///
/// Empty intervals are not representable. Disjointness is tested with the
/// predicates below.
class Interval {
public:
    constexpr Interval() noexcept = default;

    /// Degenerate interval [v, v]. Throws IntervalError if v is not finite.
    explicit Interval(double v);

    /// Throws IntervalError unless lo <= hi and both are finite.
    Interval(double lo, double hi);

    /// Rigorous enclosure of a decimal literal such as "1.2" or "-3e-2"
    /// (exact when the literal is a double). Throws std::invalid_argument on
    /// malformed input.
    static Interval from_decimal(std::string_view text);

    static Interval pi() noexcept;
    static Interval two_pi() noexcept;
    static Interval half_pi() noexcept;

    [[nodiscard]] constexpr double lo() const noexcept { return lo_; }
    [[nodiscard]] constexpr double hi() const noexcept { return hi_; }

    /// Upper bound on hi - lo.
    [[nodiscard]] double width() const noexcept;
    /// A double inside the interval, close to the centre.
    [[nodiscard]] double midpoint() const noexcept;
    /// Largest absolute value of a member.
    [[nodiscard]] double mag() const noexcept;
    [[nodiscard]] bool is_degenerate() const noexcept { return lo_ == hi_; }

    Interval& operator+=(const Interval& rhs);
    Interval& operator-=(const Interval& rhs);
    Interval& operator*=(const Interval& rhs);
    Interval& operator/=(const Interval& rhs);

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

Interval operator-(const Interval& a) noexcept;
Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
/// Throws IntervalError("division by interval containing zero") if 0 ∈ b.
Interval operator/(const Interval& a, const Interval& b);

Interval operator+(const Interval& a, double b);
Interval operator-(const Interval& a, double b);
Interval operator*(const Interval& a, double b);
Interval operator/(const Interval& a, double b);
Interval operator+(double a, const Interval& b);
Interval operator-(double a, const Interval& b);
Interval operator*(double a, const Interval& b);
Interval operator/(double a, const Interval& b);

/// Range of x^n. Even powers straddling zero start at exactly 0.
Interval power(const Interval& a, unsigned n);
Interval sqr(const Interval& a);
Interval abs(const Interval& a);

/// Range enclosures of sin and cos, clipped to [-1, 1]. Endpoint values come
/// from the C library and are padded by two ulps each side; interior extrema
/// are located against a certified enclosure of pi.
Interval sin(const Interval& a);
Interval cos(const Interval& a);

/// k-th of n equal pieces of x, 0 <= k < n. Piece boundaries are enclosed
/// rigorously, so neighbouring pieces may overlap by a rounding step but
/// never leave a gap. Piece 0 starts exactly at x.lo(), piece n-1 ends
/// exactly at x.hi(). Throws std::out_of_range for k >= n.
Interval part(const Interval& x, std::size_t n, std::size_t k);

/// Two halves sharing the midpoint.
std::pair<Interval, Interval> bisect(const Interval& x);

Interval hull(const Interval& a, const Interval& b) noexcept;
/// Intersection, or nullopt when the intervals are disjoint.
std::optional<Interval> intersect(const Interval& a, const Interval& b) noexcept;

// Predicates hold only when the relation is certain for every member.
[[nodiscard]] bool certainly_less(const Interval& a, const Interval& b) noexcept;
[[nodiscard]] bool certainly_greater(const Interval& a, const Interval& b) noexcept;
[[nodiscard]] bool subset(const Interval& a, const Interval& b) noexcept;
[[nodiscard]] bool subset_interior(const Interval& a, const Interval& b) noexcept;
[[nodiscard]] bool contains(const Interval& a, double p) noexcept;
[[nodiscard]] bool intersects(const Interval& a, const Interval& b) noexcept;

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);
std::string to_string(const Interval& a);
std::ostream& operator<<(std::ostream& os, const Interval& a);

namespace rounding {
// Correctly directed results of a single double operation.
double add_down(double a, double b);
double add_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);
} // namespace rounding

} // namespace covrel
