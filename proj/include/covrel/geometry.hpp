#pragma once

#include "covrel/interval.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace covrel {

/// D = {(theta; x, y) : theta on the base circle, |x| <= r_u, |y| <= r_s}.
///
/// Radii are intervals so that decimal inputs like 1.2 keep their exact
/// meaning. Tests that must hold on all of D use the outer bound of a radius
/// and tests that must keep a point strictly inside use the inner bound.
struct DomainSpec {
    Interval r_u{1.0};
    Interval r_s{1.0};
    Interval period = Interval::two_pi();
    /// Orientation reversal of the stable bundle at theta = 0. Checks are
    /// symmetric under y -> -y, so this only affects exported plot data.
    bool mobius_stable = false;

    /// Throws std::invalid_argument unless both radii are strictly positive.
    void validate() const;

    /// [-r_u, r_u] using the outer radius; an x certainly outside is outside D.
    [[nodiscard]] Interval unstable_box() const;
    /// [-r_s, r_s] using the outer radius.
    [[nodiscard]] Interval stable_box() const;
    /// [-r_s, r_s] using the inner radius; a y in its interior is off D+.
    [[nodiscard]] Interval stable_inner() const;
    /// [0, period].
    [[nodiscard]] Interval base() const;
};

/// A box in (alpha, beta, theta, x, y). alpha is the homotopy parameter and
/// beta an optional family parameter; both default to [0, 0].
struct Cell {
    Interval theta;
    Interval x;
    Interval y;
    Interval alpha;
    Interval beta;

    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Splits the widest non-degenerate coordinate in two. nullopt when every
/// coordinate is a point.
std::optional<std::pair<Cell, Cell>> split_widest(const Cell& c);

/// Bisects theta, x and y (8 children, alpha and beta untouched). Children
/// are ordered lexicographically in (theta, x, y).
std::array<Cell, 8> split_all(const Cell& c);

std::string to_string(const Cell& c);

/// Grid counts for alpha, theta and the two fiber coordinates, plus an
/// optional count for a family parameter.
struct SubdivisionScheme {
    std::size_t n_alpha = 1;
    std::size_t n_theta = 1;
    std::size_t n_x = 1;
    std::size_t n_y = 1;
    std::size_t n_beta = 1;

    void validate() const;
    /// "a,t,x,y" or "a,t,x,y,b".
    static SubdivisionScheme parse(std::string_view text);
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const SubdivisionScheme&, const SubdivisionScheme&) = default;
};

/// Pieces along one coordinate.
using Axis = std::vector<Interval>;

/// x split into n pieces with part().
Axis partition(const Interval& x, std::size_t n);

/// Lazily indexed product of five axes. Linear index order is
/// lexicographic in (alpha, beta, theta, x, y), y fastest.
class CellGrid {
public:
    CellGrid(Axis alpha, Axis beta, Axis theta, Axis x, Axis y);

    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] Cell operator[](std::size_t index) const;
    [[nodiscard]] std::vector<Cell> materialize() const;

private:
    std::array<Axis, 5> axes_;
    std::size_t size_;
};

/// Grid covering alpha_range x beta_range x D with the scheme's counts.
CellGrid interior_grid(const DomainSpec& d, const SubdivisionScheme& s,
                       const Interval& alpha_range = Interval(0.0, 1.0),
                       const Interval& beta_range = Interval(0.0));

/// Grid over the exit set D-: x runs over the two faces {-r_u} and {r_u}
/// (left first), theta, y, alpha and beta are subdivided.
CellGrid exit_face_grid(const DomainSpec& d, const SubdivisionScheme& s,
                        const Interval& alpha_range = Interval(0.0, 1.0),
                        const Interval& beta_range = Interval(0.0));

std::vector<Cell> subdivide(const DomainSpec& d, const SubdivisionScheme& s);
std::vector<Cell> exit_faces(const DomainSpec& d, const SubdivisionScheme& s);

/// Enclosure of theta reduced into [0, period). When theta may cross a
/// multiple of the period the result is the whole [0, period].
Interval wrap(const Interval& theta, const Interval& period = Interval::two_pi());

} // namespace covrel
