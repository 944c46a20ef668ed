#pragma once

#include "covrel/dynamics.hpp"
#include "covrel/geometry.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace covrel {

/// Search region for the invariant-set enclosure: a coordinate box, with an
/// optional open disc {x^2 + y^2 < r^2} constraint on the fibers.
struct EnclosureDomain {
    Interval theta = Interval(0.0, Interval::two_pi().hi());
    Interval x = Interval(-1.0, 1.0);
    Interval y = Interval(-1.0, 1.0);
    std::optional<Interval> disc_radius;
    Interval period = Interval::two_pi();

    /// Box [0, 2pi] x [-r, r]^2, optionally with the disc constraint.
    static EnclosureDomain box(const Interval& r, bool disc);

    [[nodiscard]] bool full_circle() const noexcept;
};

/// true when every point of the cell is certainly outside the domain.
bool certainly_outside(const EnclosureDomain& d, const Cell& c);

struct EnclosureRun {
    EnclosureDomain domain;
    MapSpec map;
    std::size_t n_theta = 16;
    std::size_t n_x = 16;
    std::size_t n_y = 16;
    std::size_t max_iterates = 3;
    std::size_t refine_steps = 2;
    unsigned jobs = 1;

    /// Filled by propagate(): the initial grid, then the survivors after
    /// step 0 (initial grid minus escaping cells) up to step refine_steps.
    std::vector<Cell> initial;
    std::vector<std::vector<Cell>> survivors;
    std::vector<std::size_t> discarded;
};

/// Iterate (0 = the cell itself) at which the cell is certified to have
/// left the domain, or nullopt when no certificate is found within
/// max_iterates. Each image is clipped to the domain box before the next
/// iterate; interval blow-up keeps the cell.
std::optional<std::size_t> escape_iterate(const MapSpec& f, const EnclosureDomain& d, const Cell& c,
                                          std::size_t max_iterates);

/// Runs the discard-and-refine procedure. Each step bisects every survivor
/// in theta, x and y and keeps the children without an escape certificate.
EnclosureRun propagate(EnclosureRun run);

/// Survivors of a step (default: the last) whose theta range meets theta
/// reduced modulo the period.
std::vector<Cell> slice(const EnclosureRun& run, double theta, std::optional<std::size_t> step = std::nullopt);

/// Initial grid cells whose theta range meets theta.
std::vector<Cell> slice_initial(const EnclosureRun& run, double theta);

} // namespace covrel
