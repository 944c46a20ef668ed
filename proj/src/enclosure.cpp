#include "covrel/enclosure.hpp"

#include "parallel.hpp"

#include <stdexcept>

namespace covrel {

EnclosureDomain EnclosureDomain::box(const Interval& r, bool disc)
{
    EnclosureDomain d;
    d.x = Interval(-r.hi(), r.hi());
    d.y = Interval(-r.hi(), r.hi());
    if (disc) d.disc_radius = r;
    return d;
}

bool EnclosureDomain::full_circle() const noexcept { return theta.lo() <= 0.0 && theta.hi() >= period.lo(); }

namespace {

bool theta_outside(const EnclosureDomain& d, const Interval& theta)
{
    if (d.full_circle()) return false;
    const Interval t = wrap(theta, d.period);
    // Compare with the domain and its copies one period to either side.
    for (double shift : {-1.0, 0.0, 1.0}) {
        const Interval copy = d.theta + Interval(shift) * d.period;
        if (intersects(t, copy)) return false;
    }
    return true;
}

std::optional<Interval> clip(const Interval& v, const Interval& box) { return intersect(v, box); }

} // namespace

bool certainly_outside(const EnclosureDomain& d, const Cell& c)
{
    if (!intersects(c.x, d.x) || !intersects(c.y, d.y)) return true;
    if (theta_outside(d, c.theta)) return true;
    if (d.disc_radius) {
        const Interval r2 = sqr(c.x) + sqr(c.y);
        if (r2.lo() >= sqr(*d.disc_radius).hi()) return true;
    }
    return false;
}

std::optional<std::size_t> escape_iterate(const MapSpec& f, const EnclosureDomain& d, const Cell& c,
                                          std::size_t max_iterates)
{
    if (certainly_outside(d, c)) return 0;
    Cell current = c;
    for (std::size_t j = 1; j <= max_iterates; ++j) {
        Image img;
        try {
            img = f.eval(current);
        } catch (const IntervalError&) {
            return std::nullopt;
        }
        const Cell image{img.theta, img.x, img.y, c.alpha, c.beta};
        if (certainly_outside(d, image)) return j;
        // Points that already left play no further role; keep the rest.
        auto x = clip(image.x, d.x);
        auto y = clip(image.y, d.y);
        if (!x || !y) return j;
        current = Cell{d.full_circle() ? wrap(image.theta, d.period) : image.theta, *x, *y, c.alpha, c.beta};
    }
    return std::nullopt;
}

namespace {

std::vector<Cell> keep_survivors(const EnclosureRun& run, const std::vector<Cell>& candidates)
{
    std::vector<char> keep(candidates.size(), 0);
    detail::parallel_for(0, candidates.size(), run.jobs, [&](std::size_t i) {
        keep[i] = !escape_iterate(run.map, run.domain, candidates[i], run.max_iterates).has_value();
    });
    std::vector<Cell> out;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (keep[i]) out.push_back(candidates[i]);
    }
    return out;
}

} // namespace

EnclosureRun propagate(EnclosureRun run)
{
    if (run.max_iterates < 1) throw std::invalid_argument("enclosure needs max_iterates >= 1");
    if (run.n_theta == 0 || run.n_x == 0 || run.n_y == 0) throw std::invalid_argument("enclosure grid counts must be positive");
    if (!run.map.eval) throw std::invalid_argument("enclosure needs a map");

    // The whole family range is iterated at once, so survivors enclose the
    // invariant sets of every member.
    const Interval beta = run.map.beta_range;
    const CellGrid grid(Axis{Interval(0.0)}, Axis{beta}, partition(run.domain.theta, run.n_theta),
                        partition(run.domain.x, run.n_x), partition(run.domain.y, run.n_y));
    run.initial = grid.materialize();
    run.survivors.clear();
    run.discarded.clear();

    std::vector<Cell> current = keep_survivors(run, run.initial);
    run.discarded.push_back(run.initial.size() - current.size());
    run.survivors.push_back(current);
    for (std::size_t step = 1; step <= run.refine_steps; ++step) {
        std::vector<Cell> children;
        children.reserve(current.size() * 8);
        for (const Cell& c : current) {
            for (const Cell& child : split_all(c)) children.push_back(child);
        }
        current = keep_survivors(run, children);
        run.discarded.push_back(children.size() - current.size());
        run.survivors.push_back(current);
    }
    return run;
}

namespace {

std::vector<Cell> cells_at(const std::vector<Cell>& cells, const EnclosureRun& run, double theta)
{
    const Interval t = wrap(Interval(theta), run.domain.period);
    std::vector<Cell> out;
    for (const Cell& c : cells) {
        if (intersects(c.theta, t)) out.push_back(c);
    }
    return out;
}

} // namespace

std::vector<Cell> slice(const EnclosureRun& run, double theta, std::optional<std::size_t> step)
{
    if (run.survivors.empty()) return {};
    const std::size_t s = step.value_or(run.survivors.size() - 1);
    if (s >= run.survivors.size()) throw std::out_of_range("slice: no such refinement step");
    return cells_at(run.survivors[s], run, theta);
}

std::vector<Cell> slice_initial(const EnclosureRun& run, double theta) { return cells_at(run.initial, run, theta); }

} // namespace covrel
