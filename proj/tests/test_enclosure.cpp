#include <covrel/enclosure.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using covrel::Cell;
using covrel::EnclosureDomain;
using covrel::EnclosureRun;
using covrel::Interval;

namespace {

const covrel::Params kMu{{"mu", covrel::evaluate_constant("1/10")}};

EnclosureRun cap_run(std::size_t n, std::size_t steps)
{
    EnclosureRun run;
    run.domain = EnclosureDomain::box(Interval(2.0), true);
    run.map = covrel::builtin_map("cap_map", kMu);
    run.n_theta = run.n_x = run.n_y = n;
    run.refine_steps = steps;
    return covrel::propagate(run);
}

double volume(const std::vector<Cell>& cells)
{
    double v = 0.0;
    for (const Cell& c : cells) v += c.theta.width() * c.x.width() * c.y.width();
    return v;
}

bool any_contains(const std::vector<Cell>& cells, double t, double x, double y)
{
    for (const Cell& c : cells) {
        if (covrel::contains(c.theta, t) && covrel::contains(c.x, x) && covrel::contains(c.y, y)) return true;
    }
    return false;
}

covrel::MapSpec shift_map(const std::string& x_out)
{
    covrel::ExpressionMapDefinition def;
    def.theta_out = "theta";
    def.x_out = x_out;
    def.y_out = "y";
    return covrel::expression_map(def);
}

} // namespace

TEST_CASE("certainly_outside")
{
    const auto d = EnclosureDomain::box(Interval(2.0), true);
    CHECK(d.full_circle());
    auto cell = [](Interval t, Interval x, Interval y) { return Cell{t, x, y, Interval(0.0), Interval(0.0)}; };
    const Interval t(0, 1);
    CHECK(covrel::certainly_outside(d, cell(t, Interval(2.1, 3), Interval(0, 1))));
    CHECK(covrel::certainly_outside(d, cell(t, Interval(1.5, 2), Interval(1.5, 2))));
    CHECK(!covrel::certainly_outside(d, cell(t, Interval(1.9, 2), Interval(0, 0.1))));
    CHECK(!covrel::certainly_outside(d, cell(t, Interval(-2, 2), Interval(-2, 2))));
    // The open disc excludes its boundary circle.
    CHECK(covrel::certainly_outside(d, cell(t, Interval(2.0), Interval(0.0))));
    const auto box = EnclosureDomain::box(Interval(2.0), false);
    CHECK(!covrel::certainly_outside(box, cell(t, Interval(1.5, 2), Interval(1.5, 2))));

    EnclosureDomain arc = box;
    arc.theta = Interval(1, 2);
    CHECK(!arc.full_circle());
    CHECK(covrel::certainly_outside(arc, cell(Interval(3, 3.5), Interval(0.0), Interval(0.0))));
    CHECK(!covrel::certainly_outside(arc, cell(Interval(7.5, 7.6), Interval(0.0), Interval(0.0))));
    CHECK(!covrel::certainly_outside(arc, cell(Interval(-5.2, -5.1), Interval(0.0), Interval(0.0))));
}

TEST_CASE("linear NHIM: only cells near x = 0 survive")
{
    EnclosureRun run;
    run.domain = EnclosureDomain::box(Interval(1.0), false);
    run.map = covrel::builtin_map("linear_nhim", {{"a", Interval(4.0)}, {"b", Interval(0.1)}});
    run.n_theta = 4;
    run.n_x = 16;
    run.n_y = 4;
    run.max_iterates = 3;
    run.refine_steps = 1;
    run = covrel::propagate(run);
    for (std::size_t step = 0; step < run.survivors.size(); ++step) {
        REQUIRE(!run.survivors[step].empty());
        for (const Cell& c : run.survivors[step]) {
            // 4^3 |x| > 1 escapes, so survivors meet |x| <= 1/64.
            CHECK(c.x.lo() <= 1.0 / 64);
            CHECK(c.x.hi() >= -1.0 / 64);
        }
    }
    std::size_t straddling = 0;
    for (const Cell& c : run.initial) {
        if (covrel::contains(c.x, 0.0)) {
            ++straddling;
            CHECK(!covrel::escape_iterate(run.map, run.domain, c, run.max_iterates));
        }
    }
    CHECK(straddling == 4 * 2 * 4);
    CHECK(run.survivors[0].size() == straddling);
    // Cells [1/8, 1/4]: 4^2 * 1/8 = 2 > 1, certified at the second iterate.
    const Cell c{Interval(0, 1), Interval(0.125, 0.25), Interval(0, 0.5), Interval(0.0), Interval(0.0)};
    CHECK(covrel::escape_iterate(run.map, run.domain, c, 3) == std::optional<std::size_t>(2));
}

TEST_CASE("zero refinement steps")
{
    EnclosureRun run = cap_run(8, 0);
    REQUIRE(run.survivors.size() == 1);
    CHECK(run.initial.size() == 512);
    std::vector<Cell> expected;
    for (const Cell& c : run.initial) {
        if (!covrel::escape_iterate(run.map, run.domain, c, run.max_iterates)) expected.push_back(c);
    }
    CHECK(run.survivors[0] == expected);
    CHECK(run.discarded[0] == run.initial.size() - expected.size());
}

TEST_CASE("refinement structure")
{
    const EnclosureRun run = cap_run(8, 2);
    REQUIRE(run.survivors.size() == 3);
    CHECK(!run.survivors[2].empty());
    for (std::size_t s = 0; s + 1 < run.survivors.size(); ++s) {
        CHECK(volume(run.survivors[s + 1]) <= volume(run.survivors[s]) * (1 + 1e-9));
        CHECK(run.survivors[s + 1].size() + run.discarded[s + 1] == 8 * run.survivors[s].size());
        for (const Cell& child : run.survivors[s + 1]) {
            bool has_parent = false;
            for (const Cell& p : run.survivors[s]) {
                if (covrel::subset(child.theta, p.theta) && covrel::subset(child.x, p.x) &&
                    covrel::subset(child.y, p.y)) {
                    has_parent = true;
                    break;
                }
            }
            CHECK(has_parent);
        }
    }

    // Certificates replay.
    std::size_t discarded = 0;
    for (const Cell& c : run.initial) {
        const auto first = covrel::escape_iterate(run.map, run.domain, c, run.max_iterates);
        CHECK(first == covrel::escape_iterate(run.map, run.domain, c, run.max_iterates));
        discarded += first.has_value();
    }
    CHECK(discarded == run.discarded[0]);
}

TEST_CASE("sampled orbits stay in survivors")
{
    const EnclosureRun run = cap_run(8, 2);
    // x = 0 is invariant: (theta; 0, y) -> (3 theta; 0, mu y + 2 sin(theta) / 5).
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
    std::uniform_real_distribution<double> v(-1.0, 1.0);
    const double two_pi = 2 * std::numbers::pi;
    int missing = 0;
    for (int orbit = 0; orbit < 3; ++orbit) {
        double t = u(rng), x = 0.0, y = v(rng);
        for (int i = 0; i < 1100; ++i) {
            const double nt = std::fmod(3 * t + x * y * std::sin(t), two_pi);
            const double nx = -8 * x / 5 + 4 * x * x * x + x * y / 2;
            const double ny = 0.1 * y + 2 * std::sin(t) / 5 + x * std::cos(t);
            t = nt < 0 ? nt + two_pi : nt;
            x = nx;
            y = ny;
            if (i < 100) continue;
            for (const auto& cells : run.survivors) missing += !any_contains(cells, t, x, y);
        }
    }
    CHECK(missing == 0);
}

TEST_CASE("slices")
{
    const EnclosureRun run = cap_run(8, 1);
    const double theta = std::numbers::pi / 3;
    const auto s = covrel::slice(run, theta);
    CHECK(!s.empty());
    for (const Cell& c : s) CHECK(covrel::contains(c.theta, theta));
    CHECK(covrel::slice(run, theta + 2 * std::numbers::pi) == s);
    CHECK(covrel::slice(run, theta - 4 * std::numbers::pi) == s);
    CHECK(covrel::slice(run, theta, 0).size() <= covrel::slice_initial(run, theta).size());
    CHECK_THROWS_AS(covrel::slice(run, theta, 5), std::out_of_range);

    EnclosureRun gone;
    gone.domain = EnclosureDomain::box(Interval(1.0), false);
    gone.map = shift_map("x + 5");
    gone.n_theta = gone.n_x = gone.n_y = 4;
    gone = covrel::propagate(gone);
    CHECK(gone.survivors.back().empty());
    CHECK(covrel::slice(gone, 1.0).empty());
}

TEST_CASE("blow-up keeps the cell")
{
    const auto d = EnclosureDomain::box(Interval(1.0), false);
    const auto inv = shift_map("1/x");
    const Cell c{Interval(0, 1), Interval(-0.5, 0.5), Interval(0, 1), Interval(0.0), Interval(0.0)};
    CHECK(!covrel::escape_iterate(inv, d, c, 3));
    const Cell away{Interval(0, 1), Interval(0.25, 0.5), Interval(0, 1), Interval(0.0), Interval(0.0)};
    CHECK(covrel::escape_iterate(inv, d, away, 3) == std::optional<std::size_t>(1));
}

TEST_CASE("invalid runs")
{
    EnclosureRun run;
    run.map = covrel::builtin_map("cap_map", kMu);
    run.max_iterates = 0;
    CHECK_THROWS_AS(covrel::propagate(run), std::invalid_argument);
    run.max_iterates = 1;
    run.n_x = 0;
    CHECK_THROWS_AS(covrel::propagate(run), std::invalid_argument);
    EnclosureRun empty;
    CHECK_THROWS_AS(covrel::propagate(empty), std::invalid_argument);
}

TEST_CASE("jobs do not change survivors")
{
    EnclosureRun a;
    a.domain = EnclosureDomain::box(Interval(2.0), true);
    a.map = covrel::builtin_map("cap_map", kMu);
    a.n_theta = a.n_x = a.n_y = 6;
    EnclosureRun b = a;
    b.jobs = 3;
    CHECK(covrel::propagate(a).survivors == covrel::propagate(b).survivors);
}
