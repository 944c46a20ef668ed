#include "covrel/covering.hpp"

#include "parallel.hpp"

#include <chrono>
#include <cmath>

namespace covrel {

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Verified: return "VERIFIED";
    case Verdict::NotVerified: return "NOT_VERIFIED";
    case Verdict::Error: return "ERROR";
    }
    return "ERROR";
}

std::string to_string(Mode m)
{
    switch (m) {
    case Mode::Fiber: return "fiber";
    case Mode::Full: return "full";
    case Mode::Sequence: return "sequence";
    }
    return "full";
}

std::string to_string(Condition c)
{
    switch (c) {
    case Condition::Exit: return "exit";
    case Condition::Entry: return "entry";
    case Condition::Expansion: return "expansion";
    case Condition::Degree: return "degree";
    }
    return "exit";
}

Mode parse_mode(std::string_view text)
{
    if (text == "fiber") return Mode::Fiber;
    if (text == "full") return Mode::Full;
    if (text == "sequence") return Mode::Sequence;
    throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected fiber, full or sequence)");
}

namespace {

bool x_outside(const Interval& x, const DomainSpec& d)
{
    const Interval slab = d.unstable_box();
    return certainly_less(x, slab) || certainly_greater(x, slab);
}

Image expansion_image(const HomotopySpec& h, const DomainSpec& d, const Interval& theta)
{
    return Image{theta, h.expansion(theta) * d.r_u, Interval(0.0)};
}

template <class Pred>
std::optional<Cell> failing_leaf(const Cell& c, const Pred& holds, std::size_t depth)
{
    if (holds(c)) return std::nullopt;
    if (depth == 0) return c;
    auto halves = split_widest(c);
    if (!halves) return c;
    if (auto leaf = failing_leaf(halves->first, holds, depth - 1)) return leaf;
    return failing_leaf(halves->second, holds, depth - 1);
}

template <class Pred>
ConditionResult scan(const CellGrid& grid, Condition condition, const Pred& holds, const HomotopySpec& h,
                     const CheckOptions& opt)
{
    constexpr std::size_t kChunk = 4096;
    ConditionResult result{condition, true, 0, {}, false};
    std::vector<std::optional<Cell>> leaves;
    for (std::size_t start = 0; start < grid.size(); start += kChunk) {
        const std::size_t end = std::min(grid.size(), start + kChunk);
        leaves.assign(end - start, std::nullopt);
        detail::parallel_for(start, end, opt.jobs,
                             [&](std::size_t i) { leaves[i - start] = failing_leaf(grid[i], holds, opt.refine_depth); });
        result.cells_checked = end;
        for (auto& leaf : leaves) {
            if (!leaf) continue;
            result.ok = false;
            if (opt.max_failures == 0 || result.failures.size() < opt.max_failures) {
                result.failures.push_back({condition, *leaf, eval_homotopy(h, *leaf)});
            } else {
                result.truncated = true;
            }
        }
        if (opt.max_failures != 0 && result.failures.size() >= opt.max_failures) {
            if (end < grid.size()) result.truncated = true;
            break;
        }
    }
    return result;
}

void require_homotopy(const HomotopySpec& h)
{
    if (!h.eval) throw std::invalid_argument("homotopy '" + h.name + "' has no evaluator");
}

} // namespace

bool exit_holds(const HomotopySpec& h, const DomainSpec& d, const Cell& c)
{
    return x_outside(eval_homotopy(h, c).x, d);
}

bool entry_holds(const HomotopySpec& h, const DomainSpec& d, const Cell& c)
{
    const Image img = eval_homotopy(h, c);
    return x_outside(img.x, d) || subset_interior(img.y, d.stable_inner());
}

bool expansion_holds(const HomotopySpec& h, const Interval& theta)
{
    const Interval a = h.expansion(theta);
    return a.lo() > 1.0 || a.hi() < -1.0;
}

ConditionResult check_exit(const HomotopySpec& h, const DomainSpec& d, const SubdivisionScheme& s,
                           const CheckOptions& opt)
{
    require_homotopy(h);
    const CellGrid grid = exit_face_grid(d, s, Interval(0.0, 1.0), h.beta_range);
    return scan(grid, Condition::Exit, [&](const Cell& c) { return exit_holds(h, d, c); }, h, opt);
}

ConditionResult check_entry(const HomotopySpec& h, const DomainSpec& d, const SubdivisionScheme& s,
                            const CheckOptions& opt)
{
    require_homotopy(h);
    const CellGrid grid = interior_grid(d, s, Interval(0.0, 1.0), h.beta_range);
    return scan(grid, Condition::Entry, [&](const Cell& c) { return entry_holds(h, d, c); }, h, opt);
}

ConditionResult check_expansion(const HomotopySpec& h, const DomainSpec& d, std::size_t n_theta)
{
    if (!h.expansion) throw std::invalid_argument("homotopy '" + h.name + "' declares no expansion coefficient A");
    d.validate();
    ConditionResult result{Condition::Expansion, true, 0, {}, false};
    for (std::size_t i = 0; i < n_theta; ++i) {
        const Interval theta = part(d.base(), n_theta, i);
        ++result.cells_checked;
        if (!expansion_holds(h, theta)) {
            result.ok = false;
            const Cell c{theta, d.r_u, d.stable_box(), Interval(1.0), h.beta_range};
            result.failures.push_back({Condition::Expansion, c, expansion_image(h, d, theta)});
        }
    }
    return result;
}

long compute_degree(const EtaLift& eta, std::size_t n_theta, const Interval& period, std::size_t depth_limit)
{
    if (!eta.lift) throw std::invalid_argument("eta lift has no evaluator");
    if (n_theta == 0) throw std::invalid_argument("degree needs at least one base piece");
    const double half_period = period.lo() / 2.0;
    Interval total(0.0);

    // Accumulates L(b) - L(a) for a piece [a, b] whose whole lift image is
    // narrower than half a period; wider pieces are bisected.
    auto accumulate = [&](auto&& self, const Interval& a, const Interval& b, std::size_t depth) -> void {
        const Interval piece(a.lo(), b.hi());
        try {
            if (eta.lift(piece).width() < half_period) {
                total += eta.lift(b) - eta.lift(a);
                return;
            }
        } catch (const IntervalError& e) {
            throw DegreeError(std::string("degree not certifiable: ") + e.what());
        }
        if (depth >= depth_limit) throw DegreeError("degree not certifiable at depth limit");
        const Interval m(piece.midpoint());
        if (m.lo() <= a.hi() || m.hi() >= b.lo()) throw DegreeError("degree not certifiable at depth limit");
        self(self, a, m, depth + 1);
        self(self, m, b, depth + 1);
    };

    const Interval base(0.0, period.hi());
    Interval prev(0.0);
    for (std::size_t i = 1; i <= n_theta; ++i) {
        const Interval next = i == n_theta ? period : Interval(part(base, n_theta, i - 1).hi());
        accumulate(accumulate, prev, next, 0);
        prev = next;
    }
    const Interval turns = total / period;
    const double k = std::ceil(turns.lo());
    if (k != std::floor(turns.hi())) {
        throw DegreeError("lift increment " + to_string(total) + " does not enclose a unique multiple of the period");
    }
    return static_cast<long>(k);
}

namespace {

using Clock = std::chrono::steady_clock;

void merge(CoveringReport& r, ConditionResult&& c)
{
    for (auto& f : c.failures) r.failed_cells.push_back(std::move(f));
    if (!c.ok) {
        r.reasons.push_back(to_string(c.condition) + " condition could not be verified on " +
                            std::to_string(c.failures.size()) + (c.truncated ? "+" : "") + " cell(s)");
    }
}

CoveringReport run_checks(const HomotopySpec& h, const DomainSpec& d, const SubdivisionScheme& s,
                          const CheckOptions& opt, Mode mode)
{
    const auto start = Clock::now();
    CoveringReport r;
    r.mode = mode;
    r.map_name = h.name;
    try {
        d.validate();
        s.validate();
        if (!h.expansion) throw std::invalid_argument("homotopy '" + h.name + "' declares no expansion coefficient A");
        if (mode == Mode::Full && !h.eta) {
            throw std::invalid_argument("full covering needs an eta lift for homotopy '" + h.name + "'");
        }
        auto exit = check_exit(h, d, s, opt);
        auto entry = check_entry(h, d, s, opt);
        auto expansion = check_expansion(h, d, s.n_theta);
        r.exit_ok = exit.ok;
        r.entry_ok = entry.ok;
        r.expansion_ok = expansion.ok;
        r.exit_cells = exit.cells_checked;
        r.entry_cells = entry.cells_checked;
        r.expansion_cells = expansion.cells_checked;
        merge(r, std::move(exit));
        merge(r, std::move(entry));
        merge(r, std::move(expansion));
        bool ok = r.exit_ok && r.entry_ok && r.expansion_ok;
        if (mode == Mode::Full) {
            try {
                r.degree = compute_degree(*h.eta, s.n_theta, d.period);
                r.degree_ok = (std::labs(*r.degree) % 2) == 1;
                if (!*r.degree_ok) {
                    r.reasons.push_back("deg2 = 0 (degree of eta is " + std::to_string(*r.degree) + ")");
                }
            } catch (const DegreeError& e) {
                r.degree_ok = false;
                r.reasons.push_back(e.what());
            }
            ok = ok && *r.degree_ok;
        }
        r.verdict = ok ? Verdict::Verified : Verdict::NotVerified;
    } catch (const std::exception& e) {
        r.verdict = Verdict::Error;
        r.error = e.what();
    }
    r.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    return r;
}

} // namespace

CoveringReport verify_fiber_covering(const HomotopySpec& h, const DomainSpec& d, const SubdivisionScheme& s,
                                     const CheckOptions& opt)
{
    return run_checks(h, d, s, opt, Mode::Fiber);
}

CoveringReport verify_full_covering(const HomotopySpec& h, const DomainSpec& d, const SubdivisionScheme& s,
                                    const CheckOptions& opt)
{
    return run_checks(h, d, s, opt, Mode::Full);
}

CoveringReport verify_sequence(std::span<const HomotopySpec> hs, const DomainSpec& d, const SubdivisionScheme& s,
                               const CheckOptions& opt)
{
    if (hs.empty()) throw std::invalid_argument("sequence of maps must be nonempty");
    const auto start = Clock::now();
    CoveringReport r;
    r.mode = Mode::Sequence;
    r.verdict = Verdict::Verified;
    r.exit_ok = r.entry_ok = r.expansion_ok = true;
    r.degree_ok = true;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        CoveringReport m = verify_full_covering(hs[i], d, s, opt);
        r.map_name += (i ? "," : "") + m.map_name;
        r.exit_ok = r.exit_ok && m.exit_ok;
        r.entry_ok = r.entry_ok && m.entry_ok;
        r.expansion_ok = r.expansion_ok && m.expansion_ok;
        r.degree_ok = *r.degree_ok && m.degree_ok.value_or(false);
        r.exit_cells += m.exit_cells;
        r.entry_cells += m.entry_cells;
        r.expansion_cells += m.expansion_cells;
        for (const auto& f : m.failed_cells) r.failed_cells.push_back(f);
        if (m.verdict != Verdict::Verified && !r.first_failing_index) {
            r.first_failing_index = i;
            r.verdict = m.verdict;
            r.reasons.push_back("member " + std::to_string(i) + " (" + m.map_name + ") is " + to_string(m.verdict));
            if (m.verdict == Verdict::Error) r.error = m.error;
        }
        r.members.push_back(std::move(m));
    }
    r.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    return r;
}

bool refails(const HomotopySpec& h, const DomainSpec& d, const FailedCell& f)
{
    switch (f.condition) {
    case Condition::Exit: return !exit_holds(h, d, f.cell);
    case Condition::Entry: return !entry_holds(h, d, f.cell);
    case Condition::Expansion: return !expansion_holds(h, f.cell.theta);
    case Condition::Degree: return true;
    }
    return true;
}

namespace {

// Chained upper bounds of C lambda^k until one drops below 1.
NhimRates contraction_bound(const Interval& c, const Interval& lambda)
{
    if (!(c.lo() > 0.0)) throw std::invalid_argument("nhim_min_k requires C > 0");
    if (!(lambda.lo() > 0.0 && lambda.hi() < 1.0)) throw std::invalid_argument("nhim_min_k requires 0 < lambda < 1");
    constexpr unsigned kLimit = 10'000'000;
    Interval product = c;
    for (unsigned k = 1; k <= kLimit; ++k) {
        product = product * lambda;
        if (product.hi() < 1.0) return NhimRates{k, Interval(1.0) / product, product};
    }
    throw std::invalid_argument("nhim_min_k: no k below 10^7 certifies C lambda^k < 1");
}

} // namespace

unsigned nhim_min_k(const Interval& c, const Interval& lambda)
{
    return contraction_bound(c, lambda).k;
}

NhimRates nhim_rates(const Interval& c, const Interval& lambda)
{
    return contraction_bound(c, lambda);
}

} // namespace covrel
