#include "covrel/geometry.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace covrel {

void DomainSpec::validate() const
{
    if (!(r_u.lo() > 0.0)) throw std::invalid_argument("unstable radius r_u must be positive");
    if (!(r_s.lo() > 0.0)) throw std::invalid_argument("stable radius r_s must be positive");
    if (!(period.lo() > 0.0)) throw std::invalid_argument("base period must be positive");
}

Interval DomainSpec::unstable_box() const { return Interval(-r_u.hi(), r_u.hi()); }
Interval DomainSpec::stable_box() const { return Interval(-r_s.hi(), r_s.hi()); }
Interval DomainSpec::stable_inner() const { return Interval(-r_s.lo(), r_s.lo()); }
Interval DomainSpec::base() const { return Interval(0.0, period.hi()); }

std::optional<std::pair<Cell, Cell>> split_widest(const Cell& c)
{
    Interval Cell::*const fields[] = {&Cell::theta, &Cell::x, &Cell::y, &Cell::alpha, &Cell::beta};
    Interval Cell::*widest = nullptr;
    double best = 0.0;
    for (auto field : fields) {
        const Interval& v = c.*field;
        if (v.is_degenerate()) continue;
        const double m = v.midpoint();
        // Pieces too narrow to split further.
        if (m == v.lo() || m == v.hi()) continue;
        if (v.width() > best) {
            best = v.width();
            widest = field;
        }
    }
    if (widest == nullptr) return std::nullopt;
    auto [left, right] = bisect(c.*widest);
    Cell a = c;
    Cell b = c;
    a.*widest = left;
    b.*widest = right;
    return std::make_pair(a, b);
}

std::array<Cell, 8> split_all(const Cell& c)
{
    const auto [t0, t1] = bisect(c.theta);
    const auto [x0, x1] = bisect(c.x);
    const auto [y0, y1] = bisect(c.y);
    const Interval ts[] = {t0, t1};
    const Interval xs[] = {x0, x1};
    const Interval ys[] = {y0, y1};
    std::array<Cell, 8> out;
    std::size_t k = 0;
    for (const auto& t : ts)
        for (const auto& x : xs)
            for (const auto& y : ys) out[k++] = Cell{t, x, y, c.alpha, c.beta};
    return out;
}

std::string to_string(const Cell& c)
{
    return "alpha=" + to_string(c.alpha) + " beta=" + to_string(c.beta) + " theta=" + to_string(c.theta) +
           " x=" + to_string(c.x) + " y=" + to_string(c.y);
}

void SubdivisionScheme::validate() const
{
    if (n_alpha == 0 || n_theta == 0 || n_x == 0 || n_y == 0 || n_beta == 0) {
        throw std::invalid_argument("subdivision counts must be at least 1");
    }
}

SubdivisionScheme SubdivisionScheme::parse(std::string_view text)
{
    std::vector<std::size_t> counts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        std::string_view field = text.substr(pos, comma - pos);
        while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
        while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
            throw std::invalid_argument("invalid scheme '" + std::string(text) +
                                        "', expected counts like 4,100,50,50");
        }
        counts.push_back(value);
        pos = comma + 1;
    }
    if (counts.size() != 4 && counts.size() != 5) {
        throw std::invalid_argument("invalid scheme '" + std::string(text) + "', expected 4 or 5 counts");
    }
    SubdivisionScheme s{counts[0], counts[1], counts[2], counts[3], counts.size() == 5 ? counts[4] : 1};
    s.validate();
    return s;
}

std::string SubdivisionScheme::to_string() const
{
    std::string out = std::to_string(n_alpha) + "," + std::to_string(n_theta) + "," + std::to_string(n_x) +
                      "," + std::to_string(n_y);
    if (n_beta != 1) out += "," + std::to_string(n_beta);
    return out;
}

Axis partition(const Interval& x, std::size_t n)
{
    Axis out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.push_back(part(x, n, k));
    return out;
}

CellGrid::CellGrid(Axis alpha, Axis beta, Axis theta, Axis x, Axis y)
    : axes_{std::move(alpha), std::move(beta), std::move(theta), std::move(x), std::move(y)}, size_(1)
{
    for (const auto& axis : axes_) {
        if (axis.empty()) throw std::invalid_argument("cell grid axis must be nonempty");
        size_ *= axis.size();
    }
}

Cell CellGrid::operator[](std::size_t index) const
{
    if (index >= size_) throw std::out_of_range("cell grid index out of range");
    std::array<std::size_t, 5> idx{};
    for (std::size_t k = 5; k-- > 0;) {
        idx[k] = index % axes_[k].size();
        index /= axes_[k].size();
    }
    return Cell{axes_[2][idx[2]], axes_[3][idx[3]], axes_[4][idx[4]], axes_[0][idx[0]], axes_[1][idx[1]]};
}

std::vector<Cell> CellGrid::materialize() const
{
    std::vector<Cell> out;
    out.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i) out.push_back((*this)[i]);
    return out;
}

CellGrid interior_grid(const DomainSpec& d, const SubdivisionScheme& s, const Interval& alpha_range,
                       const Interval& beta_range)
{
    d.validate();
    s.validate();
    return CellGrid(partition(alpha_range, s.n_alpha), partition(beta_range, s.n_beta),
                    partition(d.base(), s.n_theta), partition(d.unstable_box(), s.n_x),
                    partition(d.stable_box(), s.n_y));
}

CellGrid exit_face_grid(const DomainSpec& d, const SubdivisionScheme& s, const Interval& alpha_range,
                        const Interval& beta_range)
{
    d.validate();
    s.validate();
    Axis faces{-d.r_u, d.r_u};
    return CellGrid(partition(alpha_range, s.n_alpha), partition(beta_range, s.n_beta),
                    partition(d.base(), s.n_theta), std::move(faces), partition(d.stable_box(), s.n_y));
}

std::vector<Cell> subdivide(const DomainSpec& d, const SubdivisionScheme& s)
{
    return interior_grid(d, s).materialize();
}

std::vector<Cell> exit_faces(const DomainSpec& d, const SubdivisionScheme& s)
{
    return exit_face_grid(d, s).materialize();
}

Interval wrap(const Interval& theta, const Interval& period)
{
    // With n = floor(theta / period) certain, every reduced point lies in
    // [0, period) and the shifted enclosure may be clipped to that range.
    const Interval q = theta / period;
    const double n = std::floor(q.lo());
    if (n != std::floor(q.hi())) return Interval(0.0, period.hi());
    const Interval shifted = n == 0.0 ? theta : theta - Interval(n) * period;
    return Interval(std::max(shifted.lo(), 0.0), std::min(shifted.hi(), period.hi()));
}

} // namespace covrel
