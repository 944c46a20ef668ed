#include "covrel/dynamics.hpp"

#include <array>
#include <cmath>
#include <random>

namespace covrel {

EvaluationError::EvaluationError(const std::string& what, const Cell& cell)
    : std::runtime_error("evaluation failed on cell {" + to_string(cell) + "}: " + what), cell_(cell)
{
}

Image eval_map(const MapSpec& f, const Cell& c)
{
    try {
        return f.eval(c);
    } catch (const IntervalError& e) {
        throw EvaluationError(e.what(), c);
    }
}

Image eval_homotopy(const HomotopySpec& h, const Cell& c)
{
    try {
        return h.eval(c);
    } catch (const IntervalError& e) {
        throw EvaluationError(e.what(), c);
    }
}

namespace {

const Interval kOne{1.0};
const Interval kTwo{2.0};
const Interval kHalf{0.5};

Interval require(const Params& p, const char* key, std::string_view map)
{
    auto it = p.find(key);
    if (it == p.end()) {
        throw std::invalid_argument("map '" + std::string(map) + "' requires parameter '" + key + "'");
    }
    return it->second;
}

Interval optional_param(const Params& p, const char* key, Interval fallback)
{
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

long winding_param(const Params& p, long fallback, std::string_view map)
{
    auto it = p.find("k");
    if (it == p.end()) return fallback;
    const double v = it->second.lo();
    if (!it->second.is_degenerate() || v != std::floor(v) || std::fabs(v) > 1e6) {
        throw std::invalid_argument("map '" + std::string(map) + "' needs an integer winding k");
    }
    return static_cast<long>(v);
}

Interval toy_mu(const Params& p, std::string_view map)
{
    const Interval mu = require(p, "mu", map);
    if (!(abs(mu).hi() < 0.5)) {
        throw std::invalid_argument("map '" + std::string(map) + "' requires |mu| < 1/2 (got " + to_string(mu) +
                                    "); the y-contraction argument needs it");
    }
    return mu;
}

Interval toy_beta(const Params& p, std::string_view map)
{
    const Interval beta = optional_param(p, "beta", Interval(0.0, 1.0));
    if (!subset(beta, Interval(0.0, 1.0))) {
        throw std::invalid_argument("map '" + std::string(map) + "' requires beta within [0, 1]");
    }
    return beta;
}

EtaLift linear_lift(long k)
{
    const Interval factor(static_cast<double>(k));
    return EtaLift{[factor](const Interval& t) { return factor * t; }, k, std::to_string(k) + "*theta"};
}

// f_beta = (1 - beta) f0 + beta f1 with
//   f0 = (k theta mod 2pi; 4x, mu y)
//   f1 = (k theta mod 2pi; -3x + 5x^3, sin(theta)/2 + mu y)
// The theta components agree, so their combination is k theta mod 2pi.
Image toy_image(const Cell& c, const Interval& mu, const Interval& k)
{
    const Interval& b = c.beta;
    const Interval theta = wrap(k * c.theta);
    const Interval x0 = Interval(4.0) * c.x;
    const Interval x1 = Interval(-3.0) * c.x + Interval(5.0) * power(c.x, 3);
    const Interval y0 = mu * c.y;
    const Interval y1 = kHalf * sin(c.theta) + mu * c.y;
    const Interval rest = kOne - b;
    return {theta, rest * x0 + b * x1, rest * y0 + b * y1};
}

MapSpec toy_map(std::string_view name, const Params& params, const Interval& beta_range)
{
    const Interval mu = toy_mu(params, name);
    const Interval k(static_cast<double>(winding_param(params, 3, name)));
    MapSpec f;
    f.name = std::string(name);
    f.beta_range = beta_range;
    f.params = params;
    f.eval = [mu, k](const Cell& c) { return toy_image(c, mu, k); };
    return f;
}

// f(theta; x, y) = (3 theta + x y sin(theta) mod 2pi;
//                   4x^3 - 8x/5 + xy/2,
//                   mu y + 2 sin(theta)/5 + x cos(theta))
MapSpec cap_map(const Params& params)
{
    const Interval mu = require(params, "mu", "cap_map");
    MapSpec f;
    f.name = "cap_map";
    f.params = params;
    f.eval = [mu](const Cell& c) {
        const Interval s = sin(c.theta);
        const Interval theta = wrap(Interval(3.0) * c.theta + c.x * c.y * s);
        const Interval x = Interval(-8.0) * c.x / Interval(5.0) + Interval(4.0) * power(c.x, 3) + c.x * c.y / kTwo;
        const Interval y = mu * c.y + kTwo * s / Interval(5.0) + c.x * cos(c.theta);
        return Image{theta, x, y};
    };
    return f;
}

MapSpec linear_nhim_map(const Params& params)
{
    const Interval a = require(params, "a", "linear_nhim");
    const Interval b = require(params, "b", "linear_nhim");
    const Interval k(static_cast<double>(winding_param(params, 1, "linear_nhim")));
    MapSpec f;
    f.name = "linear_nhim";
    f.params = params;
    f.eval = [a, b, k](const Cell& c) { return Image{wrap(k * c.theta), a * c.x, b * c.y}; };
    return f;
}

// h(alpha) = (1 - alpha) f_beta + alpha (k theta mod 2pi; 2x, 0)
HomotopySpec toy_homotopy(std::string_view name, const Params& params, const Interval& beta_range)
{
    const Interval mu = toy_mu(params, name);
    const long winding = winding_param(params, 3, name);
    const Interval k(static_cast<double>(winding));
    HomotopySpec h;
    h.name = std::string(name);
    h.base_map = toy_map(name, params, beta_range);
    h.beta_range = beta_range;
    h.eta = linear_lift(winding);
    h.expansion = [](const Interval&) { return kTwo; };
    h.eval = [mu, k](const Cell& c) {
        const Image f = toy_image(c, mu, k);
        const Interval rest = kOne - c.alpha;
        return Image{f.theta, rest * f.x + c.alpha * kTwo * c.x, rest * f.y};
    };
    return h;
}

// h(alpha) = (3 theta + (1 - alpha) x y sin(theta) mod 2pi;
//             alpha 2x + (1 - alpha)(4x^3 - 8x/5 + xy/2),
//             (1 - alpha)(mu y + 2 sin(theta)/5 + x cos(theta)))
HomotopySpec cap_homotopy(const Params& params)
{
    const Interval mu = require(params, "mu", "cap_homotopy");
    HomotopySpec h;
    h.name = "cap_homotopy";
    h.base_map = cap_map(params);
    h.eta = linear_lift(3);
    h.expansion = [](const Interval&) { return kTwo; };
    h.eval = [mu](const Cell& c) {
        const Interval rest = kOne - c.alpha;
        const Interval s = sin(c.theta);
        const Interval theta = wrap(Interval(3.0) * c.theta + rest * c.x * c.y * s);
        const Interval x = c.alpha * kTwo * c.x +
                           rest * (Interval(-8.0) * c.x / Interval(5.0) + Interval(4.0) * power(c.x, 3) +
                                   c.x * c.y / kTwo);
        const Interval y = rest * (mu * c.y + kTwo * s / Interval(5.0) + c.x * cos(c.theta));
        return Image{theta, x, y};
    };
    return h;
}

// h(alpha) = (k theta mod 2pi; a x, (1 - alpha) b y)
HomotopySpec linear_nhim_homotopy(const Params& params)
{
    const Interval a = require(params, "a", "linear_nhim");
    const Interval b = require(params, "b", "linear_nhim");
    const long winding = winding_param(params, 1, "linear_nhim");
    const Interval k(static_cast<double>(winding));
    HomotopySpec h;
    h.name = "linear_nhim";
    h.base_map = linear_nhim_map(params);
    h.eta = linear_lift(winding);
    h.expansion = [a](const Interval&) { return a; };
    h.eval = [a, b, k](const Cell& c) { return Image{wrap(k * c.theta), a * c.x, (kOne - c.alpha) * b * c.y}; };
    return h;
}

std::string canonical(std::string_view name)
{
    if (name == "cap") return "cap_map";
    if (name == "toy") return "toy_fbeta";
    return std::string(name);
}

[[noreturn]] void unknown(std::string_view name)
{
    std::string known;
    for (const auto& n : builtin_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown map '" + std::string(name) + "' (known: " + known + ")");
}

} // namespace

std::vector<std::string> builtin_names()
{
    return {"toy_f0", "toy_f1", "toy_fbeta", "toy_homotopy", "cap_map", "cap_homotopy", "linear_nhim"};
}

MapSpec builtin_map(std::string_view name, const Params& params)
{
    const std::string n = canonical(name);
    if (n == "toy_f0") return toy_map(n, params, Interval(0.0));
    if (n == "toy_f1") return toy_map(n, params, Interval(1.0));
    if (n == "toy_fbeta" || n == "toy_homotopy") return toy_map("toy_fbeta", params, toy_beta(params, n));
    if (n == "cap_map" || n == "cap_homotopy") return cap_map(params);
    if (n == "linear_nhim") return linear_nhim_map(params);
    unknown(name);
}

HomotopySpec builtin_homotopy(std::string_view name, const Params& params)
{
    const std::string n = canonical(name);
    if (n == "toy_f0") return toy_homotopy(n, params, Interval(0.0));
    if (n == "toy_f1") return toy_homotopy(n, params, Interval(1.0));
    if (n == "toy_fbeta" || n == "toy_homotopy") return toy_homotopy("toy_homotopy", params, toy_beta(params, n));
    if (n == "cap_map" || n == "cap_homotopy") return cap_homotopy(params);
    if (n == "linear_nhim") return linear_nhim_homotopy(params);
    unknown(name);
}

std::variant<MapSpec, HomotopySpec> builtin(std::string_view name, const Params& params)
{
    const std::string n = canonical(name);
    if (n == "toy_homotopy" || n == "cap_homotopy") return builtin_homotopy(n, params);
    return builtin_map(n, params);
}

namespace {

const std::array<std::string, 4> kMapSlots{"theta", "x", "y", "beta"};
const std::array<std::string, 5> kHomotopySlots{"alpha", "theta", "x", "y", "beta"};
const std::array<std::string, 1> kThetaSlot{"theta"};

Expression compile_or_throw(const std::string& text, std::span<const std::string> slots, const Params& constants,
                            const char* field)
{
    try {
        return Expression::parse(text).compile(slots, constants);
    } catch (const ParseError& e) {
        throw ParseError(std::string("in ") + field + ": " + e.what(), e.position());
    }
}

} // namespace

MapSpec expression_map(const ExpressionMapDefinition& def)
{
    if (def.theta_out.empty() || def.x_out.empty() || def.y_out.empty()) {
        throw std::invalid_argument("map definition needs theta_out, x_out and y_out");
    }
    const auto t = compile_or_throw(def.theta_out, kMapSlots, def.constants, "theta_out");
    const auto x = compile_or_throw(def.x_out, kMapSlots, def.constants, "x_out");
    const auto y = compile_or_throw(def.y_out, kMapSlots, def.constants, "y_out");
    MapSpec f;
    f.name = def.name;
    f.beta_range = def.beta_range;
    f.params = def.constants;
    f.eval = [t, x, y](const Cell& c) {
        const std::array<Interval, 4> v{c.theta, c.x, c.y, c.beta};
        return Image{wrap(t.eval(v)), x.eval(v), y.eval(v)};
    };
    return f;
}

EtaLift expression_lift(const std::string& text, const Params& constants)
{
    const auto e = compile_or_throw(text, kThetaSlot, constants, "eta_lift");
    return EtaLift{[e](const Interval& theta) { return e.eval(std::span<const Interval>(&theta, 1)); },
                   std::nullopt, text};
}

HomotopySpec expression_homotopy(const ExpressionMapDefinition& def)
{
    const bool has_h = !def.h_theta.empty() && !def.h_x.empty() && !def.h_y.empty();
    const bool has_map = !def.theta_out.empty() && !def.x_out.empty() && !def.y_out.empty();
    if (!has_map && !has_h) {
        throw std::invalid_argument("homotopy definition needs theta_out/x_out/y_out or h_theta/h_x/h_y");
    }
    HomotopySpec h;
    h.name = def.name;
    h.beta_range = def.beta_range;
    if (has_map) h.base_map = expression_map(def);
    if (!def.eta_lift.empty()) h.eta = expression_lift(def.eta_lift, def.constants);
    if (!def.a_coeff.empty()) {
        const auto a = compile_or_throw(def.a_coeff, kThetaSlot, def.constants, "A_coeff");
        h.expansion = [a](const Interval& theta) { return a.eval(std::span<const Interval>(&theta, 1)); };
    }

    if (has_h) {
        const auto t = compile_or_throw(def.h_theta, kHomotopySlots, def.constants, "h_theta");
        const auto x = compile_or_throw(def.h_x, kHomotopySlots, def.constants, "h_x");
        const auto y = compile_or_throw(def.h_y, kHomotopySlots, def.constants, "h_y");
        h.eval = [t, x, y](const Cell& c) {
            const std::array<Interval, 5> v{c.alpha, c.theta, c.x, c.y, c.beta};
            return Image{wrap(t.eval(v)), x.eval(v), y.eval(v)};
        };
        if (!has_map) {
            // h(0, .) is the base map.
            h.base_map.name = def.name;
            h.base_map.beta_range = def.beta_range;
            h.base_map.params = def.constants;
            h.base_map.eval = [eval = h.eval](const Cell& c) {
                Cell at_zero = c;
                at_zero.alpha = Interval(0.0);
                return eval(at_zero);
            };
        }
        return h;
    }

    if (!h.eta || !h.expansion) {
        throw std::invalid_argument("straight-line homotopy needs eta_lift and A_coeff");
    }
    // theta_out is blended before reduction mod 2pi; blending the reduced
    // angle would tear the homotopy at the seam.
    const auto t = compile_or_throw(def.theta_out, kMapSlots, def.constants, "theta_out");
    const auto x = compile_or_throw(def.x_out, kMapSlots, def.constants, "x_out");
    const auto y = compile_or_throw(def.y_out, kMapSlots, def.constants, "y_out");
    h.eval = [t, x, y, eta = h.eta->lift, a = h.expansion](const Cell& c) {
        const std::array<Interval, 4> v{c.theta, c.x, c.y, c.beta};
        const Interval rest = kOne - c.alpha;
        const Interval theta = wrap(rest * t.eval(v) + c.alpha * eta(c.theta));
        return Image{theta, rest * x.eval(v) + c.alpha * a(c.theta) * c.x, rest * y.eval(v)};
    };
    return h;
}

void override_eta(HomotopySpec& h, EtaLift eta) { h.eta = std::move(eta); }

void override_expansion(HomotopySpec& h, const Interval& a)
{
    h.expansion = [a](const Interval&) { return a; };
}

Image eval_map_at(const MapSpec& f, double theta, double x, double y, double beta)
{
    return eval_map(f, Cell{Interval(theta), Interval(x), Interval(y), Interval(0.0), Interval(beta)});
}

std::optional<std::string> endpoint_inconsistency(const HomotopySpec& h, const DomainSpec& d, std::size_t samples,
                                                  unsigned seed)
{
    if (!h.eta || !h.expansion) return "homotopy has no declared endpoint";
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> theta_dist(0.0, d.period.lo());
    std::uniform_real_distribution<double> x_dist(-d.r_u.lo(), d.r_u.lo());
    std::uniform_real_distribution<double> y_dist(-d.r_s.lo(), d.r_s.lo());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < samples; ++i) {
        const double beta = h.beta_range.lo() + unit(rng) * (h.beta_range.hi() - h.beta_range.lo());
        const Cell c{Interval(theta_dist(rng)), Interval(x_dist(rng)), Interval(y_dist(rng)), Interval(1.0),
                     Interval(std::clamp(beta, h.beta_range.lo(), h.beta_range.hi()))};
        const Image img = eval_homotopy(h, c);
        const Interval theta_end = wrap(h.eta->lift(c.theta), d.period);
        const Interval x_end = h.expansion(c.theta) * c.x;
        const bool theta_ok = intersects(img.theta, theta_end) || img.theta.width() >= d.period.lo();
        if (!theta_ok || !intersects(img.x, x_end) || !contains(img.y, 0.0)) {
            return "endpoint mismatch at alpha = 1 on cell {" + to_string(c) + "}";
        }
    }
    return std::nullopt;
}

} // namespace covrel
