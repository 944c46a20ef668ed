#include "covrel/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace covrel {

namespace pt = boost::property_tree;

namespace {

// Child lookup without path splitting, so keys may contain dots.
const pt::ptree* section(const pt::ptree& root, const std::string& name)
{
    auto it = root.find(name);
    return it == root.not_found() ? nullptr : &it->second;
}

std::string text(const pt::ptree* s, const std::string& key, const std::string& fallback)
{
    if (!s) return fallback;
    auto it = s->find(key);
    return it == s->not_found() ? fallback : it->second.data();
}

bool flag(const pt::ptree* s, const std::string& key, bool fallback)
{
    const std::string v = text(s, key, fallback ? "true" : "false");
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: '" + key + "' expects true or false, got '" + v + "'");
}

std::size_t count(const pt::ptree* s, const std::string& key, std::size_t fallback)
{
    const std::string v = text(s, key, std::to_string(fallback));
    std::size_t pos = 0;
    unsigned long long n = 0;
    try {
        n = std::stoull(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != v.size() || v.front() == '-')
        throw std::invalid_argument("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
    return static_cast<std::size_t>(n);
}

void put(pt::ptree& s, const std::string& key, const std::string& value)
{
    s.push_back({key, pt::ptree(value)});
}

} // namespace

RunConfig parse_config(std::istream& in)
{
    pt::ptree root;
    try {
        pt::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }

    RunConfig c;
    const pt::ptree* run = section(root, "run");
    c.subcommand = text(run, "subcommand", c.subcommand);
    c.map = text(run, "map", c.map);
    c.mode = text(run, "mode", c.mode);
    c.scheme = text(run, "scheme", c.scheme);
    c.refine_depth = count(run, "refine_depth", c.refine_depth);
    c.max_failures = count(run, "max_failures", c.max_failures);
    c.sequence = text(run, "sequence", c.sequence);
    c.eta = text(run, "eta", c.eta);
    c.a_coeff = text(run, "A", c.a_coeff);
    c.report_path = text(run, "report", c.report_path);
    c.cells_path = text(run, "cells", c.cells_path);
    c.jobs = static_cast<unsigned>(count(run, "jobs", c.jobs));
    c.check_endpoint = flag(run, "check_endpoint", c.check_endpoint);

    const pt::ptree* domain = section(root, "domain");
    c.ru = text(domain, "ru", c.ru);
    c.rs = text(domain, "rs", c.rs);
    c.mobius_stable = flag(domain, "mobius_stable", c.mobius_stable);

    if (const pt::ptree* params = section(root, "params")) {
        for (const auto& [key, value] : *params) c.params[key] = value.data();
    }

    const pt::ptree* map = section(root, "map");
    c.custom_name = text(map, "name", c.custom_name);
    c.theta_out = text(map, "theta_out", c.theta_out);
    c.x_out = text(map, "x_out", c.x_out);
    c.y_out = text(map, "y_out", c.y_out);
    c.h_theta = text(map, "h_theta", c.h_theta);
    c.h_x = text(map, "h_x", c.h_x);
    c.h_y = text(map, "h_y", c.h_y);
    c.eta_lift = text(map, "eta_lift", c.eta_lift);
    c.a_custom = text(map, "A_coeff", c.a_custom);

    const pt::ptree* enclose = section(root, "enclose");
    c.enclose_radius = text(enclose, "radius", c.enclose_radius);
    c.enclose_disc = flag(enclose, "disc", c.enclose_disc);
    c.enclose_grid = text(enclose, "grid", c.enclose_grid);
    c.enclose_iterates = count(enclose, "iterates", c.enclose_iterates);
    c.enclose_steps = count(enclose, "steps", c.enclose_steps);
    c.enclose_slice = text(enclose, "slice", c.enclose_slice);

    c.degree_parts = count(section(root, "degree"), "parts", c.degree_parts);

    const pt::ptree* nhim = section(root, "nhim");
    c.nhim_c = text(nhim, "C", c.nhim_c);
    c.nhim_lambda = text(nhim, "lambda", c.nhim_lambda);
    return c;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config '" + path.string() + "'");
    return parse_config(in);
}

void write_config(std::ostream& out, const RunConfig& c)
{
    pt::ptree root;
    pt::ptree run;
    put(run, "subcommand", c.subcommand);
    put(run, "map", c.map);
    put(run, "mode", c.mode);
    put(run, "scheme", c.scheme);
    put(run, "refine_depth", std::to_string(c.refine_depth));
    put(run, "max_failures", std::to_string(c.max_failures));
    put(run, "sequence", c.sequence);
    put(run, "eta", c.eta);
    put(run, "A", c.a_coeff);
    put(run, "report", c.report_path);
    put(run, "cells", c.cells_path);
    put(run, "jobs", std::to_string(c.jobs));
    put(run, "check_endpoint", c.check_endpoint ? "true" : "false");
    root.push_back({"run", run});

    pt::ptree domain;
    put(domain, "ru", c.ru);
    put(domain, "rs", c.rs);
    put(domain, "mobius_stable", c.mobius_stable ? "true" : "false");
    root.push_back({"domain", domain});

    pt::ptree params;
    for (const auto& [k, v] : c.params) put(params, k, v);
    root.push_back({"params", params});

    pt::ptree map;
    put(map, "name", c.custom_name);
    put(map, "theta_out", c.theta_out);
    put(map, "x_out", c.x_out);
    put(map, "y_out", c.y_out);
    put(map, "h_theta", c.h_theta);
    put(map, "h_x", c.h_x);
    put(map, "h_y", c.h_y);
    put(map, "eta_lift", c.eta_lift);
    put(map, "A_coeff", c.a_custom);
    root.push_back({"map", map});

    pt::ptree enclose;
    put(enclose, "radius", c.enclose_radius);
    put(enclose, "disc", c.enclose_disc ? "true" : "false");
    put(enclose, "grid", c.enclose_grid);
    put(enclose, "iterates", std::to_string(c.enclose_iterates));
    put(enclose, "steps", std::to_string(c.enclose_steps));
    put(enclose, "slice", c.enclose_slice);
    root.push_back({"enclose", enclose});

    pt::ptree degree;
    put(degree, "parts", std::to_string(c.degree_parts));
    root.push_back({"degree", degree});

    pt::ptree nhim;
    put(nhim, "C", c.nhim_c);
    put(nhim, "lambda", c.nhim_lambda);
    root.push_back({"nhim", nhim});

    pt::write_ini(out, root);
}

Params resolve_params(const RunConfig& cfg)
{
    Params p;
    for (const auto& [name, value] : cfg.params) {
        try {
            p[name] = parse_interval_value(value);
        } catch (const std::exception& e) {
            throw std::invalid_argument("parameter '" + name + "': " + e.what());
        }
    }
    return p;
}

DomainSpec resolve_domain(const RunConfig& cfg)
{
    DomainSpec d;
    d.r_u = evaluate_constant(cfg.ru);
    d.r_s = evaluate_constant(cfg.rs);
    d.mobius_stable = cfg.mobius_stable;
    d.validate();
    return d;
}

ExpressionMapDefinition resolve_custom(const RunConfig& cfg)
{
    ExpressionMapDefinition def;
    def.name = cfg.custom_name;
    def.theta_out = cfg.theta_out;
    def.x_out = cfg.x_out;
    def.y_out = cfg.y_out;
    def.h_theta = cfg.h_theta;
    def.h_x = cfg.h_x;
    def.h_y = cfg.h_y;
    def.eta_lift = cfg.eta_lift;
    def.a_coeff = cfg.a_custom;
    def.constants = resolve_params(cfg);
    if (auto it = def.constants.find("beta"); it != def.constants.end()) {
        def.beta_range = it->second;
        def.constants.erase(it);
    }
    return def;
}

HomotopySpec resolve_homotopy(const RunConfig& cfg, const std::string& name)
{
    const Params params = resolve_params(cfg);
    HomotopySpec h = name == "custom" ? expression_homotopy(resolve_custom(cfg)) : builtin_homotopy(name, params);
    if (!cfg.eta.empty()) override_eta(h, expression_lift(cfg.eta, params));
    if (!cfg.a_coeff.empty()) override_expansion(h, evaluate_constant(cfg.a_coeff, params));
    return h;
}

MapSpec resolve_map(const RunConfig& cfg, const std::string& name)
{
    if (name == "custom") return expression_map(resolve_custom(cfg));
    return builtin_map(name, resolve_params(cfg));
}

unsigned resolve_jobs(const RunConfig& cfg)
{
    if (cfg.jobs > 0) return cfg.jobs;
    if (const char* env = std::getenv("COVREL_JOBS")) {
        char* end = nullptr;
        const unsigned long n = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
    }
    return 1;
}

} // namespace covrel
