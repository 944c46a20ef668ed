#include "covrel/cli.hpp"

#include "covrel/config.hpp"
#include "covrel/covering.hpp"
#include "covrel/enclosure.hpp"
#include "covrel/export.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <functional>
#include <ostream>
#include <sstream>

namespace covrel::cli {

namespace {

constexpr int kVerified = 0;
constexpr int kNotVerified = 1;
constexpr int kError = 2;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<std::size_t> parse_counts(const std::string& text, std::size_t expected, const char* what)
{
    std::vector<std::size_t> out;
    for (const std::string& item : split_list(text)) {
        std::size_t pos = 0;
        unsigned long long n = 0;
        try {
            n = std::stoull(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != item.size() || item.front() == '-' || n == 0)
            throw std::invalid_argument(std::string(what) + ": '" + item + "' is not a positive count");
        out.push_back(static_cast<std::size_t>(n));
    }
    if (out.size() != expected)
        throw std::invalid_argument(std::string(what) + " expects " + std::to_string(expected) + " comma-separated counts");
    return out;
}

void print_failures(std::ostream& out, const CoveringReport& r, std::size_t limit = 5)
{
    std::size_t shown = 0;
    for (const FailedCell& f : r.failed_cells) {
        if (shown++ == limit) {
            out << "  ... " << (r.failed_cells.size() - limit) << " more\n";
            break;
        }
        out << "  " << to_string(f.condition) << " fails on " << to_string(f.cell) << "\n";
    }
}

void print_report(std::ostream& out, const CoveringReport& r, const std::string& indent = "")
{
    auto status = [](bool ok) { return ok ? "ok" : "FAILED"; };
    out << indent << "map: " << r.map_name << "  mode: " << to_string(r.mode) << "\n";
    out << indent << "exit:      " << status(r.exit_ok) << " (" << r.exit_cells << " cells)\n";
    out << indent << "entry:     " << status(r.entry_ok) << " (" << r.entry_cells << " cells)\n";
    out << indent << "expansion: " << status(r.expansion_ok) << " (" << r.expansion_cells << " pieces)\n";
    if (r.degree)
        out << indent << "degree:    " << *r.degree << " (deg2 = " << std::labs(*r.degree) % 2 << ")\n";
    for (const std::string& reason : r.reasons) out << indent << "reason: " << reason << "\n";
    print_failures(out, r);
}

std::string seam_status(const std::string& base, const Cell& c, const DomainSpec& d)
{
    if (!d.mobius_stable) return base;
    const bool at_seam = c.theta.lo() <= 0.0 || c.theta.hi() >= d.period.lo();
    return at_seam ? base + ":seam-flip" : base;
}

void collect_failed(std::vector<CellRow>& rows, const CoveringReport& r, const DomainSpec& d, std::size_t step)
{
    for (const FailedCell& f : r.failed_cells)
        rows.push_back({step, f.cell, seam_status("fail:" + to_string(f.condition), f.cell, d)});
    for (std::size_t i = 0; i < r.members.size(); ++i) collect_failed(rows, r.members[i], d, i);
}

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const DomainSpec d = resolve_domain(cfg);
    const SubdivisionScheme s = SubdivisionScheme::parse(cfg.scheme);
    const Mode mode = parse_mode(cfg.mode);
    CheckOptions opt;
    opt.refine_depth = cfg.refine_depth;
    opt.max_failures = cfg.max_failures;
    opt.jobs = resolve_jobs(cfg);

    std::vector<HomotopySpec> hs;
    if (mode == Mode::Sequence) {
        const auto names = split_list(cfg.sequence);
        if (names.empty()) throw UsageError("sequence mode needs --sequence name[,name...]");
        for (const auto& name : names) hs.push_back(resolve_homotopy(cfg, name));
    } else {
        hs.push_back(resolve_homotopy(cfg, cfg.map));
    }
    if (cfg.check_endpoint) {
        for (const auto& h : hs) {
            if (auto bad = endpoint_inconsistency(h, d, 1000)) {
                err << "error: " << h.name << ": declared endpoint inconsistent: " << *bad << "\n";
                return kError;
            }
        }
    }

    CoveringReport r;
    switch (mode) {
    case Mode::Fiber: r = verify_fiber_covering(hs.front(), d, s, opt); break;
    case Mode::Full: r = verify_full_covering(hs.front(), d, s, opt); break;
    case Mode::Sequence: r = verify_sequence(hs, d, s, opt); break;
    }

    if (!cfg.report_path.empty()) export_report(r, cfg.report_path);
    if (!cfg.cells_path.empty()) {
        std::vector<CellRow> rows;
        collect_failed(rows, r, d, 0);
        export_cells(rows, cfg.cells_path);
    }

    if (r.verdict == Verdict::Error) {
        err << "error: " << r.error << "\n";
        return kError;
    }
    if (mode == Mode::Sequence) {
        for (std::size_t i = 0; i < r.members.size(); ++i) {
            out << "[" << i << "]\n";
            print_report(out, r.members[i], "  ");
        }
        if (r.first_failing_index) out << "first failing member: " << *r.first_failing_index << "\n";
    } else {
        print_report(out, r);
    }
    out << "time: " << r.wall_time_s << " s\n";
    if (r.verdict == Verdict::Verified) {
        out << "VERIFIED\n";
        return kVerified;
    }
    out << "NOT VERIFIED\n";
    return kNotVerified;
}

int run_enclose(const RunConfig& cfg, std::ostream& out)
{
    const auto grid = parse_counts(cfg.enclose_grid, 3, "grid");
    EnclosureRun run;
    run.domain = EnclosureDomain::box(evaluate_constant(cfg.enclose_radius), cfg.enclose_disc);
    run.map = resolve_map(cfg, cfg.map);
    run.n_theta = grid[0];
    run.n_x = grid[1];
    run.n_y = grid[2];
    run.max_iterates = cfg.enclose_iterates;
    run.refine_steps = cfg.enclose_steps;
    run.jobs = resolve_jobs(cfg);
    run = propagate(std::move(run));

    std::optional<double> theta;
    if (!cfg.enclose_slice.empty()) theta = evaluate_constant(cfg.enclose_slice).midpoint();

    DomainSpec seam;
    seam.mobius_stable = cfg.mobius_stable;
    std::vector<CellRow> rows;
    out << "map: " << run.map.name << "  initial cells: " << run.initial.size() << "\n";
    for (std::size_t step = 0; step < run.survivors.size(); ++step) {
        const auto cells = theta ? slice(run, *theta, step) : run.survivors[step];
        out << "step " << step << ": " << run.survivors[step].size() << " survivors, " << run.discarded[step]
            << " discarded";
        if (theta) out << ", " << cells.size() << " in slice";
        out << "\n";
        for (const Cell& c : cells) rows.push_back({step, c, seam_status("survivor", c, seam)});
    }
    if (!cfg.cells_path.empty()) export_cells(rows, cfg.cells_path);
    out << "ENCLOSURE COMPLETE\n";
    return kVerified;
}

int run_degree(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    EtaLift eta;
    if (!cfg.eta.empty()) {
        eta = expression_lift(cfg.eta, resolve_params(cfg));
    } else {
        const HomotopySpec h = resolve_homotopy(cfg, cfg.map);
        if (!h.eta) throw UsageError("'" + h.name + "' declares no eta lift; pass --eta");
        eta = *h.eta;
    }
    try {
        const long k = compute_degree(eta, cfg.degree_parts);
        out << k << "\n" << "deg2 = " << std::labs(k) % 2 << "\n";
        return kVerified;
    } catch (const DegreeError& e) {
        err << "degree not certified: " << e.what() << "\n";
        out << "NOT VERIFIED\n";
        return kNotVerified;
    }
}

int run_nhim(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.nhim_c.empty() || cfg.nhim_lambda.empty()) throw UsageError("nhim-k needs --C and --lambda");
    const NhimRates r = nhim_rates(evaluate_constant(cfg.nhim_c), evaluate_constant(cfg.nhim_lambda));
    out << r.k << "\n";
    out << "expansion " << r.expansion << "\n";
    out << "contraction " << r.contraction << "\n";
    return kVerified;
}

/// Options are parsed into locals; those given on the command line then
/// overwrite the config loaded from --config.
class Overrides {
public:
    template <class T>
    CLI::Option* add(CLI::App& app, const std::string& name, const std::string& help, std::function<void(RunConfig&, const T&)> apply)
    {
        auto value = std::make_shared<T>();
        CLI::Option* o = app.add_option(name, *value, help);
        entries_.push_back({o, [value, apply](RunConfig& c) { apply(c, *value); }});
        return o;
    }

    CLI::Option* add_flag(CLI::App& app, const std::string& name, const std::string& help, std::function<void(RunConfig&, bool)> apply)
    {
        auto value = std::make_shared<bool>(false);
        CLI::Option* o = app.add_flag(name, *value, help);
        entries_.push_back({o, [value, apply](RunConfig& c) { apply(c, *value); }});
        return o;
    }

    void apply(RunConfig& cfg) const
    {
        for (const auto& [opt, fn] : entries_) {
            if (opt->count() > 0) fn(cfg);
        }
    }

private:
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> entries_;
};

using S = std::string;

void define_options(CLI::App& app, Overrides& o)
{
    o.add<S>(app, "--map", "builtin map or homotopy name, or 'custom' for the [map] section",
             [](RunConfig& c, const S& v) { c.map = v; });
    o.add<S>(app, "--mode", "fiber, full or sequence", [](RunConfig& c, const S& v) { c.mode = v; });
    o.add<S>(app, "--scheme", "alpha,theta,x,y[,beta] part counts", [](RunConfig& c, const S& v) { c.scheme = v; });
    o.add<S>(app, "--ru", "unstable radius", [](RunConfig& c, const S& v) { c.ru = v; });
    o.add<S>(app, "--rs", "stable radius", [](RunConfig& c, const S& v) { c.rs = v; });
    o.add<std::size_t>(app, "--refine-depth", "bisections of a failing cell",
                       [](RunConfig& c, const std::size_t& v) { c.refine_depth = v; });
    o.add<std::size_t>(app, "--max-failures", "failing cells kept per condition (0 = all)",
                       [](RunConfig& c, const std::size_t& v) { c.max_failures = v; });
    o.add<S>(app, "--sequence", "comma-separated homotopies for sequence mode",
             [](RunConfig& c, const S& v) { c.sequence = v; });
    o.add<S>(app, "--eta", "eta lift in theta (declared endpoint, or the map for 'degree')",
             [](RunConfig& c, const S& v) { c.eta = v; });
    o.add<S>(app, "--A", "declared expansion coefficient", [](RunConfig& c, const S& v) { c.a_coeff = v; });
    o.add_flag(app, "--mobius", "stable bundle is a Moebius band (plot data only)",
               [](RunConfig& c, bool v) { c.mobius_stable = v; });
    o.add_flag(app, "--check-endpoint", "spot-check the declared endpoint before verifying",
               [](RunConfig& c, bool v) { c.check_endpoint = v; });
    o.add<std::vector<S>>(app, "--param", "name=value (repeatable)", [](RunConfig& c, const std::vector<S>& v) {
         for (const S& kv : v) {
             const auto eq = kv.find('=');
             if (eq == S::npos || eq == 0) throw UsageError("--param expects name=value, got '" + kv + "'");
             c.params[kv.substr(0, eq)] = kv.substr(eq + 1);
         }
     })->take_all();
    o.add<S>(app, "--report", "write the JSON report here", [](RunConfig& c, const S& v) { c.report_path = v; });
    o.add<S>(app, "--cells", "write cell CSV here", [](RunConfig& c, const S& v) { c.cells_path = v; });
    o.add<unsigned>(app, "--jobs", "worker threads (default $COVREL_JOBS or 1)",
                    [](RunConfig& c, const unsigned& v) { c.jobs = v; });
    o.add<S>(app, "--radius", "enclosure box radius", [](RunConfig& c, const S& v) { c.enclose_radius = v; });
    o.add<bool>(app, "--disc", "enclosure disc constraint (true/false)",
                [](RunConfig& c, const bool& v) { c.enclose_disc = v; });
    o.add<S>(app, "--grid", "enclosure theta,x,y counts", [](RunConfig& c, const S& v) { c.enclose_grid = v; });
    o.add<std::size_t>(app, "--iterates", "iterates per escape test",
                       [](RunConfig& c, const std::size_t& v) { c.enclose_iterates = v; });
    o.add<std::size_t>(app, "--steps", "refinement steps", [](RunConfig& c, const std::size_t& v) { c.enclose_steps = v; });
    o.add<S>(app, "--slice", "export only cells meeting this theta", [](RunConfig& c, const S& v) { c.enclose_slice = v; });
    o.add<std::size_t>(app, "--parts", "base circle pieces for the degree",
                       [](RunConfig& c, const std::size_t& v) { c.degree_parts = v; });
    o.add<S>(app, "--C", "NHIM constant C", [](RunConfig& c, const S& v) { c.nhim_c = v; });
    o.add<S>(app, "--lambda", "NHIM rate lambda", [](RunConfig& c, const S& v) { c.nhim_lambda = v; });
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"covrel: rigorous covering relations on bundles over the circle", "covrel"};
    app.require_subcommand(0, 1);
    std::string config_path;
    bool dump = false;
    app.add_option("--config", config_path, "INI config file; flags override its values");
    app.add_flag("--dump-config", dump, "print the effective config and exit");

    Overrides overrides;
    define_options(app, overrides);
    const std::vector<std::string> names{"verify", "enclose", "degree", "nhim-k"};
    for (const auto& name : names) {
        static const std::map<std::string, std::string> help{
            {"verify", "verify a covering relation"},
            {"enclose", "enclose the invariant set by discard and refine"},
            {"degree", "certified degree of a circle map lift"},
            {"nhim-k", "smallest iterate with C lambda^k < 1"}};
        app.add_subcommand(name, help.at(name))->fallthrough();
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kError;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        overrides.apply(cfg);
        for (const auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
        if (cfg.subcommand.empty()) throw UsageError("no subcommand given (verify, enclose, degree, nhim-k)");
        if (std::find(names.begin(), names.end(), cfg.subcommand) == names.end())
            throw UsageError("unknown subcommand '" + cfg.subcommand + "'");
        if (dump) {
            write_config(out, cfg);
            return kVerified;
        }
        if (cfg.subcommand == "verify") return run_verify(cfg, out, err);
        if (cfg.subcommand == "enclose") return run_enclose(cfg, out);
        if (cfg.subcommand == "degree") return run_degree(cfg, out, err);
        return run_nhim(cfg, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
}

} // namespace covrel::cli
