#include "covrel/export.hpp"

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace covrel {

void write_cells_csv(std::ostream& os, std::span<const CellRow> rows)
{
    os << kCellCsvHeader << '\n';
    for (const CellRow& r : rows) {
        const Cell& c = r.cell;
        os << r.step << ',' << format_double(c.theta.lo()) << ',' << format_double(c.theta.hi()) << ','
           << format_double(c.x.lo()) << ',' << format_double(c.x.hi()) << ',' << format_double(c.y.lo()) << ','
           << format_double(c.y.hi()) << ',' << r.status << '\n';
    }
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

nlohmann::ordered_json interval_json(const Interval& v) { return nlohmann::ordered_json::array({v.lo(), v.hi()}); }

nlohmann::ordered_json failed_json(const FailedCell& f)
{
    nlohmann::ordered_json j;
    j["condition"] = to_string(f.condition);
    j["alpha"] = interval_json(f.cell.alpha);
    j["beta"] = interval_json(f.cell.beta);
    j["theta"] = interval_json(f.cell.theta);
    j["x"] = interval_json(f.cell.x);
    j["y"] = interval_json(f.cell.y);
    j["image"] = {{"theta", interval_json(f.image.theta)},
                  {"x", interval_json(f.image.x)},
                  {"y", interval_json(f.image.y)}};
    return j;
}

nlohmann::ordered_json to_json(const CoveringReport& r, bool timing)
{
    nlohmann::ordered_json j;
    j["format"] = "covrel-report/1";
    j["verdict"] = to_string(r.verdict);
    j["mode"] = to_string(r.mode);
    j["map"] = r.map_name;
    j["conditions"] = {{"exit", r.exit_ok},
                       {"entry", r.entry_ok},
                       {"expansion", r.expansion_ok},
                       {"degree", r.degree_ok ? nlohmann::ordered_json(*r.degree_ok) : nullptr}};
    j["degree"] = r.degree ? nlohmann::ordered_json(*r.degree) : nullptr;
    j["deg2"] = r.degree ? nlohmann::ordered_json(std::labs(*r.degree) % 2) : nullptr;
    j["cells_checked"] = {{"exit", r.exit_cells}, {"entry", r.entry_cells}, {"expansion", r.expansion_cells}};
    auto failed = nlohmann::ordered_json::array();
    for (const auto& f : r.failed_cells) failed.push_back(failed_json(f));
    j["failed_cells"] = failed;
    j["reasons"] = r.reasons;
    j["error"] = r.error;
    if (r.mode == Mode::Sequence) {
        j["first_failing_index"] = r.first_failing_index ? nlohmann::ordered_json(*r.first_failing_index) : nullptr;
        auto members = nlohmann::ordered_json::array();
        for (const auto& m : r.members) members.push_back(to_json(m, timing));
        j["members"] = members;
    }
    if (timing) j["wall_time_s"] = r.wall_time_s;
    return j;
}

} // namespace

void export_cells(std::span<const CellRow> rows, const std::filesystem::path& path)
{
    auto out = open_for_write(path);
    write_cells_csv(out, rows);
    finish(out, path);
}

std::string report_json(const CoveringReport& report, bool include_timing)
{
    return to_json(report, include_timing).dump(2) + "\n";
}

void export_report(const CoveringReport& report, const std::filesystem::path& path, bool include_timing)
{
    auto out = open_for_write(path);
    out << report_json(report, include_timing);
    finish(out, path);
}

} // namespace covrel
