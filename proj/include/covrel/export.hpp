#pragma once

#include "covrel/covering.hpp"
#include "covrel/geometry.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

namespace covrel {

/// One CSV row: a cell tagged with the procedure step and a status word.
struct CellRow {
    std::size_t step = 0;
    Cell cell;
    std::string status;
};

inline constexpr const char* kCellCsvHeader = "step,theta_lo,theta_hi,x_lo,x_hi,y_lo,y_hi,status";

/// Endpoints are written in shortest round-trip form, rows in input order.
void write_cells_csv(std::ostream& os, std::span<const CellRow> rows);
void export_cells(std::span<const CellRow> rows, const std::filesystem::path& path);

/// JSON report with stable field names (see README, "Report format").
std::string report_json(const CoveringReport& report, bool include_timing = true);
void export_report(const CoveringReport& report, const std::filesystem::path& path, bool include_timing = true);

} // namespace covrel
