#pragma once

#include <filesystem>
#include <iosfwd>

#include "corpusbias/stats.hpp"

namespace corpusbias {

enum class ReportFormat { csv, json, svg };

std::string to_string(ReportFormat f);
ReportFormat report_format_from_string(std::string_view s);

// CSV schema: `bin_lo,bin_hi,n_words,mean,sd,effect_size,q05,q25,q50,q75,q95`.
// The open-ended top edge prints as `inf`; undefined statistics print as
// empty fields. JSON carries the same report plus the bin scheme and
// round-trips through load_report_json. SVG renders one quantile box
// (5/25/50/75/95%), a mean dot and a printed effect-size label per bin.
// All three emissions are byte-deterministic for a fixed report.
void emit_plot_data(const BinReport& report, ReportFormat format,
                    const std::filesystem::path& path);

void write_report_csv(const BinReport& report, std::ostream& out);
void write_report_json(const BinReport& report, std::ostream& out);
void write_report_svg(const BinReport& report, std::ostream& out);

BinReport load_report_json(const std::filesystem::path& path);

}  // namespace corpusbias
