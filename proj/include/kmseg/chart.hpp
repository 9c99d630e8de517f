#pragma once

#include "kmseg/region_stats.hpp"

#include <string>
#include <string_view>

namespace kmseg {

enum class ChartFormat { csv, svg };

ChartFormat parse_chart_format(std::string_view text);

/// Side-by-side table (csv) or grouped bar chart (svg) of a comparison.
/// Output is a pure function of the report.
std::string emit_chart(const ComparisonReport& report, ChartFormat format);

/// Shortest decimal text that round-trips to `value`.
std::string format_number(double value);

} // namespace kmseg
