#include "kmseg/chart.hpp"

#include "kmseg/error.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <tuple>

namespace kmseg {

namespace {

constexpr int kWidth = 520;
constexpr int kHeight = 340;
constexpr int kLeft = 50;
constexpr int kTop = 40;
constexpr int kPlotHeight = 230;
constexpr int kGroupWidth = 150;
constexpr int kBarWidth = 50;

std::string fixed3(double value)
{
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 3);
    return ec == std::errc{} ? std::string(buf, end) : std::string("0.000");
}

std::string xml_escape(std::string_view text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string cell(const std::optional<double>& v)
{
    return v ? format_number(*v) : std::string("undefined");
}

std::string emit_csv(const ComparisonReport& report)
{
    std::string out = "statistic," + report.left_label + "," + report.right_label + "\n";
    for (const auto& row : report.rows)
        out += row.statistic + "," + cell(row.left) + "," + cell(row.right) + "\n";
    return out;
}

std::string emit_svg(const ComparisonReport& report)
{
    double peak = 0.0;
    for (const auto& row : report.rows)
        for (const auto& v : {row.left, row.right})
            if (v && *v > peak) peak = *v;
    const auto bar_height = [&](const std::optional<double>& v) {
        return (!v || peak <= 0.0 || *v <= 0.0) ? 0.0 : *v / peak * kPlotHeight;
    };
    const int baseline = kTop + kPlotHeight;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << baseline << "\" x2=\"" << kWidth - 10 << "\" y2=\"" << baseline
        << "\" stroke=\"black\"/>\n";

    for (std::size_t g = 0; g < report.rows.size(); ++g) {
        const auto& row = report.rows[g];
        const int x0 = kLeft + 20 + static_cast<int>(g) * kGroupWidth;
        svg << "<g class=\"group\" data-statistic=\"" << xml_escape(row.statistic) << "\">\n";
        int x = x0;
        for (const auto& [value, fill, cls] : {std::tuple{row.left, "#4472c4", "left"},
                                               std::tuple{row.right, "#ed7d31", "right"}}) {
            const double h = bar_height(value);
            svg << "<rect class=\"" << cls << "\" x=\"" << x << "\" y=\"" << fixed3(baseline - h) << "\" width=\""
                << kBarWidth << "\" height=\"" << fixed3(h) << "\" fill=\"" << fill << "\"/>\n";
            svg << "<text x=\"" << x + kBarWidth / 2 << "\" y=\"" << fixed3(baseline - h - 4)
                << "\" font-size=\"10\" text-anchor=\"middle\">" << cell(value) << "</text>\n";
            x += kBarWidth;
        }
        svg << "<text x=\"" << x0 + kBarWidth << "\" y=\"" << baseline + 16
            << "\" font-size=\"12\" text-anchor=\"middle\">" << xml_escape(row.statistic) << "</text>\n";
        svg << "</g>\n";
    }

    const int legend_y = kHeight - 30;
    svg << "<rect x=\"" << kLeft << "\" y=\"" << legend_y << "\" width=\"12\" height=\"12\" fill=\"#4472c4\"/>\n";
    svg << "<text x=\"" << kLeft + 18 << "\" y=\"" << legend_y + 10 << "\" font-size=\"12\">"
        << xml_escape(report.left_label) << "</text>\n";
    svg << "<rect x=\"" << kLeft + 200 << "\" y=\"" << legend_y
        << "\" width=\"12\" height=\"12\" fill=\"#ed7d31\"/>\n";
    svg << "<text x=\"" << kLeft + 218 << "\" y=\"" << legend_y + 10 << "\" font-size=\"12\">"
        << xml_escape(report.right_label) << "</text>\n";
    svg << "<text x=\"" << kLeft << "\" y=\"20\" font-size=\"14\">Lower coefficient of variance: "
        << xml_escape(report.verdict_text()) << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

} // namespace

ChartFormat parse_chart_format(std::string_view text)
{
    if (text == "csv") return ChartFormat::csv;
    if (text == "svg") return ChartFormat::svg;
    throw UnsupportedFormat("unknown chart format '" + std::string(text) + "' (expected csv or svg)");
}

std::string emit_chart(const ComparisonReport& report, ChartFormat format)
{
    switch (format) {
    case ChartFormat::csv: return emit_csv(report);
    case ChartFormat::svg: return emit_svg(report);
    }
    throw UnsupportedFormat("unknown chart format");
}

std::string format_number(double value)
{
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw Error("cannot format number");
    return std::string(buf, end);
}

} // namespace kmseg
