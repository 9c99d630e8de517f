#include "kmseg/region_stats.hpp"

#include "kmseg/error.hpp"

#include <cmath>

namespace kmseg {

std::string_view to_string(StdMode mode) noexcept
{
    return mode == StdMode::population ? "population" : "sample";
}

StdMode parse_std_mode(std::string_view text)
{
    if (text == "population") return StdMode::population;
    if (text == "sample") return StdMode::sample;
    throw Error("unknown std mode '" + std::string(text) + "' (expected population or sample)");
}

std::optional<double> coefficient_of_variation(double average, double std_dev) noexcept
{
    if (average == 0.0) return std::nullopt;
    return 100.0 * std_dev / average;
}

RegionStats stats_from_moments(const PixelMoments& moments, std::optional<std::uint32_t> region, StdMode mode)
{
    if (moments.n == 0) throw Error("empty region: no pixels selected");
    if (mode == StdMode::sample && moments.n == 1) throw Error("sample std undefined for n=1");

    const auto n = static_cast<unsigned __int128>(moments.n);
    const auto s = static_cast<unsigned __int128>(moments.sum);
    // n * sum(x^2) - (sum x)^2 is n^2 times the population variance, and is
    // non-negative by Cauchy-Schwarz.
    const unsigned __int128 scaled = n * moments.sum_squares - s * s;
    const double nd = static_cast<double>(moments.n);
    const double divisor = mode == StdMode::population ? nd * nd : nd * (nd - 1.0);

    RegionStats stats;
    stats.region = region;
    stats.n = moments.n;
    stats.average = static_cast<double>(moments.sum) / nd;
    stats.std_dev = std::sqrt(static_cast<double>(scaled) / divisor);
    stats.coeff_var = coefficient_of_variation(stats.average, stats.std_dev);
    stats.std_mode = mode;
    return stats;
}

RegionStats compute_stats(const GrayImage& image, const LabelMap* mask, std::optional<std::uint32_t> region,
                          StdMode mode)
{
    if (image.empty()) throw Error("empty input");
    return stats_from_moments(pixel_moments(image, mask, region), region, mode);
}

std::string ComparisonReport::verdict_text() const
{
    switch (verdict) {
    case Verdict::left_lower: return left_label;
    case Verdict::right_lower: return right_label;
    case Verdict::equal: return "equal";
    case Verdict::incomparable: break;
    }
    return "incomparable";
}

ComparisonReport compare_runs(const RegionStats& left, const RegionStats& right, std::string left_label,
                              std::string right_label)
{
    ComparisonReport report;
    report.left_label = std::move(left_label);
    report.right_label = std::move(right_label);
    report.rows = {ComparisonRow{"average", left.average, right.average},
                   ComparisonRow{"std_dev", left.std_dev, right.std_dev},
                   ComparisonRow{"coeff_var", left.coeff_var, right.coeff_var}};

    if (!left.coeff_var || !right.coeff_var)
        report.verdict = Verdict::incomparable;
    else if (*left.coeff_var < *right.coeff_var)
        report.verdict = Verdict::left_lower;
    else if (*right.coeff_var < *left.coeff_var)
        report.verdict = Verdict::right_lower;
    else
        report.verdict = Verdict::equal;
    return report;
}

nlohmann::ordered_json to_json(const RegionStats& stats)
{
    nlohmann::ordered_json j;
    if (stats.region)
        j["region_id"] = *stats.region;
    else
        j["region_id"] = "whole-image";
    j["n"] = stats.n;
    j["average"] = stats.average;
    j["std_dev"] = stats.std_dev;
    j["coeff_var"] = stats.coeff_var ? nlohmann::ordered_json(*stats.coeff_var) : nlohmann::ordered_json(nullptr);
    j["std_mode"] = to_string(stats.std_mode);
    return j;
}

RegionStats stats_from_json(const nlohmann::json& j)
{
    try {
        RegionStats stats;
        const auto& region = j.at("region_id");
        if (region.is_string()) {
            if (region.get<std::string>() != "whole-image")
                throw Error("region_id must be an integer or \"whole-image\"");
        } else {
            stats.region = region.get<std::uint32_t>();
        }
        stats.n = j.at("n").get<std::uint64_t>();
        stats.average = j.at("average").get<double>();
        stats.std_dev = j.at("std_dev").get<double>();
        const auto& cv = j.at("coeff_var");
        if (!cv.is_null()) stats.coeff_var = cv.get<double>();
        if (j.contains("std_mode")) stats.std_mode = parse_std_mode(j.at("std_mode").get<std::string>());

        if (stats.n == 0) throw Error("stats n must be at least 1");
        if (stats.std_dev < 0.0) throw Error("stats std_dev must be non-negative");
        return stats;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed stats JSON: ") + e.what());
    }
}

nlohmann::ordered_json to_json(const ComparisonReport& report)
{
    const auto value = [](const std::optional<double>& v) {
        return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    nlohmann::ordered_json j;
    j["left_label"] = report.left_label;
    j["right_label"] = report.right_label;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : report.rows)
        j["rows"].push_back({{"statistic", row.statistic}, {"left", value(row.left)}, {"right", value(row.right)}});
    j["verdict"] = report.verdict_text();
    return j;
}

} // namespace kmseg
