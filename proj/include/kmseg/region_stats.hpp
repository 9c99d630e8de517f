#pragma once

#include "kmseg/image.hpp"
#include "kmseg/kmeans.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace kmseg {

enum class StdMode { population, sample };

std::string_view to_string(StdMode mode) noexcept;
StdMode parse_std_mode(std::string_view text);

/// Exact integer moments of a pixel selection; independent of traversal order.
struct PixelMoments {
    std::uint64_t n = 0;
    std::uint64_t sum = 0;
    unsigned __int128 sum_squares = 0;

    friend bool operator==(const PixelMoments&, const PixelMoments&) = default;
};

struct RegionStats {
    /// Cluster index, or empty for the whole image.
    std::optional<std::uint32_t> region;
    std::uint64_t n = 0;
    double average = 0.0;
    double std_dev = 0.0;
    /// Percent; empty when the average is zero.
    std::optional<double> coeff_var;
    StdMode std_mode = StdMode::population;
};

/// 100 * std_dev / average, or nothing when average is 0.
std::optional<double> coefficient_of_variation(double average, double std_dev) noexcept;

/// Integer moments of the pixels selected by `mask`/`region`. With no region
/// every pixel is selected.
PixelMoments pixel_moments(const GrayImage& image, const LabelMap* mask = nullptr,
                           std::optional<std::uint32_t> region = std::nullopt);

RegionStats stats_from_moments(const PixelMoments& moments, std::optional<std::uint32_t> region, StdMode mode);

RegionStats compute_stats(const GrayImage& image, const LabelMap* mask = nullptr,
                          std::optional<std::uint32_t> region = std::nullopt,
                          StdMode mode = StdMode::population);

enum class Verdict { left_lower, right_lower, equal, incomparable };

struct ComparisonRow {
    std::string statistic;
    std::optional<double> left;
    std::optional<double> right;
};

struct ComparisonReport {
    std::string left_label;
    std::string right_label;
    std::array<ComparisonRow, 3> rows; // average, std_dev, coeff_var
    Verdict verdict = Verdict::incomparable;

    /// The label of the lower-CV side, "equal" or "incomparable".
    std::string verdict_text() const;
};

ComparisonReport compare_runs(const RegionStats& left, const RegionStats& right, std::string left_label,
                              std::string right_label);

// JSON forms: keys region_id, n, average, std_dev, coeff_var (null when
// undefined), std_mode. region_id is an integer or "whole-image".
nlohmann::ordered_json to_json(const RegionStats& stats);
RegionStats stats_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const ComparisonReport& report);

} // namespace kmseg
