#pragma once

// Command implementations behind the `kmseg` executable. Each returns the
// process exit code: 0 success, 1 input or validation error, 2 oracle
// mismatch. Library errors propagate as kmseg::Error; run_cli maps them to 1.

#include "kmseg/chart.hpp"
#include "kmseg/image_io.hpp"
#include "kmseg/kmeans.hpp"
#include "kmseg/region_stats.hpp"
#include "kmseg/synthetic.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace kmseg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitOracleMismatch = 2;

struct ConvertOptions {
    std::filesystem::path input;
    std::filesystem::path output;
    PgmEncoding encoding = PgmEncoding::raw;
};

struct SegmentOptions {
    std::filesystem::path input;
    std::filesystem::path output_image;  // empty: <stem>.seg.pgm beside the input
    std::filesystem::path output_labels; // empty: <stem>.labels.pgm
    std::filesystem::path report;        // empty: <stem>.report.json
    KMeansOptions kmeans;
    bool oracle = false;
};

struct StatsOptions {
    std::filesystem::path image;
    std::optional<std::filesystem::path> mask;
    std::optional<std::uint32_t> region;
    StdMode std_mode = StdMode::population;
    std::optional<std::filesystem::path> output;
};

struct CompareOptions {
    std::filesystem::path left;
    std::filesystem::path right;
    std::optional<std::string> left_label;
    std::optional<std::string> right_label;
    std::optional<ChartFormat> chart;
    std::optional<std::filesystem::path> chart_output;
    std::optional<std::filesystem::path> report;
};

struct SynthOptions {
    std::filesystem::path output;
    SyntheticSpec spec;
    PgmEncoding encoding = PgmEncoding::raw;
};

int run_convert(const ConvertOptions& options, std::ostream& out);
int run_segment(const SegmentOptions& options, std::ostream& out, std::ostream& err);
int run_stats(const StatsOptions& options, std::ostream& out);
int run_compare(const CompareOptions& options, std::ostream& out);
int run_synth(const SynthOptions& options, std::ostream& out);

/// Label maps travel as PGM files whose sample values are cluster indices.
GrayImage label_map_to_image(const LabelMap& labels);
LabelMap image_to_label_map(const GrayImage& image);

/// Parses "x,y,w,h,intensity".
SyntheticRegion parse_region(const std::string& text);

/// Full command-line entry point.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace kmseg::cli
