#include "kmseg/commands.hpp"

#include "kmseg/error.hpp"
#include "kmseg/pixel_pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace kmseg::cli {

namespace fs = std::filesystem;

namespace {

enum class FileKind { image, text, csv };

FileKind kind_of(const fs::path& path)
{
    auto ext = path.extension().string();
    std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".pgm") return FileKind::image;
    if (ext == ".txt") return FileKind::text;
    if (ext == ".csv") return FileKind::csv;
    throw UnsupportedFormat("cannot infer format of '" + path.string() + "' (expected .pgm, .txt or .csv)");
}

void print_shape(const PixelDataset& dataset, std::ostream& out)
{
    std::size_t lo = dataset.rows.empty() ? 0 : dataset.rows.front().size();
    std::size_t hi = lo;
    for (const auto& row : dataset.rows) {
        lo = std::min(lo, row.size());
        hi = std::max(hi, row.size());
    }
    if (lo == hi)
        out << dataset.rows.size() << " x " << lo << " (rows x columns)\n";
    else
        out << dataset.rows.size() << " rows, jagged: " << lo << " to " << hi << " columns\n";
}

fs::path beside(const fs::path& input, const std::string& suffix)
{
    return input.parent_path() / (input.stem().string() + suffix);
}

std::string dump(const nlohmann::ordered_json& j)
{
    return j.dump(2) + "\n";
}

std::string fixed(double value, int precision)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << value;
    return s.str();
}

} // namespace

GrayImage label_map_to_image(const LabelMap& labels)
{
    const std::uint32_t top =
        labels.labels.empty() ? 0 : *std::ranges::max_element(labels.labels);
    if (top > kDepth16) throw Error("too many clusters to store as a PGM label map");
    std::vector<Pixel> pixels(labels.labels.begin(), labels.labels.end());
    return GrayImage(labels.width, labels.height, depth_for(top), std::move(pixels));
}

LabelMap image_to_label_map(const GrayImage& image)
{
    const auto pixels = image.pixels();
    return LabelMap{image.width(), image.height(), std::vector<std::uint32_t>(pixels.begin(), pixels.end())};
}

SyntheticRegion parse_region(const std::string& text)
{
    std::vector<unsigned long> fields;
    std::stringstream stream(text);
    std::string field;
    while (std::getline(stream, field, ',')) {
        std::size_t used = 0;
        unsigned long value = 0;
        try {
            value = std::stoul(field, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != field.size() || field.front() == '-')
            throw Error("bad region '" + text + "': expected x,y,w,h,intensity with non-negative integers");
        fields.push_back(value);
    }
    if (fields.size() != 5) throw Error("bad region '" + text + "': expected x,y,w,h,intensity");
    if (fields[4] > kDepth16) throw Error("bad region '" + text + "': intensity exceeds 65535");
    return SyntheticRegion{Rect{fields[0], fields[1], fields[2], fields[3]}, static_cast<Pixel>(fields[4])};
}

int run_convert(const ConvertOptions& options, std::ostream& out)
{
    const FileKind from = kind_of(options.input);
    const FileKind to = kind_of(options.output);

    if (from == FileKind::image && to == FileKind::image) {
        const GrayImage image = read_image(options.input);
        write_image(image, options.output, options.encoding);
        out << image.height() << " x " << image.width() << " (rows x columns)\n";
        return kExitOk;
    }

    PixelDataset dataset;
    switch (from) {
    case FileKind::image: dataset = image_to_dataset(read_image(options.input)); break;
    case FileKind::text: dataset = parse_text_dataset(read_file(options.input)); break;
    case FileKind::csv: dataset = parse_csv_dataset(read_file(options.input)); break;
    }

    switch (to) {
    case FileKind::image: write_image(dataset_to_image(dataset), options.output, options.encoding); break;
    case FileKind::text: write_file(options.output, format_text_dataset(dataset)); break;
    case FileKind::csv: write_file(options.output, format_csv_dataset(dataset)); break;
    }
    print_shape(dataset, out);
    return kExitOk;
}

int run_segment(const SegmentOptions& options, std::ostream& out, std::ostream& err)
{
    const GrayImage image = read_image(options.input);
    const FlattenedIntensities fi = flatten_and_shift(image);
    const IntensityHistogram hist = build_histogram(fi);
    const KMeansResult result = kmeans_converge(hist, options.kmeans);
    const LabelMap labels = segment(image, result.centroids, fi.shift);
    const GrayImage rendered = render_segmented(labels, result.centroids, fi.shift, image.depth());

    const std::size_t k = options.kmeans.k;
    std::vector<std::uint64_t> sizes(k, 0);
    for (auto label : labels.labels) ++sizes[label];

    nlohmann::ordered_json report;
    report["input"] = options.input.filename().string();
    report["width"] = image.width();
    report["height"] = image.height();
    report["k"] = k;
    report["max_iters"] = options.kmeans.max_iters;
    report["m_plus_one"] = options.kmeans.m_plus_one;
    report["shift"] = fi.shift;
    report["max_level"] = fi.max_level;
    auto& centroids = report["centroids"] = nlohmann::ordered_json::array();
    for (double c : result.centroids.values) centroids.push_back(c + static_cast<double>(fi.shift));
    report["centroids_shifted"] = result.centroids.values;
    report["cluster_sizes"] = sizes;
    report["iterations"] = result.report.iterations;
    report["converged"] = result.report.converged;
    report["dispersion_trace"] = result.report.dispersion_trace;
    report["warnings"] = result.report.warnings;

    int status = kExitOk;
    if (options.oracle) {
        const OracleResult oracle = lloyd_oracle(fi, options.kmeans);
        double worst = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            worst = std::max(worst, std::abs(oracle.centroids.values[j] - result.centroids.values[j]));
        std::size_t label_mismatches = 0;
        for (std::size_t i = 0; i < fi.values.size(); ++i)
            if (static_cast<std::int32_t>(oracle.labels[i]) != result.assignment[fi.values[i]]) ++label_mismatches;
        const bool match = worst <= 1e-9 && label_mismatches == 0 && oracle.converged == result.report.converged;
        report["oracle"] = {{"match", match},
                            {"max_centroid_difference", worst},
                            {"label_mismatches", label_mismatches},
                            {"iterations", oracle.iterations}};
        if (!match) {
            err << "oracle mismatch: max centroid difference " << worst << ", " << label_mismatches
                << " pixel labels differ\n";
            status = kExitOracleMismatch;
        }
    }

    const fs::path image_path = options.output_image.empty() ? beside(options.input, ".seg.pgm") : options.output_image;
    const fs::path labels_path =
        options.output_labels.empty() ? beside(options.input, ".labels.pgm") : options.output_labels;
    const fs::path report_path = options.report.empty() ? beside(options.input, ".report.json") : options.report;
    write_image(rendered, image_path);
    write_image(label_map_to_image(labels), labels_path);
    write_file(report_path, dump(report));

    out << image.height() << " x " << image.width() << " (rows x columns), k=" << k << ", iterations "
        << result.report.iterations << ", " << (result.report.converged ? "converged" : "NOT converged") << "\n";
    out << "cluster  centroid  pixels\n";
    for (std::size_t j = 0; j < k; ++j)
        out << std::setw(7) << j << "  " << std::setw(8) << fixed(result.centroids.values[j] + fi.shift, 3) << "  "
            << sizes[j] << "\n";
    for (const auto& warning : result.report.warnings) out << "warning: " << warning << "\n";
    if (options.oracle) out << "oracle: " << (status == kExitOk ? "match" : "MISMATCH") << "\n";
    out << "wrote " << image_path.string() << ", " << labels_path.string() << ", " << report_path.string() << "\n";
    return status;
}

int run_stats(const StatsOptions& options, std::ostream& out)
{
    const GrayImage image = read_image(options.image);
    std::optional<LabelMap> mask;
    if (options.mask) mask = image_to_label_map(read_image(*options.mask));
    const RegionStats stats = compute_stats(image, mask ? &*mask : nullptr, options.region, options.std_mode);
    const std::string json = dump(to_json(stats));

    if (!options.output) {
        out << json;
        return kExitOk;
    }
    write_file(*options.output, json);
    out << "region              " << (stats.region ? std::to_string(*stats.region) : "whole-image") << "\n"
        << "pixels              " << stats.n << "\n"
        << "average             " << format_number(stats.average) << "\n"
        << "std_dev (" << to_string(stats.std_mode) << ")" << std::string(10 - to_string(stats.std_mode).size(), ' ')
        << format_number(stats.std_dev) << "\n"
        << "coeff_var (%)       " << (stats.coeff_var ? format_number(*stats.coeff_var) : "undefined") << "\n";
    return kExitOk;
}

int run_compare(const CompareOptions& options, std::ostream& out)
{
    const auto load = [](const fs::path& path) {
        try {
            return stats_from_json(nlohmann::json::parse(read_file(path)));
        } catch (const nlohmann::json::exception& e) {
            throw Error("'" + path.string() + "': " + e.what());
        }
    };
    const RegionStats left = load(options.left);
    const RegionStats right = load(options.right);
    const ComparisonReport report =
        compare_runs(left, right, options.left_label.value_or(options.left.stem().string()),
                     options.right_label.value_or(options.right.stem().string()));

    if (options.report) write_file(*options.report, dump(to_json(report)));
    if (options.chart) {
        const std::string ext = *options.chart == ChartFormat::csv ? ".csv" : ".svg";
        const fs::path chart_path = options.chart_output.value_or(
            fs::path(options.left.stem().string() + "_vs_" + options.right.stem().string() + ext));
        write_file(chart_path, emit_chart(report, *options.chart));
        out << "chart written to " << chart_path.string() << "\n";
    }

    out << emit_chart(report, ChartFormat::csv);
    out << "lower coefficient of variance: " << report.verdict_text() << "\n";
    return kExitOk;
}

int run_synth(const SynthOptions& options, std::ostream& out)
{
    const GrayImage image = make_synthetic(options.spec);
    write_image(image, options.output, options.encoding);
    out << image.height() << " x " << image.width() << " (rows x columns) written to " << options.output.string()
        << "\n";
    return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Histogram k-means segmentation of grayscale images", "kmseg"};
    app.require_subcommand(1);

    ConvertOptions convert;
    bool convert_plain = false;
    auto* convert_cmd = app.add_subcommand("convert", "Convert between .pgm images, .txt datasets and .csv files");
    convert_cmd->add_option("input", convert.input, "Input file")->required();
    convert_cmd->add_option("output", convert.output, "Output file")->required();
    convert_cmd->add_flag("--plain", convert_plain, "Write plain (P2) PGM");

    SegmentOptions seg;
    auto* segment_cmd = app.add_subcommand("segment", "Cluster intensities and write mask, labels and report");
    segment_cmd->add_option("input", seg.input, "Input .pgm image")->required();
    segment_cmd->add_option("--k", seg.kmeans.k, "Number of clusters")->capture_default_str()->check(CLI::PositiveNumber);
    segment_cmd->add_option("--max-iters", seg.kmeans.max_iters, "Iteration cap")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    segment_cmd->add_flag("--m-plus-one", seg.kmeans.m_plus_one, "Seed centroids from max level + 1");
    segment_cmd->add_flag("--oracle", seg.oracle, "Cross-check against the per-pixel reference");
    segment_cmd->add_option("--out", seg.output_image, "Rendered segmentation (.pgm)");
    segment_cmd->add_option("--labels", seg.output_labels, "Label map (.pgm)");
    segment_cmd->add_option("--report", seg.report, "JSON report");

    StatsOptions stats;
    std::string stats_mode = "population";
    auto* stats_cmd = app.add_subcommand("stats", "Average, standard deviation and coefficient of variance");
    stats_cmd->add_option("image", stats.image, "Input .pgm image")->required();
    stats_cmd->add_option("--mask", stats.mask, "Label map from segment");
    stats_cmd->add_option("--region", stats.region, "Cluster index to select");
    stats_cmd->add_option("--std-mode", stats_mode, "population or sample")
        ->capture_default_str()
        ->check(CLI::IsMember({"population", "sample"}));
    stats_cmd->add_option("--out", stats.output, "Write JSON here instead of standard output");

    CompareOptions compare;
    std::optional<std::string> chart_format;
    auto* compare_cmd = app.add_subcommand("compare", "Compare two stats JSON files");
    compare_cmd->add_option("left", compare.left, "Left stats JSON")->required();
    compare_cmd->add_option("right", compare.right, "Right stats JSON")->required();
    compare_cmd->add_option("--left-label", compare.left_label, "Defaults to the file stem");
    compare_cmd->add_option("--right-label", compare.right_label, "Defaults to the file stem");
    compare_cmd->add_option("--chart", chart_format, "Chart format")->check(CLI::IsMember({"csv", "svg"}));
    compare_cmd->add_option("--chart-out", compare.chart_output, "Chart path");
    compare_cmd->add_option("--report", compare.report, "Comparison JSON");

    SynthOptions synth;
    std::vector<std::string> regions;
    bool synth_plain = false;
    unsigned synth_depth = kDepth8;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic test image");
    synth_cmd->add_option("output", synth.output, "Output .pgm")->required();
    synth_cmd->add_option("--width", synth.spec.width, "Width")->required()->check(CLI::PositiveNumber);
    synth_cmd->add_option("--height", synth.spec.height, "Height")->required()->check(CLI::PositiveNumber);
    synth_cmd->add_option("--region", regions, "x,y,w,h,intensity (repeatable)");
    synth_cmd->add_option("--noise", synth.spec.noise_amplitude, "Uniform noise amplitude")->capture_default_str();
    synth_cmd->add_option("--seed", synth.spec.seed, "Noise seed")->capture_default_str();
    synth_cmd->add_option("--depth", synth_depth, "255 or 65535")
        ->capture_default_str()
        ->check(CLI::IsMember({255u, 65535u}));
    synth_cmd->add_flag("--plain", synth_plain, "Write plain (P2) PGM");

    std::vector<const char*> argv{"kmseg"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    try {
        if (*convert_cmd) {
            convert.encoding = convert_plain ? PgmEncoding::plain : PgmEncoding::raw;
            return run_convert(convert, out);
        }
        if (*segment_cmd) return run_segment(seg, out, err);
        if (*stats_cmd) {
            stats.std_mode = parse_std_mode(stats_mode);
            return run_stats(stats, out);
        }
        if (*compare_cmd) {
            if (chart_format) compare.chart = parse_chart_format(*chart_format);
            return run_compare(compare, out);
        }
        if (*synth_cmd) {
            for (const auto& r : regions) synth.spec.regions.push_back(parse_region(r));
            synth.spec.depth = static_cast<Pixel>(synth_depth);
            synth.encoding = synth_plain ? PgmEncoding::plain : PgmEncoding::raw;
            return run_synth(synth, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}

} // namespace kmseg::cli
