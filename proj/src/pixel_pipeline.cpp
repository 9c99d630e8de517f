#include "kmseg/pixel_pipeline.hpp"

#include "kmseg/error.hpp"

#include <charconv>

namespace kmseg {

namespace {

std::uint8_t parse_byte(std::string_view token, std::size_t line, std::size_t column)
{
    unsigned value = 0;
    const char* first = token.data();
    const char* last = first + token.size();
    const auto [end, ec] = std::from_chars(first, last, value);
    if (token.empty() || ec == std::errc::invalid_argument || end != last)
        throw ParseError("'" + std::string(token) + "' is not a non-negative integer", line, column);
    if (ec == std::errc::result_out_of_range || value > 255)
        throw ParseError("value " + std::string(token) + " out of range [0, 255]", line, column);
    return static_cast<std::uint8_t>(value);
}

// Calls `on_line(line_text, line_number)` for every LF-terminated line. A
// trailing line without LF is still a line; a CR before LF is dropped.
template <typename F>
void for_each_line(std::string_view text, F&& on_line)
{
    std::size_t line = 1;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view current = text.substr(0, eol);
        if (!current.empty() && current.back() == '\r') current.remove_suffix(1);
        on_line(current, line++);
        if (eol == std::string_view::npos) break;
        text.remove_prefix(eol + 1);
    }
}

bool is_blank(char c) { return c == ' ' || c == '\t'; }

std::string format_rows(const PixelDataset& dataset, char delimiter)
{
    std::string out;
    for (const auto& row : dataset.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i != 0) out += delimiter;
            out += std::to_string(row[i]);
        }
        out += '\n';
    }
    return out;
}

} // namespace

PixelDataset parse_text_dataset(std::string_view text)
{
    PixelDataset dataset;
    for_each_line(text, [&](std::string_view line, std::size_t number) {
        auto& row = dataset.rows.emplace_back();
        std::size_t i = 0;
        while (i < line.size()) {
            if (is_blank(line[i])) {
                ++i;
                continue;
            }
            const std::size_t start = i;
            while (i < line.size() && !is_blank(line[i])) ++i;
            row.push_back(parse_byte(line.substr(start, i - start), number, start + 1));
        }
    });
    return dataset;
}

std::string format_text_dataset(const PixelDataset& dataset)
{
    return format_rows(dataset, ' ');
}

PixelDataset parse_csv_dataset(std::string_view csv)
{
    PixelDataset dataset;
    for_each_line(csv, [&](std::string_view line, std::size_t number) {
        auto& row = dataset.rows.emplace_back();
        if (line.empty()) return;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            const auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                   : comma - start);
            if (field.empty()) throw ParseError("empty field", number, start + 1);
            row.push_back(parse_byte(field, number, start + 1));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    });
    return dataset;
}

std::string format_csv_dataset(const PixelDataset& dataset)
{
    return format_rows(dataset, ',');
}

PixelDataset image_to_dataset(const GrayImage& image)
{
    if (image.depth() > kDepth8) throw Error("text dataset is 8-bit only");
    PixelDataset dataset;
    dataset.declared_width = image.width();
    dataset.rows.reserve(image.height());
    for (std::size_t y = 0; y < image.height(); ++y) {
        const auto row = image.row(y);
        dataset.rows.emplace_back(row.begin(), row.end());
    }
    return dataset;
}

GrayImage dataset_to_image(const PixelDataset& dataset)
{
    if (dataset.rows.empty() || dataset.rows.front().empty()) throw ParseError("empty dataset; cannot form bitmap", 0);
    const std::size_t width = dataset.declared_width.value_or(dataset.rows.front().size());
    std::vector<Pixel> pixels;
    pixels.reserve(width * dataset.rows.size());
    for (std::size_t y = 0; y < dataset.rows.size(); ++y) {
        const auto& row = dataset.rows[y];
        if (row.size() != width)
            throw ParseError("non-rectangular dataset; cannot form bitmap (row has " + std::to_string(row.size())
                                 + " values, expected " + std::to_string(width) + ")",
                             y + 1);
        pixels.insert(pixels.end(), row.begin(), row.end());
    }
    return GrayImage(width, dataset.rows.size(), kDepth8, std::move(pixels));
}

std::string image_to_text(const GrayImage& image)
{
    return format_text_dataset(image_to_dataset(image));
}

std::string text_to_csv(std::string_view text)
{
    return format_csv_dataset(parse_text_dataset(text));
}

GrayImage csv_to_image(std::string_view csv)
{
    return dataset_to_image(parse_csv_dataset(csv));
}

} // namespace kmseg
