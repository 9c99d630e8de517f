#pragma once

// Image <-> text dataset <-> CSV conversions.
//
// The text dataset holds one line per image row with space-separated decimal
// byte values. The CSV form is the same rows with comma delimiters, LF line
// endings and no header. Both may be jagged; only conversion back to an image
// requires every row to have the same length.

#include "kmseg/image.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kmseg {

struct PixelDataset {
    std::vector<std::vector<std::uint8_t>> rows;
    std::optional<std::size_t> declared_width;

    friend bool operator==(const PixelDataset&, const PixelDataset&) = default;
};

/// Parses whitespace-separated rows. Errors carry line and column.
PixelDataset parse_text_dataset(std::string_view text);
std::string format_text_dataset(const PixelDataset& dataset);

/// Parses comma-separated rows. Errors carry line and column.
PixelDataset parse_csv_dataset(std::string_view csv);
std::string format_csv_dataset(const PixelDataset& dataset);

/// Requires an 8-bit image.
PixelDataset image_to_dataset(const GrayImage& image);

/// Requires non-empty rectangular data; a ragged row is reported by line.
GrayImage dataset_to_image(const PixelDataset& dataset);

std::string image_to_text(const GrayImage& image);
std::string text_to_csv(std::string_view text);
GrayImage csv_to_image(std::string_view csv);

} // namespace kmseg
