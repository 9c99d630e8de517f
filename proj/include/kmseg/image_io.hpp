#pragma once

// Netpbm graymap I/O. Reads P2 (plain) and P5 (raw) with any maxval up to
// 65535; 16-bit raw samples are big-endian.

#include "kmseg/image.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace kmseg {

enum class PgmEncoding { plain, raw };

GrayImage decode_pgm(std::string_view bytes);
std::string encode_pgm(const GrayImage& image, PgmEncoding encoding = PgmEncoding::raw);

/// Dispatches on the file extension; only .pgm is supported.
GrayImage read_image(const std::filesystem::path& path);
void write_image(const GrayImage& image, const std::filesystem::path& path, PgmEncoding encoding = PgmEncoding::raw);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

} // namespace kmseg
