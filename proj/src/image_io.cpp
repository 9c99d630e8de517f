#include "kmseg/image_io.hpp"

#include "kmseg/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>

namespace kmseg {

namespace {

class PgmReader {
public:
    explicit PgmReader(std::string_view bytes) : bytes_(bytes) {}

    // Next whitespace-delimited token, skipping '#' comments.
    std::string_view token(const char* what)
    {
        skip_space_and_comments();
        const std::size_t start = pos_;
        while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))
               && bytes_[pos_] != '#')
            ++pos_;
        if (start == pos_) throw ParseError(std::string("malformed PGM: missing ") + what, line_);
        return bytes_.substr(start, pos_ - start);
    }

    unsigned number(const char* what)
    {
        const std::size_t line = line_;
        const auto text = token(what);
        unsigned value = 0;
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || end != text.data() + text.size())
            throw ParseError(std::string("malformed PGM: bad ") + what + " '" + std::string(text) + "'", line);
        return value;
    }

    // The single whitespace byte that separates the header from raw data.
    void header_terminator()
    {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
            throw ParseError("malformed PGM: missing whitespace after maxval", line_);
        ++pos_;
    }

    std::string_view rest() const { return bytes_.substr(pos_); }
    std::size_t line() const { return line_; }

private:
    void skip_space_and_comments()
    {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                if (c == '\n') ++line_;
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

} // namespace

GrayImage decode_pgm(std::string_view bytes)
{
    if (bytes.size() < 2 || bytes[0] != 'P') throw UnsupportedFormat("not a Netpbm file");
    if (bytes[1] != '2' && bytes[1] != '5')
        throw UnsupportedFormat(std::string("unsupported Netpbm type P") + bytes[1] + " (expected P2 or P5)");
    const bool raw = bytes[1] == '5';

    PgmReader reader(bytes.substr(2));
    const unsigned width = reader.number("width");
    const unsigned height = reader.number("height");
    const unsigned maxval = reader.number("maxval");
    if (width == 0 || height == 0) throw ParseError("malformed PGM: zero dimension", reader.line());
    if (maxval == 0 || maxval > kDepth16)
        throw ParseError("malformed PGM: maxval " + std::to_string(maxval) + " outside [1, 65535]", reader.line());

    const std::size_t count = std::size_t{width} * height;
    std::vector<Pixel> pixels(count);
    if (raw) {
        reader.header_terminator();
        const auto data = reader.rest();
        const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
        if (data.size() < count * sample_bytes)
            throw ParseError("malformed PGM: truncated pixel data (" + std::to_string(data.size()) + " of "
                                 + std::to_string(count * sample_bytes) + " bytes)",
                             0);
        for (std::size_t i = 0; i < count; ++i) {
            const auto* p = reinterpret_cast<const unsigned char*>(data.data()) + i * sample_bytes;
            pixels[i] = sample_bytes == 2 ? static_cast<Pixel>((p[0] << 8) | p[1]) : p[0];
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            unsigned value = 0;
            try {
                value = reader.number("pixel");
            } catch (const ParseError&) {
                throw ParseError("malformed PGM: truncated or invalid pixel data at sample " + std::to_string(i),
                                 reader.line());
            }
            if (value > maxval)
                throw ParseError("malformed PGM: sample " + std::to_string(value) + " exceeds maxval "
                                     + std::to_string(maxval),
                                 reader.line());
            pixels[i] = static_cast<Pixel>(value);
        }
    }

    for (std::size_t i = 0; i < count; ++i)
        if (pixels[i] > maxval)
            throw ParseError("malformed PGM: sample " + std::to_string(pixels[i]) + " exceeds maxval "
                                 + std::to_string(maxval),
                             0);
    return GrayImage(width, height, depth_for(maxval), std::move(pixels));
}

std::string encode_pgm(const GrayImage& image, PgmEncoding encoding)
{
    if (image.empty()) throw Error("cannot encode an empty image");
    std::string out = encoding == PgmEncoding::raw ? "P5\n" : "P2\n";
    out += std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n"
           + std::to_string(image.depth()) + "\n";
    const bool wide = image.depth() > kDepth8;
    if (encoding == PgmEncoding::raw) {
        for (Pixel p : image.pixels()) {
            if (wide) out += static_cast<char>(p >> 8);
            out += static_cast<char>(p & 0xff);
        }
        return out;
    }
    for (std::size_t y = 0; y < image.height(); ++y) {
        const auto row = image.row(y);
        for (std::size_t x = 0; x < row.size(); ++x) {
            if (x != 0) out += ' ';
            out += std::to_string(row[x]);
        }
        out += '\n';
    }
    return out;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
    return bytes;
}

void write_file(const std::filesystem::path& path, std::string_view bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

namespace {

void require_pgm_extension(const std::filesystem::path& path)
{
    auto ext = path.extension().string();
    std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext != ".pgm")
        throw UnsupportedFormat("unsupported image format '" + ext + "' for '" + path.string() + "' (expected .pgm)");
}

} // namespace

GrayImage read_image(const std::filesystem::path& path)
{
    require_pgm_extension(path);
    return decode_pgm(read_file(path));
}

void write_image(const GrayImage& image, const std::filesystem::path& path, PgmEncoding encoding)
{
    require_pgm_extension(path);
    write_file(path, encode_pgm(image, encoding));
}

} // namespace kmseg
