#include "lmw/pgm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <system_error>

namespace lmw {
namespace {

class HeaderReader {
public:
    HeaderReader(std::span<const std::uint8_t> bytes, std::size_t start) : bytes_(bytes), pos_(start) {}

    std::size_t offset() const { return pos_; }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    long read_uint(const char* what) {
        skip_space_and_comments();
        std::size_t start = pos_;
        long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000'000L) throw DecodeError(std::string("numeric overflow in ") + what, start);
            ++pos_;
        }
        if (pos_ == start) {
            if (pos_ >= bytes_.size()) throw DecodeError(std::string("truncated data, expected ") + what, pos_);
            throw DecodeError(std::string("malformed header, expected ") + what, pos_);
        }
        return value;
    }

    // Exactly one whitespace byte separates maxval from binary samples.
    void expect_single_space() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
            throw DecodeError("malformed header, expected whitespace after maxval", pos_);
        ++pos_;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_;
};

}  // namespace

GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2) throw DecodeError("truncated header, missing magic", 0);
    if (bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
        throw DecodeError("unsupported magic", 0);
    const bool ascii = bytes[1] == '2';

    HeaderReader hr(bytes, 2);
    const long w = hr.read_uint("width");
    const long h = hr.read_uint("height");
    const long maxval = hr.read_uint("maxval");
    if (w < 1 || h < 1) throw DecodeError("malformed header, zero dimension", hr.offset());
    if (maxval < 1 || maxval > 65535) throw DecodeError("maxval out of range [1, 65535]", hr.offset());
    const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (count > (std::size_t{1} << 31)) throw DecodeError("image too large", hr.offset());

    std::vector<std::uint16_t> px(count);
    if (ascii) {
        for (std::size_t i = 0; i < count; ++i) {
            const long v = hr.read_uint("sample");
            if (v > maxval) throw DecodeError("sample exceeds maxval", hr.offset());
            px[i] = static_cast<std::uint16_t>(v);
        }
    } else {
        hr.expect_single_space();
        const std::size_t start = hr.offset();
        const std::size_t bps = maxval < 256 ? 1 : 2;
        if (bytes.size() < start + count * bps) throw DecodeError("truncated pixel data", bytes.size());
        for (std::size_t i = 0; i < count; ++i) {
            std::uint32_t v = bps == 1 ? bytes[start + i]
                                       : (std::uint32_t{bytes[start + 2 * i]} << 8) | bytes[start + 2 * i + 1];
            if (v > static_cast<std::uint32_t>(maxval))
                throw DecodeError("sample exceeds maxval", start + i * bps);
            px[i] = static_cast<std::uint16_t>(v);
        }
    }
    return GrayImage(static_cast<int>(w), static_cast<int>(h), static_cast<int>(maxval), std::move(px));
}

std::vector<std::uint8_t> save_pgm(const GrayImage& image) {
    std::string header = "P5\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n" +
                         std::to_string(image.maxval()) + "\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    const bool wide = image.maxval() >= 256;
    out.reserve(out.size() + image.size() * (wide ? 2 : 1));
    for (auto v : image.pixels()) {
        if (wide) out.push_back(static_cast<std::uint8_t>(v >> 8));
        out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    }
    return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::system_error(std::make_error_code(std::errc::no_such_file_or_directory),
                                     "cannot open " + path.string());
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::system_error(std::make_error_code(std::errc::permission_denied),
                                      "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::system_error(std::make_error_code(std::errc::io_error), "short write to " + path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

GrayImage load_image_file(const std::filesystem::path& path) {
    auto bytes = read_file(path);
    if (bytes.size() >= 8 && bytes[0] == 0x89 && bytes[1] == 'P' && bytes[2] == 'N' && bytes[3] == 'G')
        return load_png(bytes);
    return load_pgm(bytes);
}

void save_image_file(const std::filesystem::path& path, const GrayImage& image) {
    if (path.extension() == ".png") {
        write_file(path, save_png(image));
    } else {
        write_file(path, save_pgm(image));
    }
}

}  // namespace lmw
