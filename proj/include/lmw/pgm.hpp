#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lmw/image.hpp"

namespace lmw {

/// Decodes a binary (P5) or ASCII (P2) PGM stream. Throws DecodeError with the byte offset
/// of the first malformed token.
GrayImage load_pgm(std::span<const std::uint8_t> bytes);

/// Encodes as binary P5: "P5\n<w> <h>\n<maxval>\n" followed by big-endian samples,
/// one byte each when maxval < 256 and two otherwise.
std::vector<std::uint8_t> save_pgm(const GrayImage& image);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// True when the build links libpng.
bool png_supported() noexcept;

/// 8-bit grayscale PNG. Only available when png_supported().
GrayImage load_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> save_png(const GrayImage& image);

/// Loads a PGM or PNG file, selected by the leading magic bytes.
GrayImage load_image_file(const std::filesystem::path& path);

/// Saves by extension: ".png" writes PNG, anything else P5 PGM.
void save_image_file(const std::filesystem::path& path, const GrayImage& image);

}  // namespace lmw
