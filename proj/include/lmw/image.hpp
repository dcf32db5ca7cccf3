#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lmw {

/// Raised when input data cannot be decoded (bad header, truncated stream).
class DecodeError : public std::runtime_error {
public:
    DecodeError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Raised for invalid parameters or inputs that violate an operation's preconditions.
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Pixel coordinate; x is the column, y the row.
struct Point {
    int x = 0;
    int y = 0;

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point& a, const Point& b) {
        if (auto c = a.y <=> b.y; c != 0) return c;
        return a.x <=> b.x;
    }
};

/// Grayscale raster with integer intensities in [0, maxval], stored row-major.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, int maxval = 255, std::uint16_t fill = 0);
    GrayImage(int width, int height, int maxval, std::vector<std::uint16_t> pixels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int maxval() const noexcept { return maxval_; }
    std::size_t size() const noexcept { return pixels_.size(); }

    std::uint16_t operator()(int x, int y) const { return pixels_[index(x, y)]; }
    std::uint16_t& operator()(int x, int y) { return pixels_[index(x, y)]; }

    const std::vector<std::uint16_t>& pixels() const noexcept { return pixels_; }
    std::vector<std::uint16_t>& pixels() noexcept { return pixels_; }

    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }
    bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    /// Throws SpecError unless the dimension and range invariants hold.
    void validate() const;

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    int maxval_ = 255;
    std::vector<std::uint16_t> pixels_;
};

/// Per-pixel object labels; 0 is background.
class LabelMap {
public:
    LabelMap() = default;
    LabelMap(int width, int height, std::uint32_t fill = 0);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return labels_.size(); }

    std::uint32_t operator()(int x, int y) const { return labels_[index(x, y)]; }
    std::uint32_t& operator()(int x, int y) { return labels_[index(x, y)]; }

    const std::vector<std::uint32_t>& labels() const noexcept { return labels_; }
    std::vector<std::uint32_t>& labels() noexcept { return labels_; }

    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    std::uint32_t max_label() const noexcept;

    /// Converts to a 16-bit raster for PGM output; labels above 65535 are rejected.
    GrayImage to_image() const;
    static LabelMap from_image(const GrayImage& image);

    friend bool operator==(const LabelMap&, const LabelMap&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint32_t> labels_;
};

}  // namespace lmw
