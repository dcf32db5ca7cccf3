#include "lmw/image.hpp"

#include <algorithm>

namespace lmw {

GrayImage::GrayImage(int width, int height, int maxval, std::uint16_t fill)
    : width_(width), height_(height), maxval_(maxval) {
    if (width < 1 || height < 1) throw SpecError("image dimensions must be positive");
    if (maxval < 1 || maxval > 65535) throw SpecError("maxval must lie in [1, 65535]");
    if (fill > maxval) throw SpecError("fill value exceeds maxval");
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayImage::GrayImage(int width, int height, int maxval, std::vector<std::uint16_t> pixels)
    : width_(width), height_(height), maxval_(maxval), pixels_(std::move(pixels)) {
    validate();
}

void GrayImage::validate() const {
    if (width_ < 1 || height_ < 1) throw SpecError("image dimensions must be positive");
    if (maxval_ < 1 || maxval_ > 65535) throw SpecError("maxval must lie in [1, 65535]");
    if (pixels_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_))
        throw SpecError("pixel buffer does not match image dimensions");
    for (auto v : pixels_)
        if (v > maxval_) throw SpecError("pixel value exceeds maxval");
}

LabelMap::LabelMap(int width, int height, std::uint32_t fill) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw SpecError("label map dimensions must be positive");
    labels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

std::uint32_t LabelMap::max_label() const noexcept {
    return labels_.empty() ? 0 : *std::max_element(labels_.begin(), labels_.end());
}

GrayImage LabelMap::to_image() const {
    if (max_label() > 65535) throw SpecError("label value does not fit a 16-bit raster");
    std::vector<std::uint16_t> px(labels_.begin(), labels_.end());
    return GrayImage(width_, height_, 65535, std::move(px));
}

LabelMap LabelMap::from_image(const GrayImage& image) {
    LabelMap out(image.width(), image.height());
    std::copy(image.pixels().begin(), image.pixels().end(), out.labels_.begin());
    return out;
}

}  // namespace lmw
