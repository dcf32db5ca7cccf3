#include "lmw/pgm.hpp"

#ifdef LMW_HAVE_PNG
#include <png.h>
#endif

namespace lmw {

#ifdef LMW_HAVE_PNG

bool png_supported() noexcept { return true; }

GrayImage load_png(std::span<const std::uint8_t> bytes) {
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size()))
        throw DecodeError(std::string("png: ") + img.message, 0);
    img.format = PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
        std::string msg = img.message;
        png_image_free(&img);
        throw DecodeError("png: " + msg, 0);
    }
    std::vector<std::uint16_t> px(buf.begin(), buf.end());
    return GrayImage(static_cast<int>(img.width), static_cast<int>(img.height), 255, std::move(px));
}

std::vector<std::uint8_t> save_png(const GrayImage& image) {
    std::vector<std::uint8_t> gray(image.size());
    for (std::size_t i = 0; i < image.size(); ++i)
        gray[i] = static_cast<std::uint8_t>((static_cast<std::uint32_t>(image.pixels()[i]) * 255u + image.maxval() / 2) /
                                            static_cast<std::uint32_t>(image.maxval()));
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(image.width());
    img.height = static_cast<png_uint_32>(image.height());
    img.format = PNG_FORMAT_GRAY;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&img, nullptr, &size, 0, gray.data(), 0, nullptr))
        throw std::runtime_error(std::string("png: ") + img.message);
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&img, out.data(), &size, 0, gray.data(), 0, nullptr))
        throw std::runtime_error(std::string("png: ") + img.message);
    out.resize(size);
    return out;
}

#else

bool png_supported() noexcept { return false; }

GrayImage load_png(std::span<const std::uint8_t>) { throw DecodeError("png support not built", 0); }

std::vector<std::uint8_t> save_png(const GrayImage&) { throw std::runtime_error("png support not built"); }

#endif

}  // namespace lmw
