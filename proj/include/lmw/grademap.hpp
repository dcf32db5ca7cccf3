#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lmw/image.hpp"
#include "lmw/parallel.hpp"
#include "lmw/rational.hpp"

namespace lmw {

inline constexpr int kDefaultGrades = 15;

/// Grade index 0 marks a pixel outside the segmentation domain (masked quantization only).
inline constexpr std::uint16_t kOutsideDomain = 0;

/// Quantization of an image into N equal-width intensity grades.
///
/// Grade n covers the left-open interval (g_min + (n-1)*delta, g_min + n*delta]; g_min itself
/// belongs to grade 1. delta is kept as the exact fraction (g_max - g_min) / N.
struct GradeMap {
    int width = 0;
    int height = 0;
    int n_grades = kDefaultGrades;
    int g_min = 0;
    int g_max = 0;
    Rational delta;
    bool degenerate = false;   ///< g_min == g_max; every in-domain pixel has grade 1
    std::vector<std::uint16_t> grades;

    std::uint16_t at(int x, int y) const {
        return grades[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
    }
    bool in_domain(std::size_t i) const { return grades[i] != kOutsideDomain; }

    /// 16-bit raster of the grade indices, for debugging dumps.
    GrayImage to_image() const;
};

/// clamp(ceil((g - g_min) / delta), 1, n_grades), evaluated exactly.
/// Throws SpecError when delta is zero or g lies outside [g_min, g_min + n_grades * delta].
int grade_of(int g, int g_min, const Rational& delta, int n_grades);

/// Quantizes the whole image. When invert is set, intensities are reflected
/// (g -> g_min + g_max - g) so dark objects become bright ones.
GradeMap quantize(const GrayImage& image, int n_grades, bool invert = false, Exec exec = Exec::parallel);

/// Serial reference for quantize; kept for tests and benchmarks.
GradeMap quantize_serial(const GrayImage& image, int n_grades, bool invert = false);

/// Quantizes only pixels with mask != 0. g_min/g_max come from the masked pixels; pixels outside
/// the mask get grade kOutsideDomain. An empty mask yields a degenerate map with no domain.
GradeMap quantize_masked(const GrayImage& image, std::span<const std::uint8_t> mask, int n_grades,
                         bool invert = false);

}  // namespace lmw
