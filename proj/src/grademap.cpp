#include "lmw/grademap.hpp"

#include <algorithm>
#include <limits>

namespace lmw {
namespace {

// Grading with delta = range / n reduces to ceil((g - g_min) * n / range) in integers.
inline std::uint16_t grade_fast(std::int64_t offset, std::int64_t n, std::int64_t range) {
    if (offset <= 0) return 1;
    auto q = (offset * n + range - 1) / range;
    return static_cast<std::uint16_t>(std::min<std::int64_t>(q, n));
}

GradeMap make_header(const GrayImage& image, int n_grades, int g_min, int g_max) {
    GradeMap gm;
    gm.width = image.width();
    gm.height = image.height();
    gm.n_grades = n_grades;
    gm.g_min = g_min;
    gm.g_max = g_max;
    gm.degenerate = g_min >= g_max;
    gm.delta = gm.degenerate ? Rational(0, 1) : Rational(g_max - g_min, n_grades);
    return gm;
}

void check_grades(int n_grades) {
    if (n_grades < 1) throw SpecError("n_grades must be at least 1");
    if (n_grades > 65535) throw SpecError("n_grades must fit in 16 bits");
}

}  // namespace

GrayImage GradeMap::to_image() const {
    std::vector<std::uint16_t> px(grades);
    return GrayImage(width, height, 65535, std::move(px));
}

int grade_of(int g, int g_min, const Rational& delta, int n_grades) {
    if (delta.is_zero()) throw SpecError("degenerate intensity range: delta is zero");
    if (n_grades < 1) throw SpecError("n_grades must be at least 1");
    if (delta < Rational(0, 1)) throw SpecError("delta must be positive");
    const std::int64_t offset = static_cast<std::int64_t>(g) - g_min;
    // offset / (num/den) = offset * den / num
    const __int128 upper = static_cast<__int128>(n_grades) * delta.num();
    if (offset < 0 || static_cast<__int128>(offset) * delta.den() > upper)
        throw SpecError("intensity outside the graded range");
    if (offset == 0) return 1;
    const __int128 num = static_cast<__int128>(offset) * delta.den();
    const __int128 q = (num + delta.num() - 1) / delta.num();
    return static_cast<int>(std::clamp<__int128>(q, 1, n_grades));
}

GradeMap quantize_serial(const GrayImage& image, int n_grades, bool invert) {
    check_grades(n_grades);
    const auto& px = image.pixels();
    const auto [lo, hi] = std::minmax_element(px.begin(), px.end());
    GradeMap gm = make_header(image, n_grades, *lo, *hi);
    gm.grades.assign(px.size(), 1);
    if (gm.degenerate) return gm;
    const std::int64_t range = gm.g_max - gm.g_min;
    for (std::size_t i = 0; i < px.size(); ++i) {
        const int g = invert ? gm.g_min + gm.g_max - px[i] : px[i];
        gm.grades[i] = grade_fast(g - gm.g_min, n_grades, range);
    }
    return gm;
}

GradeMap quantize(const GrayImage& image, int n_grades, bool invert, Exec exec) {
    if (exec == Exec::serial) return quantize_serial(image, n_grades, invert);
    check_grades(n_grades);
    const auto& px = image.pixels();
    const auto n = static_cast<std::int64_t>(px.size());
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
#pragma omp parallel for reduction(min : lo) reduction(max : hi) schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        lo = std::min<int>(lo, px[static_cast<std::size_t>(i)]);
        hi = std::max<int>(hi, px[static_cast<std::size_t>(i)]);
    }
    GradeMap gm = make_header(image, n_grades, lo, hi);
    gm.grades.assign(px.size(), 1);
    if (gm.degenerate) return gm;
    const std::int64_t range = gm.g_max - gm.g_min;
    const int g_min = gm.g_min, g_max = gm.g_max;
    auto* out = gm.grades.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const int v = px[static_cast<std::size_t>(i)];
        const int g = invert ? g_min + g_max - v : v;
        out[i] = grade_fast(g - g_min, n_grades, range);
    }
    return gm;
}

GradeMap quantize_masked(const GrayImage& image, std::span<const std::uint8_t> mask, int n_grades, bool invert) {
    check_grades(n_grades);
    if (mask.size() != image.size()) throw SpecError("mask size does not match image");
    const auto& px = image.pixels();
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
    for (std::size_t i = 0; i < px.size(); ++i) {
        if (!mask[i]) continue;
        lo = std::min<int>(lo, px[i]);
        hi = std::max<int>(hi, px[i]);
    }
    if (lo > hi) {
        GradeMap gm = make_header(image, n_grades, 0, 0);
        gm.grades.assign(px.size(), kOutsideDomain);
        return gm;
    }
    GradeMap gm = make_header(image, n_grades, lo, hi);
    gm.grades.assign(px.size(), kOutsideDomain);
    const std::int64_t range = gm.g_max - gm.g_min;
    for (std::size_t i = 0; i < px.size(); ++i) {
        if (!mask[i]) continue;
        if (gm.degenerate) {
            gm.grades[i] = 1;
            continue;
        }
        const int g = invert ? gm.g_min + gm.g_max - px[i] : px[i];
        gm.grades[i] = grade_fast(g - gm.g_min, n_grades, range);
    }
    return gm;
}

}  // namespace lmw
