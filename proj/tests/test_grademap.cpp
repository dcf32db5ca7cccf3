#include <doctest.h>

#include <random>

#include "lmw/grademap.hpp"
#include "oracles.hpp"

using namespace lmw;

namespace {

// Integer-only reference: ceil((g - g_min) * n / range), clamped to [1, n].
int reference_grade(int g, int g_min, int g_max, int n) {
    const long long num = static_cast<long long>(g - g_min) * n;
    const long long q = (num + (g_max - g_min) - 1) / (g_max - g_min);
    return static_cast<int>(std::clamp<long long>(q, 1, n));
}

}  // namespace

TEST_CASE("grade_of hand examples") {
    const Rational delta(10, 1);
    CHECK(grade_of(0, 0, delta, 15) == 1);
    CHECK(grade_of(150, 0, delta, 15) == 15);
    CHECK(grade_of(75, 0, delta, 15) == 8);
    CHECK(grade_of(70, 0, delta, 15) == 7);
    CHECK(grade_of(71, 0, delta, 15) == 8);
}

TEST_CASE("grade_of rejects degenerate and out-of-range input") {
    CHECK_THROWS_AS(grade_of(5, 0, Rational(0, 1), 15), SpecError);
    CHECK_THROWS_AS(grade_of(-1, 0, Rational(10, 1), 15), SpecError);
    CHECK_THROWS_AS(grade_of(151, 0, Rational(10, 1), 15), SpecError);
}

TEST_CASE("grade_of is exact at every cut for non-integer deltas") {
    for (int range : {1, 7, 14, 16, 100, 255, 65535}) {
        for (int n : {1, 2, 3, 15, 16}) {
            const Rational delta(range, n);
            for (int g = 0; g <= range; g += std::max(1, range / 300)) CHECK(grade_of(g, 0, delta, n) == reference_grade(g, 0, range, n));
            CHECK(grade_of(range, 0, delta, n) == n);
        }
    }
}

TEST_CASE("3x1 ramp quantizes to the first, middle and last grade") {
    const GrayImage img(3, 1, 255, std::vector<std::uint16_t>{0, 75, 150});
    const GradeMap gm = quantize(img, 15);
    CHECK(gm.grades == std::vector<std::uint16_t>{1, 8, 15});
    CHECK(gm.delta == Rational(10, 1));
    CHECK_FALSE(gm.degenerate);
}

TEST_CASE("constant image is degenerate") {
    const GradeMap gm = quantize(GrayImage(4, 3, 255, 42), 15);
    CHECK(gm.degenerate);
    CHECK(std::all_of(gm.grades.begin(), gm.grades.end(), [](auto g) { return g == 1; }));
}

TEST_CASE("quantize matches the integer reference and the serial kernel") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 40; ++t) {
        const int n = 1 + static_cast<int>(rng() % 20);
        const GrayImage img = oracle::random_image(rng, 23, 17, 1 + static_cast<int>(rng() % 200), t % 2 ? 255 : 4095);
        for (bool invert : {false, true}) {
            const GradeMap par = quantize(img, n, invert, Exec::parallel);
            const GradeMap ser = quantize_serial(img, n, invert);
            CHECK(par.grades == ser.grades);
            if (par.degenerate) continue;
            for (std::size_t i = 0; i < img.size(); ++i) {
                int g = img.pixels()[i];
                if (invert) g = par.g_min + par.g_max - g;
                CHECK(par.grades[i] == reference_grade(g, par.g_min, par.g_max, n));
            }
        }
    }
}

TEST_CASE("grade map invariants") {
    std::mt19937_64 rng(3);
    const GrayImage img = oracle::random_image(rng, 40, 30, 256);
    const GradeMap gm = quantize(img, 15);
    const auto [lo, hi] = std::minmax_element(img.pixels().begin(), img.pixels().end());
    for (std::size_t i = 0; i < img.size(); ++i) {
        CHECK(gm.grades[i] >= 1);
        CHECK(gm.grades[i] <= 15);
        if (img.pixels()[i] == *lo) CHECK(gm.grades[i] == 1);
        if (img.pixels()[i] == *hi) CHECK(gm.grades[i] == 15);
    }
    for (std::size_t i = 0; i < img.size(); ++i)
        for (std::size_t j = 0; j < img.size(); j += 37)
            if (img.pixels()[i] <= img.pixels()[j]) CHECK(gm.grades[i] <= gm.grades[j]);
}

TEST_CASE("ramp rows are monotone") {
    GrayImage img(64, 3, 255);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 64; ++x) img(x, y) = static_cast<std::uint16_t>(x * 4 + y);
    const GradeMap gm = quantize(img, 15);
    for (int y = 0; y < 3; ++y)
        for (int x = 1; x < 64; ++x) CHECK(gm.at(x - 1, y) <= gm.at(x, y));
}

TEST_CASE("double inversion and intensity shifts leave grades unchanged") {
    std::mt19937_64 rng(5);
    const GrayImage img = oracle::random_image(rng, 20, 20, 100, 200);
    GrayImage inv(20, 20, 255), shifted(20, 20, 255);
    const auto [lo, hi] = std::minmax_element(img.pixels().begin(), img.pixels().end());
    for (std::size_t i = 0; i < img.size(); ++i) {
        inv.pixels()[i] = static_cast<std::uint16_t>(*lo + *hi - img.pixels()[i]);
        shifted.pixels()[i] = static_cast<std::uint16_t>(img.pixels()[i] + 55);
    }
    CHECK(quantize(inv, 15, true).grades == quantize(img, 15).grades);
    CHECK(quantize(shifted, 15).grades == quantize(img, 15).grades);
}

TEST_CASE("masked quantization uses the masked range only") {
    const GrayImage img(4, 1, 255, std::vector<std::uint16_t>{0, 100, 130, 255});
    const std::vector<std::uint8_t> mask{0, 1, 1, 0};
    const GradeMap gm = quantize_masked(img, mask, 3);
    CHECK(gm.g_min == 100);
    CHECK(gm.g_max == 130);
    CHECK(gm.grades == std::vector<std::uint16_t>{kOutsideDomain, 1, 3, kOutsideDomain});
    const GradeMap none = quantize_masked(img, std::vector<std::uint8_t>(4, 0), 3);
    CHECK(none.degenerate);
}

TEST_CASE("n_grades must be positive") { CHECK_THROWS_AS(quantize(GrayImage(2, 2), 0), SpecError); }
