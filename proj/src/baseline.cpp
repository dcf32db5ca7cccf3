#include "lmw/baseline.hpp"

#include <algorithm>
#include <vector>

namespace lmw {

LabelMap threshold_mask(const GrayImage& image, int threshold) {
    LabelMap out(image.width(), image.height());
    for (std::size_t i = 0; i < image.size(); ++i) out.labels()[i] = image.pixels()[i] > threshold ? 1u : 0u;
    return out;
}

ThresholdResult otsu_threshold(const GrayImage& image) {
    image.validate();
    std::vector<std::int64_t> hist(static_cast<std::size_t>(image.maxval()) + 1, 0);
    for (auto v : image.pixels()) ++hist[v];
    const auto [lo, hi] = std::minmax_element(image.pixels().begin(), image.pixels().end());
    if (*lo == *hi) throw SpecError("constant image has no Otsu threshold");

    const auto total = static_cast<double>(image.size());
    double sum_all = 0.0;
    for (std::size_t g = 0; g < hist.size(); ++g) sum_all += static_cast<double>(g) * static_cast<double>(hist[g]);

    // sigma_b^2 * total^2 = (total * sum0 - n0 * sum_all)^2 / (n0 * n1)
    double best = -1.0;
    int best_t = *lo;
    std::int64_t n0 = 0;
    double sum0 = 0.0;
    for (int t = 0; t < image.maxval(); ++t) {
        n0 += hist[static_cast<std::size_t>(t)];
        sum0 += static_cast<double>(t) * static_cast<double>(hist[static_cast<std::size_t>(t)]);
        const std::int64_t n1 = static_cast<std::int64_t>(image.size()) - n0;
        if (n0 == 0 || n1 == 0) continue;
        const double d = total * sum0 - static_cast<double>(n0) * sum_all;
        const double score = d * d / (static_cast<double>(n0) * static_cast<double>(n1));
        if (score > best) {
            best = score;
            best_t = t;
        }
    }
    return {best_t, threshold_mask(image, best_t)};
}

}  // namespace lmw
