#pragma once

#include "lmw/image.hpp"

namespace lmw {

struct ThresholdResult {
    int threshold = 0;  ///< foreground is intensity > threshold
    LabelMap mask;      ///< 1 for foreground
};

/// Global Otsu threshold: maximizes between-class variance over the intensity histogram,
/// lowest threshold on ties. Throws SpecError for constant images.
ThresholdResult otsu_threshold(const GrayImage& image);

/// Binary mask of pixels strictly above `threshold`.
LabelMap threshold_mask(const GrayImage& image, int threshold);

}  // namespace lmw
