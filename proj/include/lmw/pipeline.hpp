#pragma once

#include <cstdint>
#include <vector>

#include "lmw/bandtree.hpp"
#include "lmw/grademap.hpp"
#include "lmw/image.hpp"
#include "lmw/lmw.hpp"
#include "lmw/parallel.hpp"

namespace lmw {

struct SegmentConfig {
    int n_grades = kDefaultGrades;
    bool invert = false;
    Connectivity connectivity = Connectivity::four;
    LmwOptions lmw;
    std::int64_t min_object_area = 1;
    /// Objects whose region reaches the image (or domain) border are dropped unless set: their
    /// band is bounded by the frame rather than by two complete iso-grade lines.
    bool keep_border_objects = false;
    Exec exec = Exec::parallel;
};

/// Condition an object must satisfy to be accepted by segment_iterative.
struct ObjectPredicate {
    enum class Kind { max_area_fraction, min_contrast };
    Kind kind = Kind::max_area_fraction;
    double value = 0.2;  ///< theta in (0, 1] or the minimum contrast c >= 0

    static ObjectPredicate max_area_fraction(double theta);
    static ObjectPredicate min_contrast(double c);
};

struct IterateConfig {
    ObjectPredicate predicate;
    int max_iter = 5;
};

struct ObjectStats {
    std::uint32_t label = 0;      ///< value in SegmentationResult::labels
    int band_id = -1;             ///< source band in the tree that produced the object
    int grade = 0;
    std::int64_t area = 0;        ///< pixels on or inside the contour
    double mean_intensity = 0.0;  ///< over the same pixels, in original image units
    double contrast = 0.0;        ///< mean inside minus mean of the 4-adjacent outer ring (object polarity)
    int iteration = 0;
    bool touches_border = false;
};

struct TreeSummary {
    std::size_t band_count = 0;
    std::size_t virtual_count = 0;
    std::size_t lmw_count = 0;
};

/// contours[i], objects[i] and masks[i] describe the same object; labels hold the innermost
/// object per pixel.
struct SegmentationResult {
    std::vector<Contour> contours;
    std::vector<ObjectStats> objects;
    std::vector<LocalMask> masks;
    LabelMap labels;
    TreeSummary tree_summary;
    int n_grades = kDefaultGrades;
};

/// Grade map -> band tree -> LMW bands -> thinning -> filled objects -> label map.
SegmentationResult segment(const GrayImage& image, const SegmentConfig& config = {});

/// Re-segments objects failing the predicate inside their own region (with local intensity
/// range) until all pass or max_iter rounds have run.
SegmentationResult segment_iterative(const GrayImage& image, const SegmentConfig& config,
                                     const IterateConfig& iterate);

bool satisfies(const ObjectPredicate& predicate, const ObjectStats& object, std::int64_t image_area);

}  // namespace lmw
