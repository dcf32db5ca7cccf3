#pragma once

#include <cstdint>
#include <vector>

#include "lmw/image.hpp"

namespace lmw {

struct ObjectMatch {
    std::uint32_t pred_id = 0;
    std::uint32_t truth_id = 0;
    double iou = 0.0;
    double dice = 0.0;
};

struct MetricsReport {
    std::vector<ObjectMatch> objects;  ///< matched pairs, in matching order
    double mean_iou = 0.0;             ///< over truth objects; unmatched truth objects count as 0
    std::size_t matched = 0;
    std::size_t missed = 0;            ///< truth objects left unmatched
    std::size_t spurious = 0;          ///< predicted objects left unmatched
    std::vector<std::uint32_t> missed_ids;
    std::vector<std::uint32_t> spurious_ids;
};

/// Greedy one-to-one matching of predicted to truth objects by descending IoU. Pairs with zero
/// overlap never match. Throws SpecError on dimension mismatch.
MetricsReport evaluate(const LabelMap& pred, const LabelMap& truth);

/// Share of truth foreground pixels covered by predicted objects that lie mostly on the truth:
/// an object counts when at least `min_precision` of its pixels are truth foreground. Suited to
/// thin structures (ridges) where object-to-object matching is meaningless. 1 for empty truth.
double structure_recall(const LabelMap& pred, const LabelMap& truth, double min_precision = 0.5);

}  // namespace lmw
