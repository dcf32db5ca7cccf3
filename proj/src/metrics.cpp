#include "lmw/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace lmw {

MetricsReport evaluate(const LabelMap& pred, const LabelMap& truth) {
    if (pred.width() != truth.width() || pred.height() != truth.height())
        throw SpecError("prediction and truth dimensions differ");

    std::map<std::uint32_t, std::int64_t> pred_area, truth_area;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> overlap;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const auto p = pred.labels()[i], t = truth.labels()[i];
        if (p) ++pred_area[p];
        if (t) ++truth_area[t];
        if (p && t) ++overlap[{p, t}];
    }

    struct Pair {
        std::uint32_t p, t;
        double iou, dice;
    };
    std::vector<Pair> pairs;
    for (const auto& [key, inter] : overlap) {
        const auto a = pred_area[key.first], b = truth_area[key.second];
        const double iou = static_cast<double>(inter) / static_cast<double>(a + b - inter);
        const double dice = 2.0 * static_cast<double>(inter) / static_cast<double>(a + b);
        pairs.push_back({key.first, key.second, iou, dice});
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.iou > y.iou; });

    MetricsReport r;
    std::set<std::uint32_t> used_p, used_t;
    double iou_sum = 0.0;
    for (const auto& pr : pairs) {
        if (used_p.count(pr.p) || used_t.count(pr.t)) continue;
        used_p.insert(pr.p);
        used_t.insert(pr.t);
        r.objects.push_back({pr.p, pr.t, pr.iou, pr.dice});
        iou_sum += pr.iou;
    }
    r.matched = r.objects.size();
    for (const auto& [id, area] : truth_area)
        if (!used_t.count(id)) r.missed_ids.push_back(id);
    for (const auto& [id, area] : pred_area)
        if (!used_p.count(id)) r.spurious_ids.push_back(id);
    r.missed = r.missed_ids.size();
    r.spurious = r.spurious_ids.size();
    if (truth_area.empty())
        r.mean_iou = pred_area.empty() ? 1.0 : 0.0;
    else
        r.mean_iou = iou_sum / static_cast<double>(truth_area.size());
    return r;
}

double structure_recall(const LabelMap& pred, const LabelMap& truth, double min_precision) {
    if (pred.width() != truth.width() || pred.height() != truth.height())
        throw SpecError("prediction and truth dimensions differ");
    std::map<std::uint32_t, std::pair<std::int64_t, std::int64_t>> counts;  // area, on truth
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const auto l = pred.labels()[i];
        if (!l) continue;
        auto& c = counts[l];
        ++c.first;
        if (truth.labels()[i]) ++c.second;
    }
    std::int64_t total = 0, covered = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!truth.labels()[i]) continue;
        ++total;
        const auto l = pred.labels()[i];
        if (!l) continue;
        const auto& c = counts[l];
        if (static_cast<double>(c.second) >= min_precision * static_cast<double>(c.first)) ++covered;
    }
    return total ? static_cast<double>(covered) / static_cast<double>(total) : 1.0;
}

}  // namespace lmw
