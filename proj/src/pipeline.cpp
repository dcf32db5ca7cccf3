#include "lmw/pipeline.hpp"

#include <algorithm>
#include <numeric>

namespace lmw {
namespace {

struct Candidate {
    Contour contour;
    LocalMask mask;
    ObjectStats stats;
    bool refinable = true;
};

bool same_mask(const LocalMask& a, const LocalMask& b) {
    return a.x0 == b.x0 && a.y0 == b.y0 && a.width == b.width && a.height == b.height && a.cells == b.cells;
}

GrayImage crop(const GrayImage& image, int x0, int y0, int w, int h) {
    GrayImage out(w, h, image.maxval());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out(x, y) = image(x0 + x, y0 + y);
    return out;
}

void measure(Candidate& c, const GrayImage& image, const LocalMask* domain, bool invert) {
    const LocalMask& m = c.mask;
    auto in_domain = [&](int x, int y) {
        return image.contains(x, y) && (domain == nullptr || domain->test(x, y));
    };
    std::int64_t area = 0, sum = 0, ring_n = 0, ring_sum = 0;
    bool border = false;
    constexpr int dx[4] = {1, -1, 0, 0};
    constexpr int dy[4] = {0, 0, 1, -1};
    for (int ly = -1; ly <= m.height; ++ly) {
        for (int lx = -1; lx <= m.width; ++lx) {
            const int x = m.x0 + lx, y = m.y0 + ly;
            if (m.test(x, y)) {
                ++area;
                sum += image(x, y);
                for (int k = 0; k < 4; ++k)
                    if (!in_domain(x + dx[k], y + dy[k])) border = true;
                continue;
            }
            if (!image.contains(x, y)) continue;
            bool ring = false;
            for (int k = 0; k < 4 && !ring; ++k) ring = m.test(x + dx[k], y + dy[k]);
            if (ring) {
                ++ring_n;
                ring_sum += image(x, y);
            }
        }
    }
    c.stats.area = area;
    c.stats.mean_intensity = area ? static_cast<double>(sum) / static_cast<double>(area) : 0.0;
    const double ring_mean = ring_n ? static_cast<double>(ring_sum) / static_cast<double>(ring_n) : c.stats.mean_intensity;
    c.stats.contrast = (c.stats.mean_intensity - ring_mean) * (invert ? -1.0 : 1.0);
    c.stats.touches_border = border;
}

void dedupe(std::vector<Candidate>& cands) {
    std::vector<Candidate> kept;
    kept.reserve(cands.size());
    for (auto& c : cands) {
        const bool dup = std::any_of(kept.begin(), kept.end(), [&](const Candidate& k) {
            return k.stats.area == c.stats.area && same_mask(k.mask, c.mask);
        });
        if (!dup) kept.push_back(std::move(c));
    }
    cands = std::move(kept);
}

// Runs the three-step method on the whole image, or only on the pixels of `domain`.
std::vector<Candidate> segment_region(const GrayImage& image, const LocalMask* domain, const SegmentConfig& cfg,
                                      TreeSummary* summary) {
    int ox = 0, oy = 0;
    GradeMap gm;
    if (domain) {
        ox = domain->x0;
        oy = domain->y0;
        const GrayImage sub = crop(image, ox, oy, domain->width, domain->height);
        gm = quantize_masked(sub, domain->cells, cfg.n_grades, cfg.invert);
    } else {
        gm = quantize(image, cfg.n_grades, cfg.invert, cfg.exec);
    }
    if (gm.degenerate) return {};

    const BandTree tree = build_band_tree(gm, cfg.connectivity, cfg.exec);
    const std::vector<int> lmw_ids = find_lmw_bands(tree, cfg.lmw);
    if (summary) {
        summary->band_count = tree.size();
        summary->virtual_count = tree.size() - tree.real_band_count();
        summary->lmw_count = lmw_ids.size();
    }

    std::vector<std::vector<Candidate>> per_band(lmw_ids.size());
    auto process = [&](std::size_t i) {
        const Band& b = tree.band(lmw_ids[i]);
        for (auto& contour : shrink_band(tree, b.id)) {
            for (auto& p : contour.points) {
                p.x += ox;
                p.y += oy;
            }
            Candidate c;
            c.mask = fill_points(contour.points);
            c.contour = std::move(contour);
            c.stats.band_id = b.id;
            c.stats.grade = b.grade;
            measure(c, image, domain, cfg.invert);
            per_band[i].push_back(std::move(c));
        }
    };
    const auto n = static_cast<std::int64_t>(lmw_ids.size());
    if (cfg.exec == Exec::serial) {
        for (std::int64_t i = 0; i < n; ++i) process(static_cast<std::size_t>(i));
    } else {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < n; ++i) process(static_cast<std::size_t>(i));
    }

    std::vector<Candidate> out;
    for (auto& v : per_band)
        for (auto& c : v) {
            if (c.stats.area < cfg.min_object_area) continue;
            if (c.stats.touches_border && !cfg.keep_border_objects) continue;
            if (!c.contour.closed && !c.stats.touches_border) continue;  // fragment without a core
            out.push_back(std::move(c));
        }
    dedupe(out);
    return out;
}

SegmentationResult finalize(std::vector<Candidate> cands, const GrayImage& image, const SegmentConfig& cfg,
                            const TreeSummary& summary) {
    SegmentationResult r;
    r.n_grades = cfg.n_grades;
    r.tree_summary = summary;
    r.labels = LabelMap(image.width(), image.height());
    std::vector<std::size_t> order(cands.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Larger objects first so enclosed objects overwrite them.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cands[a].stats.area > cands[b].stats.area; });
    for (std::size_t i = 0; i < cands.size(); ++i) cands[i].stats.label = static_cast<std::uint32_t>(i + 1);
    for (auto i : order) {
        const LocalMask& m = cands[i].mask;
        for (int y = 0; y < m.height; ++y)
            for (int x = 0; x < m.width; ++x)
                if (m.cells[static_cast<std::size_t>(y) * static_cast<std::size_t>(m.width) +
                            static_cast<std::size_t>(x)])
                    r.labels(m.x0 + x, m.y0 + y) = cands[i].stats.label;
    }
    for (auto& c : cands) {
        r.contours.push_back(std::move(c.contour));
        r.objects.push_back(c.stats);
        r.masks.push_back(std::move(c.mask));
    }
    return r;
}

}  // namespace

ObjectPredicate ObjectPredicate::max_area_fraction(double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw SpecError("area fraction must lie in (0, 1]");
    return {Kind::max_area_fraction, theta};
}

ObjectPredicate ObjectPredicate::min_contrast(double c) {
    if (!(c >= 0.0)) throw SpecError("contrast threshold must be non-negative");
    return {Kind::min_contrast, c};
}

bool satisfies(const ObjectPredicate& predicate, const ObjectStats& object, std::int64_t image_area) {
    switch (predicate.kind) {
        case ObjectPredicate::Kind::max_area_fraction:
            return static_cast<double>(object.area) <= predicate.value * static_cast<double>(image_area);
        case ObjectPredicate::Kind::min_contrast:
            return object.contrast >= predicate.value;
    }
    return true;
}

SegmentationResult segment(const GrayImage& image, const SegmentConfig& config) {
    image.validate();
    if (config.n_grades < 1) throw SpecError("n_grades must be at least 1");
    TreeSummary summary;
    auto cands = segment_region(image, nullptr, config, &summary);
    return finalize(std::move(cands), image, config, summary);
}

SegmentationResult segment_iterative(const GrayImage& image, const SegmentConfig& config,
                                     const IterateConfig& iterate) {
    image.validate();
    if (config.n_grades < 1) throw SpecError("n_grades must be at least 1");
    if (iterate.max_iter < 0) throw SpecError("max_iter must be non-negative");
    if (iterate.predicate.kind == ObjectPredicate::Kind::max_area_fraction)
        (void)ObjectPredicate::max_area_fraction(iterate.predicate.value);
    else
        (void)ObjectPredicate::min_contrast(iterate.predicate.value);

    TreeSummary summary;
    auto objects = segment_region(image, nullptr, config, &summary);
    const auto image_area = static_cast<std::int64_t>(image.size());
    for (int it = 0; it < iterate.max_iter; ++it) {
        bool refined = false;
        std::vector<Candidate> next;
        for (auto& obj : objects) {
            if (!obj.refinable || satisfies(iterate.predicate, obj.stats, image_area)) {
                next.push_back(std::move(obj));
                continue;
            }
            auto subs = segment_region(image, &obj.mask, config, nullptr);
            if (subs.empty()) {
                obj.refinable = false;  // nothing finer to find inside
                next.push_back(std::move(obj));
                continue;
            }
            refined = true;
            for (auto& s : subs) {
                s.stats.iteration = it + 1;
                next.push_back(std::move(s));
            }
        }
        dedupe(next);
        objects = std::move(next);
        if (!refined) break;
    }
    return finalize(std::move(objects), image, config, summary);
}

}  // namespace lmw
