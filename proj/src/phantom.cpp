#include "lmw/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace lmw {
namespace {

struct Vec2 {
    double x, y;
};

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

Vec2 center_of(const PhantomSpec& s) {
    return {s.params.cx >= 0 ? s.params.cx : s.width / 2.0 + 0.3, s.params.cy >= 0 ? s.params.cy : s.height / 2.0 + 0.2};
}

void require_inside(const PhantomSpec& s, Vec2 c, double r) {
    if (c.x - r < 0 || c.y - r < 0 || c.x + r > s.width - 1 || c.y + r > s.height - 1)
        throw SpecError("phantom geometry does not fit the canvas");
}

std::uint16_t to_pixel(double v, int maxval) {
    return static_cast<std::uint16_t>(std::clamp(std::lround(v), 0L, static_cast<long>(maxval)));
}

// Fills image (and truth) from per-pixel intensity / label functions.
template <typename Intensity, typename Label>
Phantom render(const PhantomSpec& s, Intensity intensity, Label label) {
    Phantom ph{GrayImage(s.width, s.height, s.params.maxval), LabelMap(s.width, s.height)};
    for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width; ++x) {
            ph.image(x, y) = to_pixel(intensity(x, y), s.params.maxval);
            ph.truth(x, y) = label(x, y);
        }
    return ph;
}

void add_noise(Phantom& ph, double amplitude, std::mt19937_64& rng) {
    const auto a = static_cast<std::uint64_t>(std::llround(amplitude));
    if (a == 0) return;
    for (auto& v : ph.image.pixels()) {
        const auto r = static_cast<std::int64_t>(rng() % (2 * a + 1)) - static_cast<std::int64_t>(a);
        v = static_cast<std::uint16_t>(std::clamp<std::int64_t>(v + r, 0, ph.image.maxval()));
    }
}

Phantom disk(const PhantomSpec& s, bool smooth) {
    const auto& p = s.params;
    if (p.radius <= 0) throw SpecError("radius must be positive");
    if (smooth && p.softness <= 0) throw SpecError("softness must be positive");
    const Vec2 c = center_of(s);
    require_inside(s, c, p.radius + 1.0);
    auto dist = [c](int x, int y) { return std::hypot(x - c.x, y - c.y); };
    return render(
        s,
        [&](int x, int y) {
            const double d = dist(x, y);
            if (!smooth) return d <= p.radius ? p.peak : p.background;
            return p.background + (p.peak - p.background) * sigmoid((p.radius - d) / p.softness);
        },
        [&](int x, int y) { return dist(x, y) <= p.radius ? 1u : 0u; });
}

Phantom annulus(const PhantomSpec& s) {
    const auto& p = s.params;
    if (p.r1 <= 0 || p.r2 <= p.r1) throw SpecError("annulus needs 0 < r1 < r2");
    const Vec2 c = center_of(s);
    require_inside(s, c, p.r2 + 1.0);
    auto in_ring = [&](int x, int y) {
        const double d = std::hypot(x - c.x, y - c.y);
        return d >= p.r1 && d < p.r2;
    };
    return render(
        s, [&](int x, int y) { return in_ring(x, y) ? p.peak : p.background; },
        [&](int x, int y) { return in_ring(x, y) ? 1u : 0u; });
}

Phantom grains(const PhantomSpec& s, std::mt19937_64& rng) {
    const auto& p = s.params;
    if (p.radius <= 0 || p.softness <= 0) throw SpecError("grain radius and softness must be positive");
    if (p.count < 1) throw SpecError("grain count must be at least 1");
    // One grain per cell of a near-square grid, jittered inside its cell.
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p.count))));
    const int rows = (p.count + cols - 1) / cols;
    const double cw = static_cast<double>(s.width) / cols, ch = static_cast<double>(s.height) / rows;
    const double jx = cw / 2 - p.radius - p.gap / 2, jy = ch / 2 - p.radius - p.gap / 2;
    if (jx < 0 || jy < 0) throw SpecError("grains do not fit the canvas");
    std::vector<Vec2> centers;
    for (int k = 0; k < p.count; ++k) {
        const double ux = 2 * uniform01(rng) - 1, uy = 2 * uniform01(rng) - 1;
        centers.push_back({(k % cols + 0.5) * cw + ux * jx - 0.5, (k / cols + 0.5) * ch + uy * jy - 0.5});
    }
    const double slope = s.width > 1 ? (p.ramp_high - p.ramp_low) / (s.width - 1) : 0.0;
    return render(
        s,
        [&](int x, int y) {
            // Each grain is a plateau `contrast` above the illumination at its center.
            const double bg = p.ramp_low + slope * x;
            double v = bg;
            for (const auto& c : centers) {
                const double top = p.ramp_low + slope * c.x + p.contrast;
                v += sigmoid((p.radius - std::hypot(x - c.x, y - c.y)) / p.softness) * (top - bg);
            }
            return v;
        },
        [&](int x, int y) {
            for (std::size_t k = 0; k < centers.size(); ++k)
                if (std::hypot(x - centers[k].x, y - centers[k].y) <= p.radius) return static_cast<std::uint32_t>(k + 1);
            return 0u;
        });
}

Phantom cracks(const PhantomSpec& s, std::mt19937_64& rng) {
    const auto& p = s.params;
    if (p.shadow_radius <= 0 || p.shadow_blur <= 0 || p.ridge_halfwidth <= 0 || p.segment_length <= 0)
        throw SpecError("crack dimensions must be positive");
    if (p.count < 1) throw SpecError("crack needs at least one branch");
    if (p.plateau + p.ridge_depth > p.maxval) throw SpecError("crack darkness exceeds maxval");
    const double margin = p.shadow_radius + 2 * p.shadow_blur;
    auto inside = [&](Vec2 v) { return v.x >= margin && v.y >= margin && v.x <= s.width - 1 - margin && v.y <= s.height - 1 - margin; };

    std::vector<std::pair<Vec2, Vec2>> segments;
    std::vector<Vec2> main{{margin, s.height / 2.0 + (uniform01(rng) - 0.5) * s.height / 4.0}};
    if (!inside(main.front())) throw SpecError("crack does not fit the canvas");
    std::vector<double> heading{(uniform01(rng) - 0.5) * 0.5};
    for (;;) {
        const double a = std::clamp(heading.back() + (uniform01(rng) - 0.5) * 0.6, -0.6, 0.6);
        const Vec2 next{main.back().x + p.segment_length * std::cos(a), main.back().y + p.segment_length * std::sin(a)};
        if (!inside(next)) break;
        segments.push_back({main.back(), next});
        main.push_back(next);
        heading.push_back(a);
    }
    if (main.size() < 3) throw SpecError("crack does not fit the canvas");
    for (int b = 1; b < p.count; ++b) {
        const auto k = 1 + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(main.size() - 2));
        const double sign = b % 2 ? 1.0 : -1.0;
        double a = heading[k] + sign * (0.8 + 0.4 * uniform01(rng));
        Vec2 at = main[k];
        for (int step = 0; step < 3; ++step) {
            const Vec2 next{at.x + p.segment_length * std::cos(a), at.y + p.segment_length * std::sin(a)};
            if (!inside(next)) break;
            segments.push_back({at, next});
            at = next;
            a += (uniform01(rng) - 0.5) * 0.4;
        }
    }

    auto distance = [&](int x, int y) {
        double d = 1e300;
        for (const auto& [a, b] : segments) d = std::min(d, segment_distance({double(x), double(y)}, a, b));
        return d;
    };
    const double denom = std::max(1, s.width + s.height - 2);
    std::vector<double> dist(static_cast<std::size_t>(s.width) * static_cast<std::size_t>(s.height));
    for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width; ++x)
            dist[static_cast<std::size_t>(y) * static_cast<std::size_t>(s.width) + static_cast<std::size_t>(x)] =
                distance(x, y);
    auto d_at = [&](int x, int y) {
        return dist[static_cast<std::size_t>(y) * static_cast<std::size_t>(s.width) + static_cast<std::size_t>(x)];
    };
    // Darkness model, rendered as maxval - darkness (dark cracks on a bright background).
    return render(
        s,
        [&](int x, int y) {
            const double d = d_at(x, y);
            const double bg = p.ramp_low + (p.ramp_high - p.ramp_low) * (x + y) / denom;
            double dark = bg + (p.plateau - bg) * normal_cdf((p.shadow_radius - d) / p.shadow_blur);
            if (d <= p.ridge_halfwidth) dark = p.plateau + p.ridge_depth;
            return p.maxval - dark;
        },
        [&](int x, int y) { return d_at(x, y) <= p.ridge_halfwidth ? 1u : 0u; });
}

}  // namespace

std::string_view to_string(PhantomKind kind) noexcept {
    switch (kind) {
        case PhantomKind::ramp_disk: return "ramp-disk";
        case PhantomKind::step_disk: return "step-disk";
        case PhantomKind::annulus_band: return "annulus-band";
        case PhantomKind::grains_ramp: return "grains-ramp";
        case PhantomKind::cracks_shadow: return "cracks-shadow";
    }
    return "unknown";
}

PhantomKind parse_phantom_kind(std::string_view name) {
    for (auto k : {PhantomKind::ramp_disk, PhantomKind::step_disk, PhantomKind::annulus_band, PhantomKind::grains_ramp,
                   PhantomKind::cracks_shadow})
        if (to_string(k) == name) return k;
    throw SpecError("unknown phantom kind: " + std::string(name));
}

PhantomSpec PhantomSpec::defaults(PhantomKind kind) {
    PhantomSpec s;
    s.kind = kind;
    auto& p = s.params;
    switch (kind) {
        case PhantomKind::ramp_disk:
            s.width = s.height = 160;
            p.radius = 40;
            p.softness = 6;
            p.peak = 225;
            break;
        case PhantomKind::step_disk:
            s.width = s.height = 128;
            p.radius = 30;
            break;
        case PhantomKind::annulus_band:
            s.width = s.height = 96;
            p.peak = 200;
            break;
        case PhantomKind::grains_ramp:
            s.width = s.height = 480;
            p.radius = 44;
            p.softness = 5;
            break;
        case PhantomKind::cracks_shadow:
            s.width = s.height = 192;
            p.count = 2;
            p.ramp_low = 10;
            p.ramp_high = 50;
            break;
    }
    return s;
}

Phantom make_phantom(const PhantomSpec& spec) {
    if (spec.width < 1 || spec.height < 1) throw SpecError("phantom canvas must be non-empty");
    if (spec.params.maxval < 1 || spec.params.maxval > 65535) throw SpecError("maxval must lie in [1, 65535]");
    if (spec.params.noise < 0) throw SpecError("noise amplitude must be non-negative");
    std::mt19937_64 rng(spec.seed);
    Phantom ph;
    switch (spec.kind) {
        case PhantomKind::ramp_disk: ph = disk(spec, true); break;
        case PhantomKind::step_disk: ph = disk(spec, false); break;
        case PhantomKind::annulus_band: ph = annulus(spec); break;
        case PhantomKind::grains_ramp: ph = grains(spec, rng); break;
        case PhantomKind::cracks_shadow: ph = cracks(spec, rng); break;
    }
    add_noise(ph, spec.params.noise, rng);
    return ph;
}

}  // namespace lmw
