#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "lmw/image.hpp"

namespace lmw {

enum class PhantomKind { ramp_disk, step_disk, annulus_band, grains_ramp, cracks_shadow };

std::string_view to_string(PhantomKind kind) noexcept;
PhantomKind parse_phantom_kind(std::string_view name);

/// Geometry and intensity parameters. Each kind reads only the fields it needs; negative
/// centers mean "image center plus a sub-pixel offset".
struct PhantomParams {
    int maxval = 255;
    double cx = -1.0;
    double cy = -1.0;
    double radius = 30.0;       ///< disk edge radius (ramp-disk, step-disk) or grain radius
    double r1 = 10.0;           ///< annulus inner radius
    double r2 = 15.0;           ///< annulus outer radius
    double softness = 5.0;      ///< sigmoid scale of a smooth edge, pixels
    double background = 30.0;
    double peak = 220.0;        ///< disk plateau / annulus level
    int count = 9;              ///< grains, or crack branches
    double ramp_low = 30.0;     ///< illumination at the left (grains) or top-left (cracks) edge
    double ramp_high = 120.0;   ///< illumination at the opposite edge
    double contrast = 160.0;    ///< grain plateau height above the illumination at the grain center
    double gap = 16.0;          ///< minimum free space between grains (half of it to the border)
    double shadow_radius = 30.0;
    double shadow_blur = 6.0;
    double ridge_halfwidth = 2.0;
    double plateau = 228.0;     ///< darkness of a shadow's core
    double ridge_depth = 12.0;  ///< extra darkness of the ridge over the shadow core
    double segment_length = 18.0;
    double noise = 0.0;         ///< uniform integer noise amplitude
};

struct PhantomSpec {
    PhantomKind kind = PhantomKind::step_disk;
    int width = 128;
    int height = 128;
    std::uint64_t seed = 1;
    PhantomParams params;

    /// Kind-specific default parameters and canvas.
    static PhantomSpec defaults(PhantomKind kind);
};

struct Phantom {
    GrayImage image;
    LabelMap truth;
};

/// Deterministic in the spec. Random draws use std::mt19937_64 seeded with spec.seed, consumed in
/// a fixed order (geometry first, then one draw per pixel in raster order when noise > 0); a draw
/// r maps to an integer in [-a, a] as (r % (2a + 1)) - a.
/// Throws SpecError when the geometry does not fit the canvas.
Phantom make_phantom(const PhantomSpec& spec);

}  // namespace lmw
