#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lmw/bandtree.hpp"
#include "lmw/image.hpp"
#include "lmw/parallel.hpp"

namespace lmw {

struct LmwOptions {
    bool exclude_root = true;
    /// Reject bands whose neighbors all have exactly the same width (isolated minima only).
    bool strict = false;
};

/// Bands whose width is <= the width of every tree neighbor (father and sons), ascending ids.
std::vector<int> find_lmw_bands(const BandTree& tree, const LmwOptions& options = {});

/// The same selection on a bare tree: father[i] is the parent of node i (-1 for roots).
std::vector<int> find_lmw_nodes(std::span<const int> father, std::span<const Rational> width,
                                const LmwOptions& options = {});

/// Ordered single-pixel boundary curve.
struct Contour {
    int band_id = -1;
    int grade = 0;
    std::vector<Point> points;
    /// The points form one cycle in which consecutive points are 8-neighbors and every point
    /// has exactly two 8-neighbors in the set. False for degenerate bands with no interior.
    bool closed = false;
};

/// Shrinks a band to single-pixel curves by homotopic thinning, one contour per connected
/// thinned curve. Virtual bands yield the outer boundary ring of the band they bridge to.
std::vector<Contour> shrink_band(const BandTree& tree, int band_id);

/// Row-major binary mask over a sub-rectangle of the image.
struct LocalMask {
    int x0 = 0;
    int y0 = 0;
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> cells;

    std::int64_t area() const;
    bool test(int x, int y) const {
        const int lx = x - x0, ly = y - y0;
        return lx >= 0 && ly >= 0 && lx < width && ly < height &&
               cells[static_cast<std::size_t>(ly) * static_cast<std::size_t>(width) + static_cast<std::size_t>(lx)];
    }
};

/// Contour pixels plus every pixel that cannot reach the outside of the image through
/// 4-connected steps without crossing the contour. Works for open contours too.
LocalMask fill_points(const std::vector<Point>& points);

/// Full-image mask (1 on and inside the contour). Throws SpecError for open contours or points
/// outside the image.
LabelMap fill_contour(const Contour& contour, int width, int height);

namespace detail {

/// (8,4) simple-point test on a 3x3 neighborhood; bit k of `neighbors` is set when the k-th
/// neighbor (E, NE, N, NW, W, SW, S, SE) is foreground.
bool is_simple(std::uint8_t neighbors) noexcept;

/// Cell states for the thinning grid.
enum : std::uint8_t { kOutside = 0, kCurve = 1, kInside = 2 };

/// Deletes simple curve cells, alternating between layers facing kOutside and kInside, scanning
/// each layer in row-major order, until a full round deletes nothing. Cells on the grid's edge
/// must not be curve cells.
void thin_grid(std::vector<std::uint8_t>& cells, int width, int height);

}  // namespace detail

}  // namespace lmw
