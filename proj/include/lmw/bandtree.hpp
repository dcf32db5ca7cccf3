#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lmw/grademap.hpp"
#include "lmw/parallel.hpp"
#include "lmw/rational.hpp"

namespace lmw {

/// Pixel connectivity used for band components. The enclosure flood fill uses the dual
/// connectivity.
enum class Connectivity { four = 4, eight = 8 };

/// Horizontal pixel run [x0, x1] on row y.
struct Run {
    int y = 0;
    int x0 = 0;
    int x1 = 0;
    friend bool operator==(const Run&, const Run&) = default;
};

struct BoundingBox {
    int x0 = 0, y0 = 0, x1 = -1, y1 = -1;  // inclusive
    int width() const { return x1 - x0 + 1; }
    int height() const { return y1 - y0 + 1; }
};

/// A connected same-grade region of the grade map, or a zero-width virtual band spliced between
/// a father and a son whose grades differ by more than one.
struct Band {
    int id = 0;
    int grade = 0;
    std::vector<Run> runs;              ///< empty for virtual bands
    std::int64_t n_b = 0;               ///< pixel count
    std::int64_t n_e = 0;               ///< edge pixels, counted once per role (outer, inner)
    std::int64_t outer_edge = 0;        ///< pixels 4-adjacent to the exterior or the domain border
    std::int64_t inner_edge = 0;        ///< pixels adjacent (dual connectivity) to an enclosed hole
    Rational width;                     ///< 2 * n_b / n_e, zero for virtual bands
    std::optional<int> father;          ///< none for the root
    std::vector<int> sons;              ///< ascending ids
    bool is_virtual = false;
    int edge_of = -1;                   ///< virtual bands: the real band whose outer boundary is the ideal edge
    BoundingBox bbox;                   ///< of the band (of edge_of for virtual bands)
    std::int64_t filled_area = 0;       ///< band plus enclosed holes
    bool touches_border = false;        ///< a pixel is 4-adjacent to the image or domain border
};

/// Band, its enclosed holes and its exterior on a local grid covering the bounding box plus a
/// one-pixel margin. Cells outside the image or the domain are exterior.
struct FilledRegion {
    enum Cell : std::uint8_t { exterior = 0, band = 1, hole = 2 };

    int x0 = 0;  ///< image column of local column 0 (may be -1)
    int y0 = 0;
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> cells;

    std::uint8_t at(int lx, int ly) const {
        return cells[static_cast<std::size_t>(ly) * static_cast<std::size_t>(width) + static_cast<std::size_t>(lx)];
    }
};

/// Enclosure tree over the bands of a grade map.
class BandTree {
public:
    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    Connectivity connectivity() const noexcept { return connectivity_; }
    int root() const noexcept { return root_; }
    const std::vector<Band>& bands() const noexcept { return bands_; }
    const Band& band(int id) const { return bands_.at(static_cast<std::size_t>(id)); }
    std::size_t size() const noexcept { return bands_.size(); }
    std::size_t real_band_count() const noexcept { return real_count_; }

    /// Band id per pixel, -1 outside the domain. Only real bands own pixels.
    const std::vector<std::int32_t>& pixel_owner() const noexcept { return owner_; }
    std::int32_t owner(int x, int y) const {
        return owner_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)];
    }

    /// Filled region of a real band: the band plus every pixel that cannot reach the image or
    /// domain border without crossing it.
    FilledRegion filled_region(int band_id) const;

private:
    friend BandTree build_band_tree(const GradeMap&, Connectivity, Exec);

    int width_ = 0;
    int height_ = 0;
    Connectivity connectivity_ = Connectivity::four;
    int root_ = -1;
    std::size_t real_count_ = 0;
    std::vector<Band> bands_;
    std::vector<std::int32_t> owner_;
};

/// Builds the band tree:
///  - bands are connected components of equal grade;
///  - the root is the band holding the lowest-grade border pixel (ties: smallest pixel index);
///  - a band's father is the band of a different grade with the smallest filled region that
///    strictly encloses every pixel of it (the root when there is none);
///  - grade jumps larger than one between father and son are bridged by zero-width virtual bands.
BandTree build_band_tree(const GradeMap& grade_map, Connectivity connectivity = Connectivity::four,
                         Exec exec = Exec::parallel);

/// 2 * n_b / n_e. Zero when n_b is zero. Throws std::logic_error for n_b > 0 with n_e == 0.
Rational band_width(std::int64_t n_b, std::int64_t n_e);

}  // namespace lmw
