#include "lmw/lmw.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace lmw {
namespace {

// Neighbor k in the order E, NE, N, NW, W, SW, S, SE.
constexpr int kNx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kNy[8] = {0, -1, -1, -1, 0, 1, 1, 1};

std::array<bool, 256> make_simple_table() {
    std::array<bool, 256> table{};
    for (int m = 0; m < 256; ++m) {
        auto fg = [&](int k) { return (m >> k) & 1; };
        auto adjacent8 = [](int a, int b) {
            return std::max(std::abs(kNx[a] - kNx[b]), std::abs(kNy[a] - kNy[b])) == 1;
        };
        auto adjacent4 = [](int a, int b) { return std::abs(kNx[a] - kNx[b]) + std::abs(kNy[a] - kNy[b]) == 1; };
        // Small flood fills over the eight ring positions.
        auto components = [&](bool want_fg, auto adjacent, bool need_4_neighbor) {
            int seen = 0, count = 0;
            for (int s = 0; s < 8; ++s) {
                if (fg(s) != want_fg || ((seen >> s) & 1)) continue;
                int stack[8], top = 0;
                stack[top++] = s;
                seen |= 1 << s;
                bool touches = false;
                while (top) {
                    int c = stack[--top];
                    if (c % 2 == 0) touches = true;
                    for (int t = 0; t < 8; ++t) {
                        if (fg(t) != want_fg || ((seen >> t) & 1) || !adjacent(c, t)) continue;
                        seen |= 1 << t;
                        stack[top++] = t;
                    }
                }
                if (!need_4_neighbor || touches) ++count;
            }
            return count;
        };
        const int t8 = components(true, adjacent8, false);
        const int t4bar = components(false, adjacent4, true);
        table[static_cast<std::size_t>(m)] = t8 == 1 && t4bar == 1;
    }
    return table;
}

struct Grid {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> cells;

    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
    }
    std::uint8_t at(int x, int y) const { return cells[idx(x, y)]; }
};

std::uint8_t neighbor_bits(const std::vector<std::uint8_t>& cells, int width, std::size_t i, std::uint8_t value) {
    const int x = static_cast<int>(i % static_cast<std::size_t>(width));
    const int y = static_cast<int>(i / static_cast<std::size_t>(width));
    std::uint8_t bits = 0;
    for (int k = 0; k < 8; ++k) {
        const auto j = static_cast<std::size_t>(y + kNy[k]) * static_cast<std::size_t>(width) +
                       static_cast<std::size_t>(x + kNx[k]);
        if (cells[j] == value) bits = static_cast<std::uint8_t>(bits | (1u << k));
    }
    return bits;
}

// Marks cells not 4-reachable from the grid edge through non-curve cells as inside; the rest
// of the non-curve cells become outside.
void classify_sides(Grid& g) {
    std::vector<std::int32_t> stack;
    std::vector<std::uint8_t> reached(g.cells.size(), 0);
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x)
            if ((x == 0 || y == 0 || x == g.width - 1 || y == g.height - 1) && g.at(x, y) != detail::kCurve) {
                reached[g.idx(x, y)] = 1;
                stack.push_back(static_cast<std::int32_t>(g.idx(x, y)));
            }
    while (!stack.empty()) {
        const auto i = stack.back();
        stack.pop_back();
        const int x = i % g.width, y = i / g.width;
        for (int k = 0; k < 8; k += 2) {
            const int nx = x + kNx[k], ny = y + kNy[k];
            if (nx < 0 || ny < 0 || nx >= g.width || ny >= g.height) continue;
            const auto j = g.idx(nx, ny);
            if (reached[j] || g.cells[j] == detail::kCurve) continue;
            reached[j] = 1;
            stack.push_back(static_cast<std::int32_t>(j));
        }
    }
    for (std::size_t i = 0; i < g.cells.size(); ++i)
        if (g.cells[i] != detail::kCurve) g.cells[i] = reached[i] ? detail::kOutside : detail::kInside;
}

bool touches_value4(const Grid& g, int x, int y, std::uint8_t value) {
    for (int k = 0; k < 8; k += 2) {
        const int nx = x + kNx[k], ny = y + kNy[k];
        if (nx >= 0 && ny >= 0 && nx < g.width && ny < g.height && g.at(nx, ny) == value) return true;
    }
    return false;
}

// Walks a set of curve cells as a cycle. Succeeds only when every cell has exactly two
// 8-neighbors in the set and the walk visits all of them.
bool order_cycle(const Grid& g, std::vector<Point>& local) {
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < g.cells.size(); ++i)
        if (g.cells[i] == detail::kCurve) ids.push_back(i);
    local.clear();
    auto to_point = [&](std::size_t i) {
        return Point{static_cast<int>(i % static_cast<std::size_t>(g.width)),
                     static_cast<int>(i / static_cast<std::size_t>(g.width))};
    };
    auto row_major = [&] {
        local.clear();
        for (auto i : ids) local.push_back(to_point(i));
        return false;
    };
    if (ids.size() < 4) return row_major();
    for (auto i : ids)
        if (std::popcount(neighbor_bits(g.cells, g.width, i, detail::kCurve)) != 2) return row_major();

    std::vector<std::uint8_t> visited(g.cells.size(), 0);
    std::size_t cur = ids.front();
    // Walk order: E, SE, S, SW, W, NW, N, NE gives a deterministic direction.
    constexpr int walk[8] = {0, 7, 6, 5, 4, 3, 2, 1};
    for (;;) {
        visited[cur] = 1;
        local.push_back(to_point(cur));
        const Point p = to_point(cur);
        std::size_t next = cur;
        for (int k : walk) {
            const auto j = g.idx(p.x + kNx[k], p.y + kNy[k]);
            if (g.cells[j] == detail::kCurve && !visited[j]) {
                next = j;
                break;
            }
        }
        if (next == cur) break;
        cur = next;
    }
    if (local.size() != ids.size()) return row_major();
    const Point a = local.front(), b = local.back();
    if (std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)) != 1) return row_major();
    return true;
}

Contour make_contour(const Grid& g, int x0, int y0, int band_id, int grade) {
    Contour c;
    c.band_id = band_id;
    c.grade = grade;
    c.closed = order_cycle(g, c.points);
    for (auto& p : c.points) {
        p.x += x0;
        p.y += y0;
    }
    return c;
}

}  // namespace

namespace detail {

bool is_simple(std::uint8_t neighbors) noexcept {
    static const std::array<bool, 256> table = make_simple_table();
    return table[neighbors];
}

void thin_grid(std::vector<std::uint8_t>& cells, int width, int height) {
    std::vector<std::size_t> candidates;
    for (;;) {
        bool changed = false;
        for (std::uint8_t side : {kOutside, kInside}) {
            candidates.clear();
            for (int y = 1; y < height - 1; ++y) {
                for (int x = 1; x < width - 1; ++x) {
                    const auto i = static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                                   static_cast<std::size_t>(x);
                    if (cells[i] != kCurve) continue;
                    if (cells[i + 1] == side || cells[i - 1] == side ||
                        cells[i + static_cast<std::size_t>(width)] == side ||
                        cells[i - static_cast<std::size_t>(width)] == side)
                        candidates.push_back(i);
                }
            }
            for (auto i : candidates) {
                if (is_simple(neighbor_bits(cells, width, i, kCurve))) {
                    cells[i] = side;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }
}

}  // namespace detail

std::vector<int> find_lmw_nodes(std::span<const int> father, std::span<const Rational> width,
                                const LmwOptions& options) {
    if (father.size() != width.size()) throw std::invalid_argument("father and width sizes differ");
    const std::size_t n = father.size();
    std::vector<char> le_all(n, 1), lt_any(n, 0);
    auto compare = [&](std::size_t a, std::size_t b) {
        if (width[a] > width[b]) le_all[a] = 0;
        if (width[a] < width[b]) lt_any[a] = 1;
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (father[i] < 0) continue;
        const auto f = static_cast<std::size_t>(father[i]);
        if (f >= n) throw std::invalid_argument("father index out of range");
        compare(i, f);
        compare(f, i);
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (options.exclude_root && father[i] < 0) continue;
        if (le_all[i] && (!options.strict || lt_any[i])) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<int> find_lmw_bands(const BandTree& tree, const LmwOptions& options) {
    std::vector<int> father(tree.size(), -1);
    std::vector<Rational> width(tree.size());
    for (const Band& b : tree.bands()) {
        father[static_cast<std::size_t>(b.id)] = b.father ? *b.father : -1;
        width[static_cast<std::size_t>(b.id)] = b.width;
    }
    return find_lmw_nodes(father, width, options);
}

std::vector<Contour> shrink_band(const BandTree& tree, int band_id) {
    const Band& b = tree.band(band_id);
    const int source = b.is_virtual ? b.edge_of : band_id;
    const FilledRegion fr = tree.filled_region(source);

    Grid g{fr.width, fr.height, std::vector<std::uint8_t>(fr.cells.size(), detail::kOutside)};
    const bool has_hole = std::find(fr.cells.begin(), fr.cells.end(), FilledRegion::hole) != fr.cells.end();
    if (!b.is_virtual && has_hole) {
        for (std::size_t i = 0; i < fr.cells.size(); ++i) {
            if (fr.cells[i] == FilledRegion::band) g.cells[i] = detail::kCurve;
            if (fr.cells[i] == FilledRegion::hole) g.cells[i] = detail::kInside;
        }
    } else {
        // Leaf or ideal edge: start from the outer boundary ring of the filled region.
        bool any_inside = false;
        for (int y = 1; y < fr.height - 1; ++y) {
            for (int x = 1; x < fr.width - 1; ++x) {
                if (fr.at(x, y) == FilledRegion::exterior) continue;
                bool ring = false;
                for (int k = 0; k < 8 && !ring; k += 2) ring = fr.at(x + kNx[k], y + kNy[k]) == FilledRegion::exterior;
                g.cells[g.idx(x, y)] = ring ? detail::kCurve : detail::kInside;
                any_inside |= !ring;
            }
        }
        if (!any_inside) {
            // No interior to enclose: the region itself is the (open) contour.
            return {make_contour(g, fr.x0, fr.y0, band_id, b.grade)};
        }
    }
    detail::thin_grid(g.cells, g.width, g.height);

    // One contour per 8-connected thinned curve.
    std::vector<Contour> out;
    std::vector<std::int32_t> comp(g.cells.size(), -1);
    std::vector<std::int32_t> stack;
    int ncomp = 0;
    for (std::size_t s = 0; s < g.cells.size(); ++s) {
        if (g.cells[s] != detail::kCurve || comp[s] >= 0) continue;
        Grid sub{g.width, g.height, std::vector<std::uint8_t>(g.cells.size(), detail::kOutside)};
        comp[s] = ncomp;
        stack.push_back(static_cast<std::int32_t>(s));
        while (!stack.empty()) {
            const auto i = static_cast<std::size_t>(stack.back());
            stack.pop_back();
            sub.cells[i] = detail::kCurve;
            const int x = static_cast<int>(i % static_cast<std::size_t>(g.width));
            const int y = static_cast<int>(i / static_cast<std::size_t>(g.width));
            for (int k = 0; k < 8; ++k) {
                const auto j = g.idx(x + kNx[k], y + kNy[k]);
                if (g.cells[j] == detail::kCurve && comp[j] < 0) {
                    comp[j] = ncomp;
                    stack.push_back(static_cast<std::int32_t>(j));
                }
            }
        }
        ++ncomp;
        // Keep only the outer boundary of the curve's filled region, then thin it again so
        // junction pixels of multi-hole bands do not survive.
        classify_sides(sub);
        bool trimmed = false;
        for (int y = 1; y < sub.height - 1; ++y)
            for (int x = 1; x < sub.width - 1; ++x)
                if (sub.at(x, y) == detail::kCurve && !touches_value4(sub, x, y, detail::kOutside)) {
                    sub.cells[sub.idx(x, y)] = detail::kInside;
                    trimmed = true;
                }
        if (trimmed) detail::thin_grid(sub.cells, sub.width, sub.height);
        out.push_back(make_contour(sub, fr.x0, fr.y0, band_id, b.grade));
    }
    return out;
}

std::int64_t LocalMask::area() const {
    return std::count(cells.begin(), cells.end(), std::uint8_t{1});
}

LocalMask fill_points(const std::vector<Point>& points) {
    LocalMask m;
    if (points.empty()) return m;
    int x0 = points.front().x, x1 = x0, y0 = points.front().y, y1 = y0;
    for (const auto& p : points) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    Grid g{x1 - x0 + 3, y1 - y0 + 3, {}};
    g.cells.assign(static_cast<std::size_t>(g.width) * static_cast<std::size_t>(g.height), detail::kOutside);
    for (const auto& p : points) g.cells[g.idx(p.x - x0 + 1, p.y - y0 + 1)] = detail::kCurve;
    classify_sides(g);
    m.x0 = x0;
    m.y0 = y0;
    m.width = x1 - x0 + 1;
    m.height = y1 - y0 + 1;
    m.cells.assign(static_cast<std::size_t>(m.width) * static_cast<std::size_t>(m.height), 0);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            m.cells[static_cast<std::size_t>(y) * static_cast<std::size_t>(m.width) + static_cast<std::size_t>(x)] =
                g.at(x + 1, y + 1) != detail::kOutside;
    return m;
}

LabelMap fill_contour(const Contour& contour, int width, int height) {
    if (!contour.closed) throw SpecError("cannot fill an open contour");
    for (const auto& p : contour.points)
        if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) throw SpecError("contour point outside image");
    LabelMap out(width, height);
    const LocalMask m = fill_points(contour.points);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            if (m.test(m.x0 + x, m.y0 + y)) out(m.x0 + x, m.y0 + y) = 1;
    return out;
}

}  // namespace lmw
