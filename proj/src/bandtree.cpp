#include "lmw/bandtree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace lmw {
namespace {

constexpr int kDx4[4] = {1, -1, 0, 0};
constexpr int kDy4[4] = {0, 0, 1, -1};
constexpr int kDx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};

int dual_neighbors(Connectivity c) { return c == Connectivity::four ? 8 : 4; }

std::int32_t find_root(std::vector<std::int32_t>& parent, std::int32_t i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
        auto& p = parent[static_cast<std::size_t>(i)];
        p = parent[static_cast<std::size_t>(p)];
        i = p;
    }
    return i;
}

void unite(std::vector<std::int32_t>& parent, std::int32_t a, std::int32_t b) {
    a = find_root(parent, a);
    b = find_root(parent, b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[static_cast<std::size_t>(a)] = b;  // smallest pixel index stays the representative
}

// Two-pass union-find labeling; ids follow the raster order of each component's first pixel.
std::vector<std::int32_t> label_components(const GradeMap& gm, Connectivity conn, std::int32_t& count) {
    const int w = gm.width, h = gm.height;
    const std::size_t n = gm.grades.size();
    std::vector<std::int32_t> parent(n, -1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto i = static_cast<std::int32_t>(static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
                                                     static_cast<std::size_t>(x));
            const auto g = gm.grades[static_cast<std::size_t>(i)];
            if (g == kOutsideDomain) continue;
            parent[static_cast<std::size_t>(i)] = i;
            auto same = [&](int nx, int ny) {
                return nx >= 0 && ny >= 0 && nx < w && gm.at(nx, ny) == g;
            };
            if (same(x - 1, y)) unite(parent, i, i - 1);
            if (same(x, y - 1)) unite(parent, i, i - w);
            if (conn == Connectivity::eight) {
                if (same(x - 1, y - 1)) unite(parent, i, i - w - 1);
                if (same(x + 1, y - 1)) unite(parent, i, i - w + 1);
            }
        }
    }
    std::vector<std::int32_t> owner(n, -1);
    std::vector<std::int32_t> id_of(n, -1);
    count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (parent[i] < 0) continue;
        const auto r = static_cast<std::size_t>(find_root(parent, static_cast<std::int32_t>(i)));
        if (id_of[r] < 0) id_of[r] = count++;
        owner[i] = id_of[r];
    }
    return owner;
}

struct BandScan {
    std::int64_t outer = 0;
    std::int64_t inner = 0;
    std::int64_t filled = 0;
    bool touches_border = false;
    std::vector<std::int32_t> holes;  // ids of bands lying in enclosed holes, ascending
};

}  // namespace

Rational band_width(std::int64_t n_b, std::int64_t n_e) {
    if (n_b == 0) return Rational(0, 1);
    if (n_e <= 0) throw std::logic_error("band with pixels but no edge pixels");
    return Rational(2 * n_b, n_e);
}

FilledRegion BandTree::filled_region(int band_id) const {
    const Band& b = band(band_id);
    if (b.is_virtual) throw std::invalid_argument("virtual bands have no filled region of their own");
    FilledRegion fr;
    fr.x0 = b.bbox.x0 - 1;
    fr.y0 = b.bbox.y0 - 1;
    fr.width = b.bbox.width() + 2;
    fr.height = b.bbox.height() + 2;
    constexpr std::uint8_t unvisited = 3;
    fr.cells.assign(static_cast<std::size_t>(fr.width) * static_cast<std::size_t>(fr.height), unvisited);

    std::vector<std::int32_t> stack;
    auto lidx = [&](int lx, int ly) {
        return static_cast<std::size_t>(ly) * static_cast<std::size_t>(fr.width) + static_cast<std::size_t>(lx);
    };
    for (int ly = 0; ly < fr.height; ++ly) {
        for (int lx = 0; lx < fr.width; ++lx) {
            const int ix = fr.x0 + lx, iy = fr.y0 + ly;
            const bool inside = ix >= 0 && iy >= 0 && ix < width_ && iy < height_;
            const std::int32_t o = inside ? owner(ix, iy) : -1;
            auto& c = fr.cells[lidx(lx, ly)];
            if (o == band_id) {
                c = FilledRegion::band;
            } else if (o < 0 || lx == 0 || ly == 0 || lx == fr.width - 1 || ly == fr.height - 1) {
                c = FilledRegion::exterior;
                stack.push_back(static_cast<std::int32_t>(lidx(lx, ly)));
            }
        }
    }
    const int nn = dual_neighbors(connectivity_);
    while (!stack.empty()) {
        const auto i = stack.back();
        stack.pop_back();
        const int lx = i % fr.width, ly = i / fr.width;
        for (int k = 0; k < nn; ++k) {
            const int nx = lx + kDx8[k], ny = ly + kDy8[k];
            if (nx < 0 || ny < 0 || nx >= fr.width || ny >= fr.height) continue;
            auto& c = fr.cells[lidx(nx, ny)];
            if (c == unvisited) {
                c = FilledRegion::exterior;
                stack.push_back(static_cast<std::int32_t>(lidx(nx, ny)));
            }
        }
    }
    for (auto& c : fr.cells)
        if (c == unvisited) c = FilledRegion::hole;
    return fr;
}

namespace {

// Enclosed bands are those with every pixel inside a hole.
BandScan scan_band(const BandTree& tree, int id, std::vector<std::int32_t>& stamp, std::vector<std::int64_t>& inside) {
    BandScan s;
    const FilledRegion fr = tree.filled_region(id);
    const int nn_inner = dual_neighbors(tree.connectivity());
    for (int ly = 1; ly < fr.height - 1; ++ly) {
        for (int lx = 1; lx < fr.width - 1; ++lx) {
            const auto c = fr.at(lx, ly);
            if (c == FilledRegion::hole) {
                ++s.filled;
                const auto o = tree.owner(fr.x0 + lx, fr.y0 + ly);
                if (o < 0) continue;
                if (stamp[static_cast<std::size_t>(o)] != id) {
                    stamp[static_cast<std::size_t>(o)] = id;
                    inside[static_cast<std::size_t>(o)] = 0;
                    s.holes.push_back(o);
                }
                ++inside[static_cast<std::size_t>(o)];
                continue;
            }
            if (c != FilledRegion::band) continue;
            ++s.filled;
            bool outer = false, inner = false;
            for (int k = 0; k < 4; ++k) {
                const int nx = lx + kDx4[k], ny = ly + kDy4[k];
                if (fr.at(nx, ny) == FilledRegion::exterior) outer = true;
                const int ix = fr.x0 + nx, iy = fr.y0 + ny;
                if (ix < 0 || iy < 0 || ix >= tree.width() || iy >= tree.height() || tree.owner(ix, iy) < 0)
                    s.touches_border = true;
            }
            for (int k = 0; k < nn_inner && !inner; ++k)
                if (fr.at(lx + kDx8[k], ly + kDy8[k]) == FilledRegion::hole) inner = true;
            s.outer += outer;
            s.inner += inner;
        }
    }
    std::erase_if(s.holes, [&](std::int32_t o) {
        return inside[static_cast<std::size_t>(o)] != tree.band(o).n_b;
    });
    std::sort(s.holes.begin(), s.holes.end());
    return s;
}

}  // namespace

BandTree build_band_tree(const GradeMap& gm, Connectivity connectivity, Exec exec) {
    if (gm.width < 1 || gm.height < 1 || gm.grades.size() != static_cast<std::size_t>(gm.width) * gm.height)
        throw SpecError("grade map dimensions are inconsistent");
    BandTree tree;
    tree.width_ = gm.width;
    tree.height_ = gm.height;
    tree.connectivity_ = connectivity;

    std::int32_t count = 0;
    tree.owner_ = label_components(gm, connectivity, count);
    auto& bands = tree.bands_;
    bands.resize(static_cast<std::size_t>(count));
    for (std::int32_t i = 0; i < count; ++i) {
        bands[static_cast<std::size_t>(i)].id = i;
        bands[static_cast<std::size_t>(i)].bbox = {gm.width, gm.height, -1, -1};
    }
    for (int y = 0; y < gm.height; ++y) {
        int x = 0;
        while (x < gm.width) {
            const auto o = tree.owner(x, y);
            int x1 = x;
            while (x1 + 1 < gm.width && tree.owner(x1 + 1, y) == o) ++x1;
            if (o >= 0) {
                Band& b = bands[static_cast<std::size_t>(o)];
                if (b.runs.empty()) b.grade = gm.at(x, y);
                b.runs.push_back({y, x, x1});
                b.n_b += x1 - x + 1;
                b.bbox.x0 = std::min(b.bbox.x0, x);
                b.bbox.x1 = std::max(b.bbox.x1, x1);
                b.bbox.y0 = std::min(b.bbox.y0, y);
                b.bbox.y1 = std::max(b.bbox.y1, y);
            }
            x = x1 + 1;
        }
    }
    tree.real_count_ = bands.size();
    if (bands.empty()) return tree;

    // Root: lowest grade among pixels on the domain border, ties by raster index.
    {
        int best_grade = 1 << 30;
        for (int y = 0; y < gm.height; ++y) {
            for (int x = 0; x < gm.width; ++x) {
                const auto o = tree.owner(x, y);
                if (o < 0) continue;
                bool border = x == 0 || y == 0 || x == gm.width - 1 || y == gm.height - 1;
                if (!border) {
                    border = tree.owner(x - 1, y) < 0 || tree.owner(x + 1, y) < 0 || tree.owner(x, y - 1) < 0 ||
                             tree.owner(x, y + 1) < 0;
                }
                if (border && gm.at(x, y) < best_grade) {
                    best_grade = gm.at(x, y);
                    tree.root_ = o;
                }
            }
        }
    }

    std::vector<BandScan> scans(bands.size());
    const auto n_real = static_cast<std::int64_t>(bands.size());
    if (exec == Exec::serial) {
        std::vector<std::int32_t> stamp(bands.size(), -1);
        std::vector<std::int64_t> inside(bands.size(), 0);
        for (std::int64_t i = 0; i < n_real; ++i)
            scans[static_cast<std::size_t>(i)] = scan_band(tree, static_cast<int>(i), stamp, inside);
    } else {
#pragma omp parallel
        {
            std::vector<std::int32_t> stamp(bands.size(), -1);
            std::vector<std::int64_t> inside(bands.size(), 0);
#pragma omp for schedule(dynamic, 16)
            for (std::int64_t i = 0; i < n_real; ++i)
                scans[static_cast<std::size_t>(i)] = scan_band(tree, static_cast<int>(i), stamp, inside);
        }
    }
    for (std::size_t i = 0; i < bands.size(); ++i) {
        Band& b = bands[i];
        b.outer_edge = scans[i].outer;
        b.inner_edge = scans[i].inner;
        b.n_e = b.outer_edge + b.inner_edge;
        b.filled_area = scans[i].filled;
        b.touches_border = scans[i].touches_border;
        b.width = band_width(b.n_b, b.n_e);
    }

    // Innermost strict encloser of a different grade: enclosers visited from largest to smallest
    // filled area, so the smallest one writes last.
    std::vector<std::int32_t> order(bands.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        return bands[static_cast<std::size_t>(a)].filled_area > bands[static_cast<std::size_t>(b)].filled_area;
    });
    std::vector<std::int32_t> father(bands.size(), -1);
    for (auto c : order)
        for (auto d : scans[static_cast<std::size_t>(c)].holes)
            if (bands[static_cast<std::size_t>(d)].grade != bands[static_cast<std::size_t>(c)].grade)
                father[static_cast<std::size_t>(d)] = c;
    for (std::size_t i = 0; i < bands.size(); ++i) {
        if (static_cast<int>(i) == tree.root_) continue;
        bands[i].father = father[i] >= 0 ? father[i] : tree.root_;
    }

    // Zero-width virtual bands bridge grade jumps larger than one.
    for (std::size_t s = 0; s < tree.real_count_; ++s) {
        if (!bands[s].father) continue;
        const int f = *bands[s].father;
        const int gf = bands[static_cast<std::size_t>(f)].grade;
        const int gs = bands[s].grade;
        const int k = std::abs(gs - gf);
        if (k <= 1) continue;
        const int dir = gs > gf ? 1 : -1;
        int prev = f;
        for (int j = 1; j < k; ++j) {
            Band v;
            v.id = static_cast<int>(bands.size());
            v.grade = gf + dir * j;
            v.is_virtual = true;
            v.edge_of = static_cast<int>(s);
            v.father = prev;
            v.n_b = 0;
            v.n_e = 2 * bands[s].outer_edge;
            v.width = Rational(0, 1);
            v.bbox = bands[s].bbox;
            v.filled_area = bands[s].filled_area;
            v.touches_border = bands[s].touches_border;
            prev = v.id;
            bands.push_back(std::move(v));
        }
        bands[s].father = prev;
    }
    for (auto& b : bands)
        if (b.father) bands[static_cast<std::size_t>(*b.father)].sons.push_back(b.id);
    for (auto& b : bands) std::sort(b.sons.begin(), b.sons.end());
    return tree;
}

}  // namespace lmw
