// Acceptance run: one PASS/FAIL line per criterion. Usage: lmw_acceptance <path-to-lmw-cli>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "lmw/baseline.hpp"
#include "lmw/metrics.hpp"
#include "lmw/pgm.hpp"
#include "lmw/phantom.hpp"
#include "lmw/pipeline.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace lmw;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---------------------------------------------------------------------------------------------

Outcome annulus_calibration() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int ok = 0;
    const auto t0 = Clock::now();
    for (int k = 0; k < 20; ++k) {
        // r2 - r1 >= 2
        const double r1 = 2.0 + u(rng) * 34.0;
        const double r2 = r1 + 2.0 + u(rng) * (40.0 - r1 - 2.0);
        const int size = static_cast<int>(std::ceil(2 * r2)) + 8;
        const double c = size / 2.0 + u(rng) - 0.5;
        const GrayImage img = oracle::annulus(size, c, c + u(rng) - 0.5, r1, r2);
        const BandTree tree = build_band_tree(quantize(img, kDefaultGrades));
        const Band* ring = nullptr;
        for (const auto& b : tree.bands())
            if (!b.is_virtual && b.grade == kDefaultGrades) ring = &b;
        if (!ring) continue;
        const double err = std::abs(ring->width.to_double() - (r2 - r1)) / (r2 - r1);
        worst = std::max(worst, err);
        ok += err <= 0.10;
    }
    const double t = seconds_since(t0);
    return {ok == 20 && t < 1.0, fmt("%d/20 within 10%%, worst relative error %.3f, %.3f s", ok, worst, t)};
}

std::vector<int> brute_force_lmw(const std::vector<int>& father, const std::vector<Rational>& width, bool exclude_root) {
    const int n = static_cast<int>(father.size());
    std::vector<int> out;
    for (int i = 0; i < n; ++i) {
        if (exclude_root && father[i] < 0) continue;
        bool ok = true;
        for (int j = 0; j < n; ++j)
            if ((father[i] == j || father[j] == i) && width[j] < width[i]) ok = false;
        if (ok) out.push_back(i);
    }
    return out;
}

Outcome lmw_oracle() {
    std::mt19937_64 rng(202);
    int agree = 0;
    for (int t = 0; t < 500; ++t) {
        const int n = 1 + static_cast<int>(rng() % 64);
        std::vector<int> father(static_cast<std::size_t>(n), -1);
        std::vector<Rational> width(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            if (i > 0) father[i] = static_cast<int>(rng() % static_cast<std::uint64_t>(i));
            width[i] = Rational(static_cast<std::int64_t>(rng() % 12), 1 + static_cast<std::int64_t>(rng() % 6));
        }
        // Shuffle node ids so the root is not always node 0.
        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<int> pf(father.size());
        std::vector<Rational> pw(width.size());
        for (int i = 0; i < n; ++i) {
            pf[perm[i]] = father[i] < 0 ? -1 : perm[father[i]];
            pw[perm[i]] = width[i];
        }
        const bool exclude = t % 2 == 0;
        agree += find_lmw_nodes(pf, pw, {.exclude_root = exclude}) == brute_force_lmw(pf, pw, exclude);
    }
    return {agree == 500, fmt("%d/500 random trees match pairwise comparison", agree)};
}

GrayImage smooth_noise(std::mt19937_64& rng, int w, int h) {
    const GrayImage noise = oracle::random_image(rng, w, h, 256);
    const int r = 2 + static_cast<int>(rng() % 6);
    GrayImage out(w, h, 255);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int s = 0, c = 0;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx)
                    if (noise.contains(x + dx, y + dy)) {
                        s += noise(x + dx, y + dy);
                        ++c;
                    }
            out(x, y) = static_cast<std::uint16_t>(s / c);
        }
    return out;
}

Outcome tree_invariants() {
    std::mt19937_64 rng(303);
    int partition = 0, single_root = 0, steps = 0, containment = 0, reachable = 0;
    std::int64_t bad_edges = 0;
    for (int t = 0; t < 100; ++t) {
        const GrayImage img = t % 2 ? smooth_noise(rng, 128, 128) : oracle::random_blobs(rng, 128, 128);
        const GradeMap gm = quantize(img, kDefaultGrades);
        const BandTree tree = build_band_tree(gm);
        std::int64_t total = 0;
        int roots = 0;
        bool step_ok = true, contain_ok = true;
        for (const auto& b : tree.bands()) {
            if (!b.is_virtual) total += b.n_b;
            if (!b.father) {
                ++roots;
                continue;
            }
            if (std::abs(b.grade - tree.band(*b.father).grade) != 1) {
                step_ok = false;
                ++bad_edges;
            }
        }
        // Enclosure: every pixel of a son's filled region lies in the father's filled region. The
        // root stands for the whole frame.
        std::vector<std::vector<char>> filled(tree.real_band_count());
        auto filled_of = [&](int id) -> const std::vector<char>& {
            auto& f = filled[static_cast<std::size_t>(id)];
            if (f.empty()) {
                f.assign(gm.grades.size(), 0);
                const FilledRegion fr = tree.filled_region(id);
                for (int ly = 0; ly < fr.height; ++ly)
                    for (int lx = 0; lx < fr.width; ++lx) {
                        const int x = fr.x0 + lx, y = fr.y0 + ly;
                        if (fr.at(lx, ly) != FilledRegion::exterior && img.contains(x, y)) f[img.index(x, y)] = 1;
                    }
            }
            return f;
        };
        for (const auto& b : tree.bands()) {
            if (b.is_virtual || !b.father) continue;
            int f = *b.father;
            while (tree.band(f).is_virtual) f = *tree.band(f).father;
            if (f == tree.root()) continue;
            if (!oracle::subset(filled_of(b.id), filled_of(f))) contain_ok = false;
        }
        std::vector<char> seen(tree.size(), 0);
        std::vector<int> stack{tree.root()};
        std::size_t visited = 0;
        while (!stack.empty()) {
            const int id = stack.back();
            stack.pop_back();
            if (seen[static_cast<std::size_t>(id)]++) continue;
            ++visited;
            for (int s : tree.band(id).sons) stack.push_back(s);
        }
        partition += total == 128 * 128;
        single_root += roots == 1;
        steps += step_ok;
        containment += contain_ok;
        reachable += visited == tree.size();
    }
    const bool pass = partition == 100 && single_root == 100 && steps == 100 && containment == 100 && reachable == 100;
    return {pass, fmt("partition %d/100, single root %d/100, tree %d/100, unit grade steps %d/100 (%lld same-grade "
                      "edges to the root), containment %d/100",
                      partition, single_root, reachable, steps, static_cast<long long>(bad_edges), containment)};
}

// ---------------------------------------------------------------------------------------------

struct PhantomCase {
    Phantom phantom;
    PhantomSpec spec;
    bool invert = false;
};

PhantomCase phantom_case(PhantomKind kind) {
    PhantomCase c;
    c.spec = PhantomSpec::defaults(kind);
    c.phantom = make_phantom(c.spec);
    c.invert = kind == PhantomKind::cracks_shadow;
    return c;
}

std::pair<double, double> center_of(const PhantomSpec& s) {
    return {s.params.cx >= 0 ? s.params.cx : s.width / 2.0 + 0.3, s.params.cy >= 0 ? s.params.cy : s.height / 2.0 + 0.2};
}

Outcome step_disk() {
    const PhantomCase pc = phantom_case(PhantomKind::step_disk);
    const auto r = segment(pc.phantom.image);
    const auto [cx, cy] = center_of(pc.spec);
    double worst = 0.0;
    for (const auto& c : r.contours)
        for (Point p : c.points) worst = std::max(worst, std::abs(std::hypot(p.x - cx, p.y - cy) - pc.spec.params.radius));
    return {r.objects.size() == 1 && worst <= 1.0,
            fmt("%zu object(s), max distance from the analytic circle %.3f px", r.objects.size(), worst)};
}

// Radius of steepest intensity descent from the radially binned profile of the raster.
double steepest_descent_radius(const GrayImage& img, double cx, double cy) {
    const double bin = 0.5;
    std::map<int, std::pair<double, int>> acc;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            auto& a = acc[static_cast<int>(std::hypot(x - cx, y - cy) / bin)];
            a.first += img(x, y);
            ++a.second;
        }
    std::vector<std::pair<double, double>> profile;  // radius, mean intensity
    for (const auto& [k, a] : acc) profile.push_back({(k + 0.5) * bin, a.first / a.second});
    double best = 0.0, at = 0.0;
    for (std::size_t i = 2; i + 2 < profile.size(); ++i) {
        const double slope = (profile[i + 2].second - profile[i - 2].second) / (profile[i + 2].first - profile[i - 2].first);
        if (-slope > best) {
            best = -slope;
            at = profile[i].first;
        }
    }
    return at;
}

Outcome ramp_disk() {
    const PhantomCase pc = phantom_case(PhantomKind::ramp_disk);
    const auto r = segment(pc.phantom.image);
    const auto [cx, cy] = center_of(pc.spec);
    const double oracle_r = steepest_descent_radius(pc.phantom.image, cx, cy);
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& c : r.contours)
        for (Point p : c.points) {
            sum += std::hypot(p.x - cx, p.y - cy);
            ++n;
        }
    const double mean = n ? sum / static_cast<double>(n) : 0.0;
    return {r.objects.size() == 1 && std::abs(mean - oracle_r) <= 2.0,
            fmt("%zu object(s), contour mean radius %.2f, steepest-descent radius %.2f", r.objects.size(), mean,
                oracle_r)};
}

Outcome grains() {
    const PhantomCase pc = phantom_case(PhantomKind::grains_ramp);
    const auto r = segment(pc.phantom.image);
    const MetricsReport m = evaluate(r.labels, pc.phantom.truth);
    double worst = 1.0;
    for (const auto& o : m.objects) worst = std::min(worst, o.iou);
    if (m.objects.empty()) worst = 0.0;
    const auto otsu = otsu_threshold(pc.phantom.image);
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < otsu.mask.size(); ++i)
        wrong += (otsu.mask.labels()[i] != 0) != (pc.phantom.truth.labels()[i] != 0);
    const bool pass = m.matched == 9 && m.missed == 0 && worst >= 0.9 && wrong >= 1;
    return {pass, fmt("matched %zu, missed %zu, spurious %zu, min IoU %.3f; Otsu misclassifies %zu px", m.matched,
                      m.missed, m.spurious, worst, wrong)};
}

Outcome cracks() {
    const PhantomCase pc = phantom_case(PhantomKind::cracks_shadow);
    SegmentConfig cfg;
    cfg.invert = true;
    const IterateConfig it{ObjectPredicate::max_area_fraction(0.2), 5};
    const auto first = segment(pc.phantom.image, cfg);
    const auto iter = segment_iterative(pc.phantom.image, cfg, it);
    const auto area = static_cast<std::int64_t>(pc.phantom.image.size());
    bool stop_ok = true;
    for (const auto& o : iter.objects)
        if (!satisfies(it.predicate, o, area) && o.iteration < it.max_iter) stop_ok = false;
    const double r0 = structure_recall(first.labels, pc.phantom.truth);
    const double r1 = structure_recall(iter.labels, pc.phantom.truth);
    return {stop_ok && r1 >= 0.8 && r1 > r0,
            fmt("stop rule %s, ridge recall %.3f iterative vs %.3f single pass (%zu vs %zu objects)",
                stop_ok ? "met" : "violated", r1, r0, iter.objects.size(), first.objects.size())};
}

Outcome affine_invariance() {
    std::mt19937_64 rng(808);
    int same = 0, total = 0;
    for (int t = 0; t < 20; ++t) {
        const GrayImage img = t % 2 ? smooth_noise(rng, 64, 64) : oracle::random_blobs(rng, 64, 64);
        const auto ref = segment(img);
        for (int k = 0; k < 5; ++k) {
            const int a = 1 + static_cast<int>(rng() % 250);
            const int b = static_cast<int>(rng() % static_cast<std::uint64_t>(65536 - a * 255));
            GrayImage mapped(img.width(), img.height(), 65535);
            for (std::size_t i = 0; i < img.size(); ++i)
                mapped.pixels()[i] = static_cast<std::uint16_t>(a * img.pixels()[i] + b);
            const auto r = segment(mapped);
            bool eq = r.contours.size() == ref.contours.size();
            for (std::size_t i = 0; eq && i < r.contours.size(); ++i) eq = r.contours[i].points == ref.contours[i].points;
            same += eq;
            ++total;
        }
    }
    return {same == total, fmt("%d/%d transformed images give identical contour sets", same, total)};
}

// A closed contour must be one pixel wide and keep the band's interior away from its exterior.
struct TopologyTally {
    int contours = 0;
    int closed = 0;
    int thin = 0;
    int separating = 0;
    int open_with_interior = 0;
};

bool separates(const std::vector<Point>& curve, const std::vector<Point>& interior, int w, int h) {
    const int pw = w + 2, ph = h + 2;
    std::vector<char> blocked(static_cast<std::size_t>(pw * ph), 0), reached(blocked.size(), 0);
    for (Point p : curve) blocked[static_cast<std::size_t>((p.y + 1) * pw + p.x + 1)] = 1;
    std::deque<int> q{0};
    reached[0] = 1;
    while (!q.empty()) {
        const int i = q.front();
        q.pop_front();
        for (auto [dx, dy] : oracle::offsets(4)) {
            const int x = i % pw + dx, y = i / pw + dy;
            if (x < 0 || y < 0 || x >= pw || y >= ph) continue;
            const int j = y * pw + x;
            if (reached[j] || blocked[j]) continue;
            reached[j] = 1;
            q.push_back(j);
        }
    }
    for (Point p : interior)
        if (reached[static_cast<std::size_t>((p.y + 1) * pw + p.x + 1)]) return false;
    return true;
}

void check_contour(const Contour& c, const std::vector<Point>& interior, int w, int h, TopologyTally& t) {
    ++t.contours;
    const std::set<Point> pts(c.points.begin(), c.points.end());
    if (!c.closed) {
        const bool empty = std::all_of(interior.begin(), interior.end(), [&](Point p) { return pts.count(p) > 0; });
        t.open_with_interior += !empty;
        return;
    }
    ++t.closed;
    bool thin = pts.size() == c.points.size();
    for (Point p : c.points) {
        int n = 0;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) n += (dx || dy) && pts.count({p.x + dx, p.y + dy});
        thin = thin && n == 2;
    }
    t.thin += thin;
    std::vector<Point> inside = interior;
    std::erase_if(inside, [&](Point p) { return pts.count(p) > 0; });
    t.separating += !inside.empty() && separates(c.points, inside, w, h);
}

// Pixels the contour of `band_id` must enclose: the holes of the band, or for a leaf band (and
// for a virtual band, its son) every filled pixel that is not 4-adjacent to the exterior.
std::vector<Point> interior_of(const BandTree& tree, int band_id) {
    const Band& b = tree.band(band_id);
    const FilledRegion fr = tree.filled_region(b.is_virtual ? b.edge_of : band_id);
    std::vector<Point> holes, core;
    for (int ly = 1; ly < fr.height - 1; ++ly)
        for (int lx = 1; lx < fr.width - 1; ++lx) {
            const auto c = fr.at(lx, ly);
            if (c == FilledRegion::exterior) continue;
            if (c == FilledRegion::hole) holes.push_back({fr.x0 + lx, fr.y0 + ly});
            bool rim = false;
            for (auto [dx, dy] : oracle::offsets(4)) rim = rim || fr.at(lx + dx, ly + dy) == FilledRegion::exterior;
            if (!rim) core.push_back({fr.x0 + lx, fr.y0 + ly});
        }
    return !b.is_virtual && !holes.empty() ? holes : core;
}

Outcome thinning_topology() {
    TopologyTally t;
    for (auto kind : {PhantomKind::step_disk, PhantomKind::ramp_disk, PhantomKind::grains_ramp, PhantomKind::cracks_shadow}) {
        const PhantomCase pc = phantom_case(kind);
        const int w = pc.phantom.image.width(), h = pc.phantom.image.height();
        const BandTree tree = build_band_tree(quantize(pc.phantom.image, kDefaultGrades, pc.invert));
        for (int id : find_lmw_bands(tree)) {
            const auto interior = interior_of(tree, id);
            for (const auto& c : shrink_band(tree, id)) {
                check_contour(c, interior, w, h, t);
            }
        }
        if (kind == PhantomKind::cracks_shadow) {
            SegmentConfig cfg;
            cfg.invert = true;
            const auto r = segment_iterative(pc.phantom.image, cfg, {ObjectPredicate::max_area_fraction(0.2), 5});
            for (std::size_t i = 0; i < r.contours.size(); ++i) {
                std::vector<Point> inside;
                const LocalMask& m = r.masks[i];
                for (int y = m.y0; y < m.y0 + m.height; ++y)
                    for (int x = m.x0; x < m.x0 + m.width; ++x)
                        if (m.test(x, y)) inside.push_back({x, y});
                check_contour(r.contours[i], inside, w, h, t);
            }
        }
    }
    const bool pass = t.closed > 0 && t.thin == t.closed && t.separating == t.closed && t.open_with_interior == 0;
    return {pass, fmt("%d contours: %d closed (%d one pixel wide, %d separating), %d open (%d of them around a "
                      "non-empty interior)",
                      t.contours, t.closed, t.thin, t.separating, t.contours - t.closed, t.open_with_interior)};
}

// ---------------------------------------------------------------------------------------------

int run(const std::string& cmd) { return std::system((cmd + " > /dev/null 2>&1").c_str()); }

Outcome cli_determinism(const std::string& cli) {
    if (cli.empty()) return {false, "no CLI path given"};
    const fs::path dir = fs::temp_directory_path() / ("lmw_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string img = (dir / "grains512.pgm").string();
    if (run(cli + " phantom --kind grains-ramp --width 512 --height 512 --out-image " + img) != 0)
        return {false, "phantom generation failed"};
    const char* outputs[] = {"contours.json", "labels.pgm", "objects.json", "overlay.pgm", "tree.json"};
    std::vector<std::vector<std::vector<std::uint8_t>>> runs;
    double slowest = 0.0;
    bool all_ok = true;
    int k = 0;
    for (const char* jobs : {"1", "2", "0", "4"}) {
        const fs::path out = dir / ("run" + std::to_string(k++));
        fs::create_directories(out);
        auto o = [&](const char* name) { return (out / name).string(); };
        const auto t0 = Clock::now();
        const int rc = run(cli + " segment --jobs " + jobs + " --input " + img + " --out-contours " + o("contours.json") +
                           " --out-labels " + o("labels.pgm") + " --out-objects " + o("objects.json") + " --overlay " +
                           o("overlay.pgm") + " --dump-tree " + o("tree.json"));
        slowest = std::max(slowest, seconds_since(t0));
        all_ok = all_ok && rc == 0;
        std::vector<std::vector<std::uint8_t>> files;
        for (const char* name : outputs) files.push_back(fs::exists(out / name) ? read_file(out / name) : std::vector<std::uint8_t>{});
        runs.push_back(std::move(files));
    }
    bool identical = true;
    for (const auto& r : runs) identical = identical && r == runs.front();
    std::error_code ec;
    fs::remove_all(dir, ec);
    return {all_ok && identical && slowest < 2.0,
            fmt("4 runs (--jobs 1, 2, default, 4): exit codes %s, outputs %s, slowest %.3f s", all_ok ? "0" : "nonzero",
                identical ? "byte-identical" : "DIFFER", slowest)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"annulus width calibration", annulus_calibration},
        {"LMW selection matches brute force", lmw_oracle},
        {"partition and tree invariants", tree_invariants},
        {"step-edge disk", step_disk},
        {"ramp disk radius", ramp_disk},
        {"grains under an illumination ramp", grains},
        {"iterative refinement of cracks", cracks},
        {"affine intensity invariance", affine_invariance},
        {"thinning topology", thinning_topology},
        {"CLI determinism and speed", [&] { return cli_determinism(cli); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
