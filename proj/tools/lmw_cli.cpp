#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include "lmw/baseline.hpp"
#include "lmw/metrics.hpp"
#include "lmw/parallel.hpp"
#include "lmw/pgm.hpp"
#include "lmw/phantom.hpp"
#include "lmw/pipeline.hpp"
#include "lmw/serialize.hpp"

namespace fs = std::filesystem;
using namespace lmw;

namespace {

// I/O or data problem tied to a file; maps to exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad flag value discovered after parsing; maps to exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class F>
auto with_path(const fs::path& path, F&& f) {
    try {
        return f();
    } catch (const DecodeError& e) {
        throw DataError(path.string() + ": " + e.what());
    } catch (const std::system_error& e) {
        throw DataError(path.string() + ": " + e.code().message());
    } catch (const SpecError& e) {
        throw DataError(path.string() + ": " + e.what());
    } catch (const Json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

GrayImage load_input(const fs::path& path) {
    return with_path(path, [&] { return load_image_file(path); });
}

LabelMap load_labels(const fs::path& path) {
    return with_path(path, [&] { return LabelMap::from_image(load_image_file(path)); });
}

void save_text(const fs::path& path, const std::string& text) {
    with_path(path, [&] {
        write_text_file(path, text);
        return 0;
    });
}

void save_raster(const fs::path& path, const GrayImage& image) {
    with_path(path, [&] {
        save_image_file(path, image);
        return 0;
    });
}

ObjectPredicate parse_predicate(const std::string& text) {
    auto value_after = [&](std::size_t prefix) {
        try {
            std::size_t used = 0;
            const double v = std::stod(text.substr(prefix), &used);
            if (used != text.size() - prefix) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw UsageError("bad predicate '" + text + "'");
        }
    };
    try {
        if (text.rfind("area<=", 0) == 0) return ObjectPredicate::max_area_fraction(value_after(6));
        if (text.rfind("contrast>=", 0) == 0) return ObjectPredicate::min_contrast(value_after(10));
    } catch (const SpecError& e) {
        throw UsageError("bad predicate '" + text + "': " + e.what());
    }
    throw UsageError("bad predicate '" + text + "' (expected area<=THETA or contrast>=C)");
}

GrayImage overlay(const GrayImage& image, const std::vector<Contour>& contours) {
    GrayImage out = image;
    for (auto& v : out.pixels()) v = static_cast<std::uint16_t>(v / 2);
    const auto top = static_cast<std::uint16_t>(image.maxval());
    for (const auto& c : contours)
        for (Point p : c.points) out(p.x, p.y) = top;
    return out;
}

GrayImage to_8bit(const GrayImage& image) {
    if (image.maxval() <= 255) return image;
    GrayImage out(image.width(), image.height(), 255);
    for (std::size_t i = 0; i < image.size(); ++i)
        out.pixels()[i] = static_cast<std::uint16_t>((image.pixels()[i] * 255 + image.maxval() / 2) / image.maxval());
    return out;
}

struct SegmentOptions {
    fs::path input;
    int grades = kDefaultGrades;
    bool invert = false;
    bool iterative = false;
    int max_iter = 5;
    std::string predicate = "area<=0.2";
    int connectivity = 4;
    bool keep_border = false;
    bool strict = false;
    std::optional<fs::path> out_contours;
    std::optional<fs::path> out_labels;
    std::optional<fs::path> out_objects;
    std::optional<fs::path> overlay;
    std::optional<fs::path> dump_tree;
    std::optional<fs::path> out_dir;
};

SegmentConfig make_config(const SegmentOptions& o) {
    SegmentConfig cfg;
    cfg.n_grades = o.grades;
    cfg.invert = o.invert;
    cfg.connectivity = o.connectivity == 8 ? Connectivity::eight : Connectivity::four;
    cfg.keep_border_objects = o.keep_border;
    cfg.lmw.strict = o.strict;
    return cfg;
}

SegmentationResult run_segment(const GrayImage& image, const SegmentOptions& o) {
    const SegmentConfig cfg = make_config(o);
    if (!o.iterative) return segment(image, cfg);
    return segment_iterative(image, cfg, {parse_predicate(o.predicate), o.max_iter});
}

void write_segment_outputs(const GrayImage& image, const SegmentationResult& r, const SegmentOptions& o,
                           const fs::path* dir, const std::string& stem) {
    auto target = [&](const std::optional<fs::path>& explicit_path, const char* suffix) -> std::optional<fs::path> {
        if (dir) return *dir / (stem + suffix);
        return explicit_path;
    };
    if (auto p = target(o.out_contours, ".contours.json")) save_text(*p, dump(contours_to_json(r.contours)));
    if (auto p = target(o.out_labels, ".labels.pgm")) save_raster(*p, r.labels.to_image());
    if (auto p = target(o.out_objects, ".objects.json")) {
        Json arr = Json::array();
        for (const auto& obj : r.objects) arr.push_back(to_json(obj));
        save_text(*p, dump(arr));
    }
    if (o.overlay && !dir) {
        GrayImage ov = overlay(image, r.contours);
        if (o.overlay->extension() == ".png") ov = to_8bit(ov);
        save_raster(*o.overlay, ov);
    }
    if (o.dump_tree && !dir) {
        const SegmentConfig cfg = make_config(o);
        const BandTree tree = build_band_tree(quantize(image, cfg.n_grades, cfg.invert), cfg.connectivity);
        save_text(*o.dump_tree, dump(tree_to_json(tree)));
    }
}

void print_summary(const fs::path& input, const GrayImage& image, const SegmentationResult& r, const SegmentOptions& o,
                   double seconds) {
    std::cout << "input: " << input.string() << " (" << image.width() << "x" << image.height() << ", maxval "
              << image.maxval() << ")\n"
              << "grades: " << o.grades << (o.invert ? " (inverted)" : "") << "\n"
              << "connectivity: " << o.connectivity << "\n"
              << "bands: " << r.tree_summary.band_count << " (" << r.tree_summary.virtual_count << " virtual)\n"
              << "lmw bands: " << r.tree_summary.lmw_count << "\n";
    if (o.iterative) std::cout << "iterative: predicate " << o.predicate << ", max-iter " << o.max_iter << "\n";
    std::cout << "objects: " << r.objects.size() << "\n"
              << "time: " << std::fixed << std::setprecision(3) << seconds << " s\n";
}

int cmd_segment(const SegmentOptions& o) {
    parse_predicate(o.predicate);
    std::error_code ec;
    if (fs::is_directory(o.input, ec)) {
        if (!o.out_dir) throw UsageError("--input is a directory; --out-dir is required");
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(o.input)) {
            const auto ext = e.path().extension();
            if (e.is_regular_file() && (ext == ".pgm" || ext == ".png")) files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        fs::create_directories(*o.out_dir, ec);
        if (ec) throw DataError(o.out_dir->string() + ": " + ec.message());
        for (const auto& f : files) {
            const auto t0 = std::chrono::steady_clock::now();
            const GrayImage image = load_input(f);
            const auto r = run_segment(image, o);
            write_segment_outputs(image, r, o, &*o.out_dir, f.stem().string());
            print_summary(f, image, r, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        }
        return 0;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const GrayImage image = load_input(o.input);
    const auto r = run_segment(image, o);
    write_segment_outputs(image, r, o, nullptr, {});
    print_summary(o.input, image, r, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return 0;
}

struct PhantomOptions {
    std::optional<fs::path> spec;
    std::string kind = "step-disk";
    std::optional<std::uint64_t> seed;
    std::optional<int> width;
    std::optional<int> height;
    std::optional<double> noise;
    fs::path out_image;
    std::optional<fs::path> out_truth;
    std::optional<fs::path> out_spec;
};

int cmd_phantom(const PhantomOptions& o) {
    PhantomSpec spec;
    if (o.spec) {
        spec = with_path(*o.spec, [&] {
            const auto bytes = read_file(*o.spec);
            return phantom_spec_from_json(Json::parse(bytes.begin(), bytes.end()));
        });
    } else {
        try {
            spec = PhantomSpec::defaults(parse_phantom_kind(o.kind));
        } catch (const SpecError& e) {
            throw UsageError(e.what());
        }
    }
    if (o.seed) spec.seed = *o.seed;
    if (o.width) spec.width = *o.width;
    if (o.height) spec.height = *o.height;
    if (o.noise) spec.params.noise = *o.noise;
    if (const char* env = std::getenv("LMW_SEED"); env && *env) {
        try {
            std::size_t used = 0;
            spec.seed = std::stoull(env, &used);
            if (env[used] != '\0') throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw UsageError(std::string("LMW_SEED is not an unsigned integer: ") + env);
        }
    }
    Phantom ph;
    try {
        ph = make_phantom(spec);
    } catch (const SpecError& e) {
        throw DataError(std::string("phantom: ") + e.what());
    }
    save_raster(o.out_image, ph.image);
    if (o.out_truth) save_raster(*o.out_truth, ph.truth.to_image());
    if (o.out_spec) save_text(*o.out_spec, dump(to_json(spec)));
    std::cout << "phantom: " << to_string(spec.kind) << " " << spec.width << "x" << spec.height << ", seed "
              << spec.seed << ", objects " << ph.truth.max_label() << "\n";
    return 0;
}

struct CompareOptions {
    SegmentOptions seg;
    fs::path out_lmw;
    fs::path out_otsu;
    std::optional<fs::path> truth;
    std::optional<fs::path> summary;
};

int cmd_compare(const CompareOptions& o) {
    const GrayImage image = load_input(o.seg.input);
    const auto r = run_segment(image, o.seg);
    ThresholdResult otsu;
    try {
        otsu = otsu_threshold(image);
    } catch (const SpecError&) {
        otsu.threshold = image.maxval();
        otsu.mask = LabelMap(image.width(), image.height());
    }
    save_raster(o.out_lmw, r.labels.to_image());
    save_raster(o.out_otsu, otsu.mask.to_image());

    Json j;
    j["input"] = o.seg.input.string();
    j["grades"] = o.seg.grades;
    j["lmw"] = {{"objects", r.objects.size()}, {"labels", o.out_lmw.string()}};
    j["otsu"] = {{"threshold", otsu.threshold}, {"labels", o.out_otsu.string()}};
    if (o.truth) {
        const LabelMap truth = load_labels(*o.truth);
        LabelMap binary_truth = truth;
        for (auto& v : binary_truth.labels()) v = v ? 1 : 0;
        auto misclassified = [&](const LabelMap& pred) {
            std::size_t n = 0;
            for (std::size_t i = 0; i < pred.size(); ++i) n += (pred.labels()[i] != 0) != (truth.labels()[i] != 0);
            return n;
        };
        try {
            j["lmw"]["metrics"] = to_json(evaluate(r.labels, truth));
            j["lmw"]["misclassified_pixels"] = misclassified(r.labels);
            j["otsu"]["metrics"] = to_json(evaluate(otsu.mask, binary_truth));
            j["otsu"]["misclassified_pixels"] = misclassified(otsu.mask);
        } catch (const SpecError& e) {
            throw DataError(o.truth->string() + ": " + e.what());
        }
    }
    const std::string text = dump(j);
    if (o.summary) save_text(*o.summary, text);
    else std::cout << text;
    return 0;
}

int cmd_metrics(const fs::path& pred_path, const fs::path& truth_path) {
    const LabelMap pred = load_labels(pred_path);
    const LabelMap truth = load_labels(truth_path);
    if (pred.width() != truth.width() || pred.height() != truth.height())
        throw DataError(pred_path.string() + ": size differs from " + truth_path.string());
    std::cout << dump(to_json(evaluate(pred, truth)));
    return 0;
}

void add_segment_flags(CLI::App* cmd, SegmentOptions& o) {
    cmd->add_option("--input", o.input, "Input image (PGM or PNG) or a directory of them")->required();
    cmd->add_option("--grades", o.grades, "Number of grades N")->check(CLI::Range(1, 65535))->capture_default_str();
    cmd->add_flag("--invert", o.invert, "Segment dark objects on a bright background");
    cmd->add_option("--connectivity", o.connectivity, "Band connectivity")
        ->check(CLI::IsMember({4, 8}))
        ->capture_default_str();
    cmd->add_flag("--keep-border", o.keep_border, "Keep objects that touch the image border");
    cmd->add_flag("--strict", o.strict, "Require a strictly wider neighbor for LMW bands");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local-minimal-width band segmentation"};
    app.require_subcommand(1);
    int jobs = 0;
    app.add_option("--jobs", jobs, "Worker threads (0: runtime default)")->check(CLI::NonNegativeNumber);

    SegmentOptions seg;
    auto* segment_cmd = app.add_subcommand("segment", "Segment an image into LMW objects");
    add_segment_flags(segment_cmd, seg);
    segment_cmd->add_flag("--iterative", seg.iterative, "Re-segment objects that fail the predicate");
    segment_cmd->add_option("--max-iter", seg.max_iter, "Refinement rounds")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    segment_cmd->add_option("--predicate", seg.predicate, "area<=THETA or contrast>=C")->capture_default_str();
    segment_cmd->add_option("--out-contours", seg.out_contours, "Contours JSON");
    segment_cmd->add_option("--out-labels", seg.out_labels, "16-bit label PGM");
    segment_cmd->add_option("--out-objects", seg.out_objects, "Per-object statistics JSON");
    segment_cmd->add_option("--overlay", seg.overlay, "Contours drawn over the dimmed input (PGM or PNG)");
    segment_cmd->add_option("--dump-tree", seg.dump_tree, "Band tree JSON");
    segment_cmd->add_option("--out-dir", seg.out_dir, "Output directory when --input is a directory");
    segment_cmd->add_option("--jobs", jobs, "Worker threads (0: runtime default)")->check(CLI::NonNegativeNumber);

    PhantomOptions ph;
    auto* phantom_cmd = app.add_subcommand("phantom", "Generate a synthetic image with ground truth");
    phantom_cmd->add_option("--spec", ph.spec, "Phantom spec JSON");
    phantom_cmd->add_option("--kind", ph.kind, "ramp-disk, step-disk, annulus-band, grains-ramp or cracks-shadow")
        ->capture_default_str();
    phantom_cmd->add_option("--seed", ph.seed, "Random seed (LMW_SEED overrides)");
    phantom_cmd->add_option("--width", ph.width)->check(CLI::PositiveNumber);
    phantom_cmd->add_option("--height", ph.height)->check(CLI::PositiveNumber);
    phantom_cmd->add_option("--noise", ph.noise, "Uniform noise amplitude")->check(CLI::NonNegativeNumber);
    phantom_cmd->add_option("--out-image", ph.out_image, "Image output (PGM or PNG)")->required();
    phantom_cmd->add_option("--out-truth", ph.out_truth, "16-bit truth label PGM");
    phantom_cmd->add_option("--out-spec", ph.out_spec, "Effective spec JSON");

    CompareOptions cmp;
    auto* compare_cmd = app.add_subcommand("compare", "Run LMW segmentation and the Otsu baseline");
    add_segment_flags(compare_cmd, cmp.seg);
    compare_cmd->add_option("--out-lmw", cmp.out_lmw, "LMW label PGM")->required();
    compare_cmd->add_option("--out-otsu", cmp.out_otsu, "Otsu mask PGM")->required();
    compare_cmd->add_option("--truth", cmp.truth, "Truth labels for scoring both methods");
    compare_cmd->add_option("--summary", cmp.summary, "Summary JSON (default: stdout)");

    fs::path pred_path, truth_path;
    auto* metrics_cmd = app.add_subcommand("metrics", "Score predicted labels against truth labels");
    metrics_cmd->add_option("--pred", pred_path, "Predicted 16-bit label PGM")->required();
    metrics_cmd->add_option("--truth", truth_path, "Truth 16-bit label PGM")->required();

    auto usage = [&] {
        const auto active = app.get_subcommands();
        return active.empty() ? app.help() : active.front()->help();
    };
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << usage();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "lmw: " << e.what() << "\n\n" << usage();
        return 1;
    }

    set_thread_count(jobs);
    try {
        if (*segment_cmd) return cmd_segment(seg);
        if (*phantom_cmd) return cmd_phantom(ph);
        if (*compare_cmd) return cmd_compare(cmp);
        if (*metrics_cmd) return cmd_metrics(pred_path, truth_path);
    } catch (const UsageError& e) {
        std::cerr << "lmw: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "lmw: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "lmw: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
