#include "lmw/serialize.hpp"

namespace lmw {

Json to_json(const Contour& contour) {
    Json points = Json::array();
    for (const auto& p : contour.points) points.push_back({p.x, p.y});
    return Json{{"band_id", contour.band_id}, {"grade", contour.grade}, {"closed", contour.closed},
                {"points", std::move(points)}};
}

Json contours_to_json(const std::vector<Contour>& contours) {
    Json out = Json::array();
    for (const auto& c : contours) out.push_back(to_json(c));
    return out;
}

Json tree_to_json(const BandTree& tree) {
    Json bands = Json::array();
    for (const auto& b : tree.bands()) {
        bands.push_back({{"id", b.id},
                         {"grade", b.grade},
                         {"n_B", b.n_b},
                         {"n_E", b.n_e},
                         {"width", b.width.to_double()},
                         {"width_exact", b.width.str()},
                         {"virtual", b.is_virtual},
                         {"father", b.father ? Json(*b.father) : Json(nullptr)},
                         {"sons", b.sons}});
    }
    return Json{{"width", tree.width()},
                {"height", tree.height()},
                {"connectivity", static_cast<int>(tree.connectivity())},
                {"root", tree.root()},
                {"bands", std::move(bands)}};
}

Json to_json(const MetricsReport& report) {
    Json objects = Json::array();
    for (const auto& m : report.objects)
        objects.push_back({{"pred_id", m.pred_id}, {"truth_id", m.truth_id}, {"iou", m.iou}, {"dice", m.dice}});
    return Json{{"mean_iou", report.mean_iou}, {"matched", report.matched},     {"missed", report.missed},
                {"spurious", report.spurious}, {"missed_ids", report.missed_ids}, {"spurious_ids", report.spurious_ids},
                {"objects", std::move(objects)}};
}

Json to_json(const ObjectStats& o) {
    return Json{{"label", o.label},
                {"band_id", o.band_id},
                {"grade", o.grade},
                {"area", o.area},
                {"mean_intensity", o.mean_intensity},
                {"contrast", o.contrast},
                {"iteration", o.iteration},
                {"touches_border", o.touches_border}};
}

Json to_json(const PhantomSpec& spec) {
    const auto& p = spec.params;
    return Json{{"kind", std::string(to_string(spec.kind))},
                {"seed", spec.seed},
                {"width", spec.width},
                {"height", spec.height},
                {"params",
                 {{"maxval", p.maxval},
                  {"cx", p.cx},
                  {"cy", p.cy},
                  {"radius", p.radius},
                  {"r1", p.r1},
                  {"r2", p.r2},
                  {"softness", p.softness},
                  {"background", p.background},
                  {"peak", p.peak},
                  {"count", p.count},
                  {"ramp_low", p.ramp_low},
                  {"ramp_high", p.ramp_high},
                  {"contrast", p.contrast},
                  {"gap", p.gap},
                  {"shadow_radius", p.shadow_radius},
                  {"shadow_blur", p.shadow_blur},
                  {"ridge_halfwidth", p.ridge_halfwidth},
                  {"plateau", p.plateau},
                  {"ridge_depth", p.ridge_depth},
                  {"segment_length", p.segment_length},
                  {"noise", p.noise}}}};
}

namespace {

template <typename T>
void read_field(const Json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw SpecError(std::string("phantom spec field '") + key + "' has the wrong type");
    }
}

}  // namespace

PhantomSpec phantom_spec_from_json(const Json& j) {
    if (!j.is_object()) throw SpecError("phantom spec must be a JSON object");
    if (!j.contains("kind") || !j["kind"].is_string()) throw SpecError("phantom spec needs a string 'kind'");
    PhantomSpec s = PhantomSpec::defaults(parse_phantom_kind(j["kind"].get<std::string>()));
    read_field(j, "seed", s.seed);
    read_field(j, "width", s.width);
    read_field(j, "height", s.height);
    if (j.contains("params")) {
        const Json& q = j["params"];
        if (!q.is_object()) throw SpecError("phantom spec 'params' must be an object");
        auto& p = s.params;
        read_field(q, "maxval", p.maxval);
        read_field(q, "cx", p.cx);
        read_field(q, "cy", p.cy);
        read_field(q, "radius", p.radius);
        read_field(q, "r1", p.r1);
        read_field(q, "r2", p.r2);
        read_field(q, "softness", p.softness);
        read_field(q, "background", p.background);
        read_field(q, "peak", p.peak);
        read_field(q, "count", p.count);
        read_field(q, "ramp_low", p.ramp_low);
        read_field(q, "ramp_high", p.ramp_high);
        read_field(q, "contrast", p.contrast);
        read_field(q, "gap", p.gap);
        read_field(q, "shadow_radius", p.shadow_radius);
        read_field(q, "shadow_blur", p.shadow_blur);
        read_field(q, "ridge_halfwidth", p.ridge_halfwidth);
        read_field(q, "plateau", p.plateau);
        read_field(q, "ridge_depth", p.ridge_depth);
        read_field(q, "segment_length", p.segment_length);
        read_field(q, "noise", p.noise);
    }
    return s;
}

std::string dump(const Json& j) { return j.dump() + "\n"; }

}  // namespace lmw
