#include "curvn/json_io.hpp"

#include <cmath>
#include <set>

namespace curvn {

namespace {

using nlohmann::json;

void reject_unknown_fields(const json& doc, const std::set<std::string>& allowed) {
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (!allowed.count(it.key()))
            throw schema_error(it.key(), "unknown field");
}

double number_field(const json& doc, const std::string& key, double fallback,
                    bool required = false) {
    if (!doc.contains(key)) {
        if (required) throw schema_error(key, "required field is missing");
        return fallback;
    }
    const json& v = doc.at(key);
    if (!v.is_number()) throw schema_error(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw schema_error(key, "must be finite");
    return x;
}

Vec vec_field(const json& doc, const std::string& key, Vec fallback,
              bool required = false) {
    if (!doc.contains(key)) {
        if (required) throw schema_error(key, "required field is missing");
        return fallback;
    }
    const json& v = doc.at(key);
    if (!v.is_array() || v.size() < 2 || v.size() > 3)
        throw schema_error(key, "expected an array of 2 or 3 numbers");
    Vec out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw schema_error(key, "expected numeric components");
        const double x = v[i].get<double>();
        if (!std::isfinite(x)) throw schema_error(key, "components must be finite");
        (i == 0 ? out.x : i == 1 ? out.y : out.z) = x;
    }
    return out;
}

std::vector<Vec> vec_list_field(const json& doc, const std::string& key) {
    if (!doc.contains(key)) throw schema_error(key, "required field is missing");
    const json& v = doc.at(key);
    if (!v.is_array()) throw schema_error(key, "expected an array of points");
    std::vector<Vec> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_array() || v[i].size() < 2 || v[i].size() > 3)
            throw schema_error(key, "entry " + std::to_string(i) +
                                        " must be an array of 2 or 3 numbers");
        Vec p;
        for (std::size_t c = 0; c < v[i].size(); ++c) {
            if (!v[i][c].is_number())
                throw schema_error(key, "entry " + std::to_string(i) + " must be numeric");
            (c == 0 ? p.x : c == 1 ? p.y : p.z) = v[i][c].get<double>();
        }
        out.push_back(p);
    }
    return out;
}

nlohmann::ordered_json vec_to_json(const Vec& v, bool force3 = false) {
    if (force3 || v.z != 0.0) return nlohmann::ordered_json::array({v.x, v.y, v.z});
    return nlohmann::ordered_json::array({v.x, v.y});
}

Curve curve_from(const json& doc, const std::string& kind) {
    if (kind == "circle") {
        reject_unknown_fields(doc, {"kind", "radius", "center"});
        const double radius = number_field(doc, "radius", 1.0, true);
        if (!(radius > 0.0)) throw schema_error("radius", "must be > 0");
        return Curve::circle(vec_field(doc, "center", {}), radius);
    }
    if (kind == "ellipse") {
        reject_unknown_fields(doc, {"kind", "a", "ecc", "center"});
        const double a = number_field(doc, "a", 1.0, true);
        const double ecc = number_field(doc, "ecc", 0.0, true);
        if (!(a > 0.0)) throw schema_error("a", "must be > 0");
        if (!(ecc >= 0.0 && ecc < 1.0))
            throw schema_error("ecc", "allowed range is [0, 1)");
        return Curve::ellipse(a, ecc, vec_field(doc, "center", {}));
    }
    if (kind == "line") {
        reject_unknown_fields(doc, {"kind", "point", "direction"});
        const Vec dir = vec_field(doc, "direction", {1, 0, 0}, true);
        if (!(norm2(dir) > 0.0)) throw schema_error("direction", "must be nonzero");
        return Curve::line(vec_field(doc, "point", {}), dir);
    }
    if (kind == "open-bump") {
        reject_unknown_fields(doc, {"kind", "amplitude", "width"});
        const double amplitude = number_field(doc, "amplitude", 1.0, true);
        const double width = number_field(doc, "width", 1.0, true);
        if (!(width > 0.0)) throw schema_error("width", "must be > 0");
        return Curve::open_bump(amplitude, width);
    }
    if (kind == "fourier-loop") {
        reject_unknown_fields(doc, {"kind", "cos", "sin"});
        FourierLoop loop;
        loop.cos_coeffs = vec_list_field(doc, "cos");
        loop.sin_coeffs = vec_list_field(doc, "sin");
        if (loop.cos_coeffs.size() != loop.sin_coeffs.size())
            throw schema_error("sin", "cos and sin lists must have equal length");
        if (loop.cos_coeffs.empty()) throw schema_error("cos", "need at least 1 harmonic");
        for (const Vec& c : loop.cos_coeffs)
            if (c.z != 0.0) throw schema_error("cos", "loops are planar; z must be 0");
        for (const Vec& c : loop.sin_coeffs)
            if (c.z != 0.0) throw schema_error("sin", "loops are planar; z must be 0");
        return Curve::fourier(std::move(loop));
    }
    if (kind == "spline") {
        reject_unknown_fields(doc, {"kind", "points", "closed"});
        const std::vector<Vec> pts = vec_list_field(doc, "points");
        bool closed = false;
        if (doc.contains("closed")) {
            if (!doc.at("closed").is_boolean())
                throw schema_error("closed", "expected a boolean");
            closed = doc.at("closed").get<bool>();
        }
        if (pts.size() < 4) throw schema_error("points", "need at least 4 points");
        return fit_spline(pts, closed);
    }
    throw schema_error("kind", "unknown curve kind \"" + kind + "\"");
}

WorldLine worldline_from(const json& doc, const std::string& kind) {
    auto window_of = [&](bool required) -> std::pair<double, double> {
        if (!doc.contains("window")) {
            if (required) throw schema_error("window", "required field is missing");
            return {-1.0, 1.0};
        }
        const json& w = doc.at("window");
        if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number())
            throw schema_error("window", "expected [t0, t1]");
        const double t0 = w[0].get<double>(), t1 = w[1].get<double>();
        if (!(t1 > t0)) throw schema_error("window", "t1 must exceed t0");
        return {t0, t1};
    };

    if (kind == "inertial") {
        reject_unknown_fields(doc, {"kind", "position", "velocity"});
        const Vec v = vec_field(doc, "velocity", {}, false);
        if (!(norm(v) < 1.0)) throw schema_error("velocity", "|velocity| must be < 1");
        return WorldLine::inertial(vec_field(doc, "position", {}), v);
    }
    if (kind == "wiggle") {
        reject_unknown_fields(doc, {"kind", "amplitude", "omega", "window", "axis", "drift"});
        const double amplitude = number_field(doc, "amplitude", 0.0, true);
        const double omega = number_field(doc, "omega", 1.0, true);
        const auto [t0, t1] = window_of(true);
        const Vec axis = vec_field(doc, "axis", {1, 0, 0});
        const Vec drift = vec_field(doc, "drift", {});
        if (!(norm(drift) < 1.0)) throw schema_error("drift", "|drift| must be < 1");
        return WorldLine::wiggle(amplitude, omega, t0, t1, axis, drift);
    }
    if (kind == "velocity-step") {
        reject_unknown_fields(doc, {"kind", "v0", "dv", "window", "r0"});
        const Vec v0 = vec_field(doc, "v0", {});
        const Vec dv = vec_field(doc, "dv", {}, true);
        const auto [t0, t1] = window_of(true);
        if (!(norm(v0) < 1.0)) throw schema_error("v0", "|v0| must be < 1");
        if (!(norm(v0 + dv) < 1.0)) throw schema_error("dv", "|v0 + dv| must be < 1");
        return WorldLine::velocity_step(v0, dv, t0, t1, vec_field(doc, "r0", {}));
    }
    throw schema_error("kind", "unknown worldline kind \"" + kind + "\"");
}

const std::set<std::string> kCurveKinds = {"circle", "ellipse", "line",
                                           "fourier-loop", "open-bump", "spline"};
const std::set<std::string> kWorldlineKinds = {"inertial", "wiggle", "velocity-step"};

} // namespace

Curve parse_curve(const json& doc) {
    if (!doc.is_object()) throw schema_error("(document)", "expected a JSON object");
    if (!doc.contains("kind")) throw schema_error("kind", "required field is missing");
    if (!doc.at("kind").is_string()) throw schema_error("kind", "expected a string");
    const std::string kind = doc.at("kind").get<std::string>();
    if (!kCurveKinds.count(kind))
        throw schema_error("kind", "unknown curve kind \"" + kind + "\"");
    return curve_from(doc, kind);
}

WorldLine parse_worldline(const json& doc) {
    if (!doc.is_object()) throw schema_error("(document)", "expected a JSON object");
    if (!doc.contains("kind")) throw schema_error("kind", "required field is missing");
    if (!doc.at("kind").is_string()) throw schema_error("kind", "expected a string");
    const std::string kind = doc.at("kind").get<std::string>();
    if (!kWorldlineKinds.count(kind))
        throw schema_error("kind", "unknown worldline kind \"" + kind + "\"");
    return worldline_from(doc, kind);
}

JobSpec parse_job(const json& doc) {
    static const std::set<std::string> commands = {
        "eval", "eval-open", "table", "invert", "anomaly",
        "photon", "boost", "minimize", "export"};
    reject_unknown_fields(doc, {"command", "input", "tol", "max-grid", "window",
                                "out", "format", "center", "radius", "beta"});
    JobSpec job;
    if (!doc.contains("command")) throw schema_error("command", "required field is missing");
    if (!doc.at("command").is_string()) throw schema_error("command", "expected a string");
    job.command = doc.at("command").get<std::string>();
    if (!commands.count(job.command))
        throw schema_error("command", "unknown command \"" + job.command + "\"");
    if (doc.contains("input")) {
        const json& input = doc.at("input");
        if (input.is_object())
            job.input = input;
        else
            throw schema_error("input", "expected an embedded spec object");
    }
    if (doc.contains("tol")) job.tol = number_field(doc, "tol", 0.0, true);
    if (doc.contains("max-grid")) {
        if (!doc.at("max-grid").is_number_integer())
            throw schema_error("max-grid", "expected an integer");
        job.max_grid = doc.at("max-grid").get<int>();
    }
    if (doc.contains("window")) job.window = number_field(doc, "window", 0.0, true);
    if (doc.contains("out")) {
        if (!doc.at("out").is_string()) throw schema_error("out", "expected a string");
        job.out_path = doc.at("out").get<std::string>();
    }
    if (doc.contains("format")) {
        if (!doc.at("format").is_string()) throw schema_error("format", "expected a string");
        job.format = doc.at("format").get<std::string>();
        if (job.format != "text" && job.format != "json" && job.format != "csv" &&
            job.format != "svg")
            throw schema_error("format", "allowed values: text, json, csv, svg");
    }
    if (doc.contains("center")) job.center = vec_field(doc, "center", {}, true);
    job.radius = number_field(doc, "radius", 1.0);
    if (!(job.radius > 0.0)) throw schema_error("radius", "must be > 0");
    if (doc.contains("beta")) {
        job.beta = vec_field(doc, "beta", {}, true);
        if (!(norm(*job.beta) < 1.0)) throw schema_error("beta", "|beta| must be < 1");
    }
    return job;
}

ParsedDocument parse_spec(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw schema_error("(document)", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw schema_error("(document)", "expected a JSON object");
    if (doc.contains("command")) return parse_job(doc);
    if (!doc.contains("kind")) throw schema_error("kind", "required field is missing");
    if (!doc.at("kind").is_string()) throw schema_error("kind", "expected a string");
    const std::string kind = doc.at("kind").get<std::string>();
    if (kWorldlineKinds.count(kind)) return parse_worldline(doc);
    return parse_curve(doc);
}

nlohmann::ordered_json serialize_curve(const Curve& curve) {
    nlohmann::ordered_json out;
    if (auto c = curve.as_circle()) {
        out["kind"] = "circle";
        out["radius"] = c->radius;
        if (!(c->center == Vec{})) out["center"] = vec_to_json(c->center);
        return out;
    }
    if (auto e = curve.as_ellipse()) {
        out["kind"] = "ellipse";
        out["a"] = e->semi_major;
        out["ecc"] = e->eccentricity;
        if (!(e->center == Vec{})) out["center"] = vec_to_json(e->center);
        return out;
    }
    if (auto l = curve.as_line()) {
        out["kind"] = "line";
        out["point"] = vec_to_json(l->point);
        out["direction"] = vec_to_json(l->direction);
        return out;
    }
    if (auto b = curve.as_bump()) {
        out["kind"] = "open-bump";
        out["amplitude"] = b->amplitude;
        out["width"] = b->width;
        return out;
    }
    if (auto f = curve.as_fourier()) {
        out["kind"] = "fourier-loop";
        nlohmann::ordered_json cos_list = nlohmann::ordered_json::array();
        nlohmann::ordered_json sin_list = nlohmann::ordered_json::array();
        for (const Vec& v : f->cos_coeffs) cos_list.push_back(vec_to_json(Vec{v.x, v.y, 0}));
        for (const Vec& v : f->sin_coeffs) sin_list.push_back(vec_to_json(Vec{v.x, v.y, 0}));
        out["cos"] = cos_list;
        out["sin"] = sin_list;
        return out;
    }
    if (auto s = curve.as_spline()) {
        out["kind"] = "spline";
        nlohmann::ordered_json pts = nlohmann::ordered_json::array();
        for (const Vec& p : s->points) pts.push_back(vec_to_json(p));
        out["points"] = pts;
        out["closed"] = s->closed;
        return out;
    }
    throw std::invalid_argument("serialize_curve: derived curves have no document form");
}

nlohmann::ordered_json serialize_worldline(const WorldLine& w) {
    nlohmann::ordered_json out;
    if (auto p = w.as_inertial()) {
        out["kind"] = "inertial";
        if (!(p->position0 == Vec{})) out["position"] = vec_to_json(p->position0, true);
        out["velocity"] = vec_to_json(p->velocity, true);
        return out;
    }
    if (auto p = w.as_wiggle()) {
        out["kind"] = "wiggle";
        out["amplitude"] = p->amplitude;
        out["omega"] = p->omega;
        out["window"] = nlohmann::ordered_json::array({p->t0, p->t1});
        if (!(p->axis == Vec{1, 0, 0})) out["axis"] = vec_to_json(p->axis, true);
        if (!(p->drift == Vec{})) out["drift"] = vec_to_json(p->drift, true);
        return out;
    }
    if (auto p = w.as_velocity_step()) {
        out["kind"] = "velocity-step";
        if (!(p->v0 == Vec{})) out["v0"] = vec_to_json(p->v0, true);
        out["dv"] = vec_to_json(p->dv, true);
        out["window"] = nlohmann::ordered_json::array({p->t0, p->t1});
        if (!(p->r0 == Vec{})) out["r0"] = vec_to_json(p->r0, true);
        return out;
    }
    throw std::invalid_argument(
        "serialize_worldline: derived worldlines have no document form");
}

nlohmann::ordered_json quadrature_to_json(const QuadratureResult& result) {
    nlohmann::ordered_json out;
    out["n"] = result.value;
    out["error_estimate"] = result.error_estimate;
    out["grid"] = result.grid_size;
    out["converged"] = result.converged;
    if (result.window > 0.0) {
        out["window"] = result.window;
        out["tail_estimate"] = result.tail_estimate;
    }
    nlohmann::ordered_json trace = nlohmann::ordered_json::array();
    for (const auto& [grid, value] : result.trace)
        trace.push_back({{"grid", grid}, {"value", value}});
    out["trace"] = trace;
    return out;
}

} // namespace curvn
