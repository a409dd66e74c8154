#include <doctest.h>

#include <sstream>

#include "curvn/json_io.hpp"
#include "curvn/svg.hpp"
#include "oracles.hpp"

using namespace curvn;
using nlohmann::json;

TEST_CASE("parse_curve: reference documents") {
    const Curve c = parse_curve(json::parse(R"({"kind":"circle","radius":1})"));
    CHECK(c.kind() == "circle");
    CHECK(c.as_circle()->radius == 1.0);
    CHECK(norm(c.at(0.0).position - Vec{1, 0, 0}) < 1e-15);
}

TEST_CASE("parse_curve: out-of-range values name the field and its range") {
    try {
        parse_curve(json::parse(R"({"kind":"ellipse","a":1,"ecc":1.2})"));
        FAIL("expected schema_error");
    } catch (const schema_error& e) {
        CHECK(e.field() == "ecc");
        CHECK(std::string(e.what()).find("[0, 1)") != std::string::npos);
    }
}

TEST_CASE("parse_curve: unknown fields are rejected by name") {
    try {
        parse_curve(json::parse(R"({"kind":"circle","radius":1,"color":"red"})"));
        FAIL("expected schema_error");
    } catch (const schema_error& e) {
        CHECK(e.field() == "color");
        CHECK(std::string(e.what()).find("unknown field") != std::string::npos);
    }
}

TEST_CASE("parse_spec: dispatch and malformed input") {
    CHECK(std::holds_alternative<Curve>(parse_spec(R"({"kind":"open-bump","amplitude":1,"width":2})")));
    CHECK(std::holds_alternative<WorldLine>(
        parse_spec(R"({"kind":"wiggle","amplitude":0.01,"omega":2,"window":[-8,8]})")));
    CHECK(std::holds_alternative<JobSpec>(
        parse_spec(R"({"command":"table","out":"t.json"})")));
    CHECK_THROWS_AS(parse_spec("{not json"), schema_error);
    CHECK_THROWS_AS(parse_spec(R"({"kind":"nonsense"})"), schema_error);
}

TEST_CASE("parse_worldline: velocity bounds enforced") {
    try {
        parse_worldline(json::parse(R"({"kind":"inertial","velocity":[1.2,0,0]})"));
        FAIL("expected schema_error");
    } catch (const schema_error& e) {
        CHECK(e.field() == "velocity");
    }
    CHECK_THROWS_AS(
        parse_job(json::parse(R"({"command":"boost","beta":[0.9,0.9,0.9]})")),
        schema_error);
}

TEST_CASE("round-trip: parse(serialize(curve)) reproduces every built-in kind") {
    std::vector<Curve> curves;
    curves.push_back(Curve::circle({0.5, -1, 0}, 2.5));
    curves.push_back(Curve::ellipse(1.5, 0.7, {1, 2, 0}));
    curves.push_back(Curve::line({0, 1, 0}, {2, 0.5, 0}));
    curves.push_back(Curve::open_bump(0.8, 1.3));
    curves.push_back(Curve::fourier(oracle::sample_loop()));
    std::vector<Vec> pts;
    for (int i = 0; i < 8; ++i)
        pts.push_back({std::cos(kTwoPi * i / 8), std::sin(kTwoPi * i / 8), 0});
    curves.push_back(fit_spline(pts, true));

    for (const Curve& c : curves) {
        const Curve back = parse_curve(json::parse(serialize_curve(c).dump()));
        CHECK(back.kind() == c.kind());
        CHECK(back.topology() == c.topology());
        for (double s : {0.0, 0.9, 2.2, 5.1}) {
            const double t = c.closed() ? s : s - 2.0;
            CHECK(norm(back.at(t).position - c.at(t).position) == doctest::Approx(0.0));
            CHECK(norm(back.at(t).velocity - c.at(t).velocity) == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("round-trip: worldline documents") {
    std::vector<WorldLine> lines;
    lines.push_back(WorldLine::inertial({1, 0, 0}, {0.2, 0.1, 0}));
    lines.push_back(WorldLine::wiggle(0.01, 2.0, -8.0, 8.0, {0, 1, 0}, {0.1, 0, 0}));
    lines.push_back(WorldLine::velocity_step({0.1, 0, 0}, {0.05, 0, 0}, -2.0, 2.0));
    for (const WorldLine& w : lines) {
        const WorldLine back = parse_worldline(json::parse(serialize_worldline(w).dump()));
        CHECK(back.kind() == w.kind());
        for (double t : {-3.0, 0.0, 1.7, 9.0}) {
            CHECK(norm(back.at(t).position - w.at(t).position) == doctest::Approx(0.0));
            CHECK(norm(back.at(t).velocity - w.at(t).velocity) == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("serialize_curve: derived curves are rejected") {
    CHECK_THROWS_AS(serialize_curve(Curve::circle({}, 1.0).translated({1, 0, 0})),
                    std::invalid_argument);
}

TEST_CASE("job parsing: fields and validation") {
    const JobSpec job = parse_job(json::parse(
        R"({"command":"eval","input":{"kind":"circle","radius":1},"tol":1e-9,"out":"r.json","format":"json"})"));
    CHECK(job.command == "eval");
    CHECK(job.tol == doctest::Approx(1e-9));
    CHECK(job.out_path == "r.json");
    CHECK(job.format == "json");
    CHECK_THROWS_AS(parse_job(json::parse(R"({"command":"frobnicate"})")), schema_error);
    CHECK_THROWS_AS(parse_job(json::parse(R"({"command":"eval","surprise":1})")),
                    schema_error);
}

TEST_CASE("svg export: deterministic bytes and on-circle points") {
    const Curve c = Curve::circle({}, 1.0);
    SvgOptions opt;
    opt.caption = "n = 19.7392";
    std::ostringstream a, b;
    export_plot(c, opt, a);
    export_plot(c, opt, b);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("n = 19.7392") != std::string::npos);
    CHECK(a.str().find("<svg xmlns") != std::string::npos);

    // sampled polyline points must sit on a common circle within 1e-3 of the
    // viewport scale
    const std::string svg = a.str();
    const auto start = svg.find("points=\"") + 8;
    const auto end = svg.find('"', start);
    std::istringstream pts(svg.substr(start, end - start));
    double min_x = 1e9, max_x = -1e9, min_y = 1e9, max_y = -1e9;
    std::vector<std::pair<double, double>> xy;
    std::string tok;
    while (pts >> tok) {
        const auto comma = tok.find(',');
        const double x = std::stod(tok.substr(0, comma));
        const double y = std::stod(tok.substr(comma + 1));
        xy.emplace_back(x, y);
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    }
    CHECK(xy.size() == 1025);  // 1024 samples plus the closing point
    const double cx = 0.5 * (min_x + max_x), cy = 0.5 * (min_y + max_y);
    const double r = 0.5 * (max_x - min_x);
    for (const auto& [x, y] : xy) {
        const double d = std::sqrt((x - cx) * (x - cx) + (y - cy) * (y - cy));
        CHECK(std::abs(d - r) < 1e-3 * r);
    }
}

TEST_CASE("quadrature report JSON carries the documented fields") {
    QuadratureResult r;
    r.value = 19.7392;
    r.error_estimate = 1e-9;
    r.grid_size = 128;
    r.converged = true;
    r.trace = {{64, 19.7}, {128, 19.7392}};
    const auto j = quadrature_to_json(r);
    CHECK(j.at("n").get<double>() == doctest::Approx(19.7392));
    CHECK(j.at("converged").get<bool>());
    CHECK(j.at("trace").size() == 2);
}
