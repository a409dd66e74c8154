#pragma once

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "curvn/curve.hpp"
#include "curvn/quadrature.hpp"
#include "curvn/worldline.hpp"

namespace curvn {

// Schema violation in a spec document; message names the offending field.
class schema_error : public std::runtime_error {
public:
    schema_error(std::string field, const std::string& message)
        : std::runtime_error("field \"" + field + "\": " + message),
          field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// Job description: one command plus I/O and tolerance overrides. "input" may
// be an embedded spec object or a path to one.
struct JobSpec {
    std::string command;
    nlohmann::json input;  // embedded curve/worldline document (resolved)
    std::optional<double> tol;
    std::optional<int> max_grid;
    std::optional<double> window;
    std::string out_path;
    std::string format = "text";
    std::optional<Vec> center;  // invert / anomaly
    double radius = 1.0;
    std::optional<Vec> beta;  // boost
};

using ParsedDocument = std::variant<Curve, WorldLine, JobSpec>;

// Dispatches on the document shape: "kind" selects a curve or worldline,
// "command" selects a job. Unknown fields are rejected by name.
ParsedDocument parse_spec(const std::string& json_text);

Curve parse_curve(const nlohmann::json& doc);
WorldLine parse_worldline(const nlohmann::json& doc);
JobSpec parse_job(const nlohmann::json& doc);

// Inverse of parse_curve for the serializable kinds; derived curves
// (transformed, inverted) are rejected.
nlohmann::ordered_json serialize_curve(const Curve& curve);
nlohmann::ordered_json serialize_worldline(const WorldLine& w);

nlohmann::ordered_json quadrature_to_json(const QuadratureResult& result);

} // namespace curvn
